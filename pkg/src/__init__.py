# Label Budget
