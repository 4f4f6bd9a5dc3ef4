from .labeling import Example, ProbabilityVector, VoteTally, BudgetLedger
from .results import MajorityProbResult, LabeledExample, CampaignResult, CampaignSummary
from .poker import Card, HandRank, Equity

__all__ = [
    'Example',
    'ProbabilityVector',
    'VoteTally',
    'BudgetLedger',
    'MajorityProbResult',
    'LabeledExample',
    'CampaignResult',
    'CampaignSummary',
    'Card',
    'HandRank',
    'Equity'
]
