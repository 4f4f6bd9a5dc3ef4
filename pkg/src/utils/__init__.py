from .exceptions import (
    LabelingError,
    NoiseModelError,
    BudgetExhaustedError,
    CardError,
    PolicySpecError,
    IdxFormatError,
    ConfigError
)
from .logger import get_logger

__all__ = [
    'LabelingError',
    'NoiseModelError',
    'BudgetExhaustedError',
    'CardError',
    'PolicySpecError',
    'IdxFormatError',
    'ConfigError',
    'get_logger'
]
