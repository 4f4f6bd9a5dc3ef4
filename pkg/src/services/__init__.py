from .oracle_service import UniformNoiseOracle, VectorOracle
from .poker_service import PokerOracle
from .policy_service import FixedPolicy, ScheduledPolicy, ChiSquarePolicy, parse_policy
from .campaign_service import CampaignRunner, run_campaign, summarize
from .mnist_service import MnistRelabeler, relabel_campaign

__all__ = [
    'UniformNoiseOracle',
    'VectorOracle',
    'PokerOracle',
    'FixedPolicy',
    'ScheduledPolicy',
    'ChiSquarePolicy',
    'parse_policy',
    'CampaignRunner',
    'run_campaign',
    'summarize',
    'MnistRelabeler',
    'relabel_campaign'
]
