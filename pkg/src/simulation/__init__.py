from .campaign_manager import CampaignManager, run_campaign, run_generation
from .tsnc import DensityAdvisor, default_ladder, tsnc_next_density
from .comparison import compare_model_sim, erasure_scaling, DEFAULT_TOLERANCES

__all__ = [
    'CampaignManager', 'run_campaign', 'run_generation',
    'DensityAdvisor', 'default_ladder', 'tsnc_next_density',
    'compare_model_sim', 'erasure_scaling', 'DEFAULT_TOLERANCES',
]
