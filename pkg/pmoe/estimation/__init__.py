from .effect import EffectEstimate, estimate_effect, propensity
from .bootstrap import bootstrap_se, bootstrap_replicate, threshold_selection
