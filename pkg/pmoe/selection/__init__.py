from .pilot import PilotEstimates, fit_pilot_outcome, fit_pilot_treatment, fit_pilots
from .objective import (
    PenaltyWeights,
    PmoeProblem,
    penalty_weights,
    unit_weights,
    objective,
    gradient,
)
from .solver import PmoeFit, solve, kkt_violation, soft_threshold
from .tuning import (
    GcvTerms,
    TuningPath,
    effective_parameters,
    gcv,
    gcv_components,
    lambda_max,
    pick_index,
    select_lambda,
)
from .pipeline import Selection, select_covariates
