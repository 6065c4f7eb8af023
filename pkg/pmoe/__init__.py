from .errors import PmoeError, ValidationError, NumericalError
from .config import PmoeConfig
from .data import Dataset, OrthogonalizedDataset, standardize, gram_schmidt, read_csv
from .selection import (
    PilotEstimates,
    fit_pilots,
    PenaltyWeights,
    penalty_weights,
    PmoeProblem,
    PmoeFit,
    solve,
    TuningPath,
    select_lambda,
    select_covariates,
)
from .estimation import EffectEstimate, estimate_effect, bootstrap_se
from .methods import PmoeMethod, YFitMethod, OracleMethod, y_fit, oracle
from .scenarios import Scenario, generate, get_scenario
from .simulation import SimulationReport, run
