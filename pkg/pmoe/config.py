from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import List, Optional

from pmoe.errors import InvalidConfig
from pmoe.event_log import open_log, is_logging


@dataclass
class PmoeConfig:
    """Settings of the covariate selection pipeline.

    Attributes
    ------------
    tau: float
        weight of the treatment model in the objective, smaller values favour
        covariates associated with treatment
    pilot_ridge: float or None
        ridge used by both pilot fits, None picks 0 when n > 2r and 1.0 otherwise
    orthogonalize: bool
        run Gram-Schmidt on the covariates before solving (penalty weights
        still come from the original covariates)
    n_lambdas: int
        size of the default lambda grid
    lambda_ratio: float or None
        smallest/largest lambda of the default grid, None picks 1e-4 when
        n > r and 1e-2 otherwise
    lambda_grid: list of float or None
        explicit grid, overrides n_lambdas and lambda_ratio
    tol: float
        KKT tolerance of the proximal solver
    max_iter: int
        iteration cap of the proximal solver
    parallel_path: bool
        solve the grid cold-started in parallel instead of warm-started in sequence
    n_jobs: int or None
        joblib workers, None reads PMOE_THREADS
    gcv_gamma: float or None
        parameters GCV charges per selected covariate, None picks
        max(1, log(n) / 2)
    """

    tau: float = 0.5
    pilot_ridge: Optional[float] = None
    orthogonalize: bool = False
    n_lambdas: int = 50
    lambda_ratio: Optional[float] = None
    lambda_grid: Optional[List[float]] = field(default=None)
    tol: float = 1e-7
    max_iter: int = 10000
    parallel_path: bool = False
    n_jobs: Optional[int] = None
    gcv_gamma: Optional[float] = None

    def __post_init__(self):
        if not (self.tau > 0 and self.tau < float("inf")):
            raise InvalidConfig("tau must be positive and finite, got %r" % self.tau)
        if self.pilot_ridge is not None and self.pilot_ridge < 0:
            raise InvalidConfig("pilot ridge must be nonnegative")
        if self.gcv_gamma is not None and not self.gcv_gamma >= 1.0:
            raise InvalidConfig("gcv_gamma must be at least 1, got %r" % self.gcv_gamma)
        if self.n_lambdas < 1:
            raise InvalidConfig("n_lambdas must be at least 1")
        if self.lambda_grid is not None:
            if len(self.lambda_grid) == 0 or min(self.lambda_grid) <= 0:
                raise InvalidConfig("lambda grid must be a nonempty list of positives")
            self.lambda_grid = [float(v) for v in self.lambda_grid]


def default_pilot_ridge(n: int, r: int) -> float:
    if n > 2 * r:
        return 0.0
    return 1.0


def default_gcv_gamma(n: int) -> float:
    return max(1.0, math.log(n) / 2.0)


def default_lambda_ratio(n: int, r: int) -> float:
    if n > r:
        return 1e-4
    return 1e-2


def n_jobs_from_env(n_jobs: Optional[int] = None) -> int:
    """Worker count: explicit value, else PMOE_THREADS, else 1."""
    if n_jobs is not None:
        return max(1, int(n_jobs))
    if "PMOE_THREADS" in os.environ:
        try:
            return max(1, int(os.getenv("PMOE_THREADS")))
        except ValueError:
            raise InvalidConfig(
                "PMOE_THREADS must be an integer, got %r" % os.getenv("PMOE_THREADS")
            )
    return 1


def activate_log_from_env() -> bool:
    """Open the event log when LOG_FILE is set, returns whether logging is on."""
    if "LOG_FILE" in os.environ and not is_logging():
        open_log(os.getenv("LOG_FILE"))
    return is_logging()
