from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from pmoe.config import PmoeConfig
from pmoe.data import Dataset, gram_schmidt
from pmoe.event_log import log_event
from pmoe.selection.objective import PenaltyWeights, PmoeProblem, penalty_weights
from pmoe.selection.pilot import PilotEstimates, fit_pilots
from pmoe.selection.solver import PmoeFit
from pmoe.selection.tuning import TuningPath, select_lambda


@dataclass(frozen=True, eq=False)
class Selection(object):
    """Everything the selection pipeline produced for one dataset."""

    dataset: Dataset
    working: object
    pilots: PilotEstimates
    weights: PenaltyWeights
    problem: PmoeProblem
    path: TuningPath
    config: PmoeConfig

    @property
    def fit(self) -> PmoeFit:
        return self.path.selected_fit

    @property
    def selected(self) -> Tuple[int, ...]:
        return self.fit.selected

    @property
    def selected_names(self) -> Tuple[str, ...]:
        return tuple(self.dataset.column_names[j] for j in self.selected)

    @property
    def orthogonalized(self) -> bool:
        return self.working is not self.dataset

    def alpha_hat(self) -> np.ndarray:
        return self.fit.alpha_hat


def select_covariates(ds: Dataset, config: Optional[PmoeConfig] = None) -> Selection:
    """orthogonalize (optional), pilots, penalty weights, GCV path, final fit."""
    if config is None:
        config = PmoeConfig()
    ds = ds.source
    working = gram_schmidt(ds) if config.orthogonalize else ds
    pilots = fit_pilots(ds, config.pilot_ridge)
    weights = penalty_weights(pilots)
    problem = PmoeProblem.build(working, pilots, config.tau)
    path = select_lambda(
        problem,
        weights,
        grid=config.lambda_grid,
        n_lambdas=config.n_lambdas,
        lambda_ratio=config.lambda_ratio,
        tol=config.tol,
        max_iter=config.max_iter,
        parallel=config.parallel_path,
        n_jobs=config.n_jobs,
        gamma=config.gcv_gamma,
    )
    selection = Selection(ds, working, pilots, weights, problem, path, config)
    log_event(
        "CONFIG",
        {
            "tau": config.tau,
            "orthogonalize": config.orthogonalize,
            "ridge": pilots.ridge_used,
            "n": ds.n,
            "r": ds.r,
            "selected": list(selection.selected),
        },
    )
    return selection
