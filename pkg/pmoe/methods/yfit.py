from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np

from pmoe.config import default_pilot_ridge
from pmoe.data import gram_schmidt
from pmoe.methods.method import BaselineFit, Method, MethodKind
from pmoe.selection import (
    PilotEstimates,
    PmoeProblem,
    TuningPath,
    fit_pilot_outcome,
    select_lambda,
    unit_weights,
)

# the outcome lasso keeps the largest lambda within one standard error of the GCV minimum
Y_FIT_RULE = "1se"


def outcome_problem(
    ds, ridge: Optional[float] = None, orthogonalize: bool = False
) -> PmoeProblem:
    """PMOE objective with 1 / tau = 0: |a_y - n a|^2 / 2n.

    Only the outcome pilot is fitted, d enters through y - theta_tilde d and
    is never penalized.
    """
    ds = ds.source
    if ridge is None:
        ridge = default_pilot_ridge(ds.n, ds.r)
    theta, alpha_y, y_tilde = fit_pilot_outcome(ds, ridge)
    pilots = PilotEstimates(
        theta_tilde=theta,
        alpha_tilde_y=alpha_y,
        alpha_tilde_d=np.zeros(ds.r),
        y_tilde=y_tilde,
        ridge_used=float(ridge),
    )
    working = gram_schmidt(ds) if orthogonalize else ds
    return PmoeProblem.outcome_only(working, pilots)


def y_fit_path(
    ds,
    grid: Optional[Sequence[float]] = None,
    n_lambdas: int = 50,
    lambda_ratio: Optional[float] = None,
    orthogonalize: bool = False,
    gamma: Optional[float] = None,
) -> TuningPath:
    """Lasso path of the outcome model with unit weights, tuned on GCV."""
    problem = outcome_problem(ds, orthogonalize=orthogonalize)
    return select_lambda(
        problem,
        unit_weights(problem.r),
        grid=grid,
        n_lambdas=n_lambdas,
        lambda_ratio=lambda_ratio,
        gamma=gamma,
        rule=Y_FIT_RULE,
    )


class YFitMethod(Method):
    """Lasso on the outcome model, d unpenalized.

    orthogonalize=None follows the scenario's flag (off without a scenario).
    """

    kind = MethodKind.YFIT

    def __init__(
        self,
        grid: Optional[Sequence[float]] = None,
        ps_terms: bool = False,
        orthogonalize: Optional[bool] = None,
    ):
        super().__init__(ps_terms)
        self.grid = grid
        self.orthogonalize = orthogonalize

    def __str__(self):
        return "Y-fit"

    def select(self, ds, scenario=None) -> Tuple[int, ...]:
        orth = self.orthogonalize
        if orth is None:
            orth = bool(scenario is not None and scenario.orthogonalize)
        return y_fit_path(ds, self.grid, orthogonalize=orth).selected_fit.selected


def y_fit(ds, grid: Optional[Sequence[float]] = None) -> BaselineFit:
    return YFitMethod(grid).fit(ds)
