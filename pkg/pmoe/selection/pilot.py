from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from pmoe.config import default_pilot_ridge
from pmoe.errors import Separation
from pmoe.event_log import log_event
from pmoe.models import fit_logistic, least_squares, with_intercept
from pmoe.utils import log

SEPARATION_RIDGE = 1.0


@dataclass(frozen=True, eq=False)
class PilotEstimates(object):
    """Unpenalized (or ridge) fits feeding the objective and the penalty.

    Attributes
    ------------
    theta_tilde: float
        treatment coefficient of the outcome regression of y on [1 | d | x]
    alpha_tilde_y: np.ndarray
        covariate coefficients of that regression
    alpha_tilde_d: np.ndarray
        covariate coefficients of the logistic regression of d on [1 | x]
    y_tilde: np.ndarray
        y - theta_tilde * d
    ridge_used: float
        ridge applied to both fits, 0 for plain least squares / MLE
    """

    theta_tilde: float
    alpha_tilde_y: np.ndarray
    alpha_tilde_d: np.ndarray
    y_tilde: np.ndarray
    ridge_used: float
    intercept_y: float = 0.0
    intercept_d: float = 0.0
    treatment_ridge: Optional[float] = None

    @property
    def ridge_treatment(self) -> float:
        """Ridge of the treatment fit, differs from ridge_used after a separation fallback."""
        if self.treatment_ridge is None:
            return self.ridge_used
        return self.treatment_ridge

    def to_dict(self) -> dict:
        return {
            "theta_tilde": self.theta_tilde,
            "ridge_used": self.ridge_used,
            "intercept_y": self.intercept_y,
            "intercept_d": self.intercept_d,
            "ridge_treatment": self.ridge_treatment,
        }


def _resolve_ridge(ds, ridge: Optional[float]) -> float:
    if ridge is None:
        return default_pilot_ridge(ds.n, ds.r)
    return float(ridge)


def _outcome_coefficients(ds, ridge: float) -> np.ndarray:
    # columns: intercept, d, x
    z = with_intercept(np.column_stack([ds.d, ds.x]))
    penalized = np.zeros(z.shape[1], dtype=bool)
    penalized[2:] = True
    return least_squares(z, ds.y, ridge, penalized)


def fit_pilot_outcome(
    ds, ridge: Optional[float] = None
) -> Tuple[float, np.ndarray, np.ndarray]:
    """Least squares (ridge on x only) of y on d and x.

    Returns (theta_tilde, alpha_tilde_y, y_tilde).
    """
    ridge = _resolve_ridge(ds, ridge)
    coef = _outcome_coefficients(ds, ridge)
    theta = float(coef[1])
    return theta, coef[2:], ds.y - theta * ds.d


def fit_pilot_treatment(ds, ridge: Optional[float] = None) -> np.ndarray:
    """Logistic MLE (ridge on x only) of d on x, returns alpha_tilde_d."""
    ridge = _resolve_ridge(ds, ridge)
    fit = _treatment_fit(ds, ridge)
    return fit.coef[1:]


def _treatment_fit(ds, ridge: float):
    z = with_intercept(ds.x)
    penalized = np.ones(z.shape[1], dtype=bool)
    penalized[0] = False
    return fit_logistic(z, ds.d, ridge=ridge, penalized=penalized)


def fit_pilots(ds, ridge: Optional[float] = None) -> PilotEstimates:
    """Both pilot fits on the covariates of ds.source.

    For an orthogonalized dataset the pilots still come from the original
    covariates, the penalty is built on them.
    """
    ds = ds.source
    auto = ridge is None
    ridge = _resolve_ridge(ds, ridge)
    coef = _outcome_coefficients(ds, ridge)
    theta = float(coef[1])
    treatment_ridge = None
    try:
        treat = _treatment_fit(ds, ridge)
    except Separation as e:
        if not auto or ridge > 0:
            raise
        log("treatment pilot separated (%s), refit with ridge %g" % (e, SEPARATION_RIDGE))
        treatment_ridge = SEPARATION_RIDGE
        treat = _treatment_fit(ds, SEPARATION_RIDGE)

    pilots = PilotEstimates(
        theta_tilde=theta,
        alpha_tilde_y=coef[2:],
        alpha_tilde_d=treat.coef[1:],
        y_tilde=ds.y - theta * ds.d,
        ridge_used=ridge,
        intercept_y=float(coef[0]),
        intercept_d=float(treat.coef[0]),
        treatment_ridge=treatment_ridge,
    )
    log_event(
        "PILOT",
        {
            "theta_tilde": theta,
            "ridge": ridge,
            "ridge_treatment": pilots.ridge_treatment,
            "newton_iterations": treat.iterations,
            "max_abs_alpha_y": float(np.max(np.abs(pilots.alpha_tilde_y))),
            "max_abs_alpha_d": float(np.max(np.abs(pilots.alpha_tilde_d))),
        },
    )
    return pilots
