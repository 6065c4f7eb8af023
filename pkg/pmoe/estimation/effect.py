from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from pmoe.errors import Separation, ValidationError
from pmoe.event_log import log_event
from pmoe.models import fit_logistic, least_squares, with_intercept
from pmoe.utils import warn

Z_95 = 1.96
SEPARATION_RIDGE = 1.0
PI_CLIP = 1e-12


@dataclass(frozen=True, eq=False)
class EffectEstimate(object):
    theta_hat: float
    se: Optional[float]
    ci_low: Optional[float]
    ci_high: Optional[float]
    selected: Tuple[int, ...]
    pi_hat: np.ndarray
    warnings: Tuple[str, ...] = ()
    replicates: Optional[np.ndarray] = None

    def with_se(
        self, se: float, replicates: Optional[np.ndarray] = None
    ) -> "EffectEstimate":
        return dataclasses.replace(
            self,
            se=float(se),
            ci_low=self.theta_hat - Z_95 * se,
            ci_high=self.theta_hat + Z_95 * se,
            replicates=replicates,
        )

    def to_dict(self, names=None) -> dict:
        sel = list(self.selected)
        out = {
            "theta_hat": self.theta_hat,
            "se": self.se,
            "ci": None if self.se is None else [self.ci_low, self.ci_high],
            "selected_indices": sel,
            "warnings": list(self.warnings),
        }
        if names is not None:
            out["selected"] = [names[j] for j in sel]
        return out


def propensity(ds, selected: Tuple[int, ...]) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """Logistic propensity on [1 | x_selected], constant treated share if empty.

    A separated fit is retried with ridge 1.0 and reported in the warnings.
    """
    if len(selected) == 0:
        return np.full(ds.n, ds.d.mean()), ()
    z = with_intercept(ds.x[:, list(selected)])
    penalized = np.ones(z.shape[1], dtype=bool)
    penalized[0] = False
    warnings = ()
    try:
        fit = fit_logistic(z, ds.d)
    except Separation as e:
        msg = "propensity model separated (%s), refit with ridge %g" % (
            e,
            SEPARATION_RIDGE,
        )
        warn(msg)
        warnings = (msg,)
        fit = fit_logistic(z, ds.d, ridge=SEPARATION_RIDGE, penalized=penalized)
    return fit.predict(z), warnings


def estimate_effect(
    ds, selected: Iterable[int], ps_terms: bool = False
) -> EffectEstimate:
    """Doubly robust propensity score regression.

    s = d - pi_hat(x_selected), then least squares of y on
    [1 | s | x_selected] (plus pi_hat and pi_hat^2 with ps_terms); theta_hat
    is the coefficient of s.
    """
    ds = ds.source
    selected = tuple(sorted(set(int(j) for j in selected)))
    for j in selected:
        if j < 0 or j >= ds.r:
            raise ValidationError("selected column %d out of range 0..%d" % (j, ds.r - 1))
    if ds.n <= len(selected) + 2:
        raise ValidationError(
            "need n > |selected| + 2, got n=%d and %d columns" % (ds.n, len(selected))
        )

    pi_hat, warnings = propensity(ds, selected)
    pi_hat = np.clip(pi_hat, PI_CLIP, 1.0 - PI_CLIP)
    s = ds.d - pi_hat

    columns = [s]
    if len(selected) > 0:
        columns.append(ds.x[:, list(selected)])
        if ps_terms:
            columns.extend([pi_hat, pi_hat**2])
    coef = least_squares(with_intercept(np.column_stack(columns)), ds.y)
    theta = float(coef[1])

    log_event(
        "EFFECT",
        {"theta_hat": theta, "selected": list(selected), "ps_terms": ps_terms},
    )
    return EffectEstimate(theta, None, None, None, selected, pi_hat, warnings)
