from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg
from scipy.special import expit

from pmoe.errors import NoConvergence, Separation, SingularDesign

DIVERGENCE_NORM = 1e3


@dataclass(frozen=True, eq=False)
class LogisticFit:
    coef: np.ndarray
    iterations: int
    gradient_norm: float
    ridge: float

    def predict(self, z: np.ndarray) -> np.ndarray:
        return expit(z @ self.coef)


def _penalty_mask(p: int, penalized: Optional[np.ndarray]) -> np.ndarray:
    if penalized is None:
        return np.ones(p)
    return np.asarray(penalized, dtype=float)


def negative_log_likelihood(
    z: np.ndarray,
    d: np.ndarray,
    beta: np.ndarray,
    ridge: float = 0.0,
    penalized: Optional[np.ndarray] = None,
) -> float:
    eta = z @ beta
    mask = _penalty_mask(len(beta), penalized)
    return float(
        np.sum(np.logaddexp(0.0, eta)) - d @ eta + ridge * np.sum(mask * beta**2)
    )


def gradient(
    z: np.ndarray,
    d: np.ndarray,
    beta: np.ndarray,
    ridge: float = 0.0,
    penalized: Optional[np.ndarray] = None,
) -> np.ndarray:
    mask = _penalty_mask(len(beta), penalized)
    return z.T @ (expit(z @ beta) - d) + 2.0 * ridge * mask * beta


def fit_logistic(
    z: np.ndarray,
    d: np.ndarray,
    ridge: float = 0.0,
    penalized: Optional[np.ndarray] = None,
    tol: float = 1e-8,
    max_iter: int = 100,
) -> LogisticFit:
    """Damped Newton for the (ridge) logistic regression of d on z.

    Step halving on the objective; stops when the gradient norm is <= tol.
    With ridge == 0 a fit whose coefficients leave the 1e3 ball, or that
    predicts every unit perfectly, raises Separation.
    """
    z = np.asarray(z, dtype=float)
    d = np.asarray(d, dtype=float)
    p = z.shape[1]
    mask = _penalty_mask(p, penalized)
    beta = np.zeros(p)
    f = negative_log_likelihood(z, d, beta, ridge, mask)
    g = gradient(z, d, beta, ridge, mask)
    gnorm = float(np.linalg.norm(g))

    def separated() -> bool:
        if ridge != 0:
            return False
        return bool(np.max(np.abs(d - expit(z @ beta))) < 1e-6)

    it = 0
    while gnorm > tol:
        if it >= max_iter:
            if separated():
                raise Separation(float(np.linalg.norm(beta)))
            raise NoConvergence(gnorm)
        it += 1
        mu = expit(z @ beta)
        w = mu * (1.0 - mu)
        h = (z.T * w) @ z + 2.0 * ridge * np.diag(mask)
        try:
            step = scipy.linalg.solve(h, g, assume_a="pos")
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
            if ridge == 0:
                raise Separation(float(np.linalg.norm(beta)))
            raise SingularDesign("logistic Hessian is singular")

        slope = -float(g @ step)
        slack = 1e-13 * max(1.0, abs(f))
        t = 1.0
        for _ in range(40):
            candidate = beta - t * step
            f_new = negative_log_likelihood(z, d, candidate, ridge, mask)
            if f_new <= f + 1e-4 * t * slope + slack:
                break
            t *= 0.5
        else:
            # no decrease representable any more
            break
        beta = candidate
        f = f_new
        g = gradient(z, d, beta, ridge, mask)
        gnorm = float(np.linalg.norm(g))

        if ridge == 0 and not np.isfinite(beta).all():
            raise Separation(float("inf"))
        if ridge == 0 and np.linalg.norm(beta) > DIVERGENCE_NORM:
            raise Separation(float(np.linalg.norm(beta)))

    if separated():
        raise Separation(float(np.linalg.norm(beta)))
    if gnorm > max(tol, 1e-6):
        raise NoConvergence(gnorm)
    return LogisticFit(beta, it, gnorm, ridge)
