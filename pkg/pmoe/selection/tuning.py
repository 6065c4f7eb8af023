from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from joblib import Parallel, delayed

from pmoe.config import default_gcv_gamma, default_lambda_ratio, n_jobs_from_env
from pmoe.errors import InvalidConfig
from pmoe.event_log import log_event
from pmoe.models import least_squares_residuals, with_intercept
from pmoe.selection.objective import PenaltyWeights
from pmoe.selection.solver import MAX_ITER, TOL, PmoeFit, solve

LAMBDA_MAX_INFLATION = 1e-9
N_LAMBDAS = 50
RULES = ("min", "1se")


class GcvTerms(NamedTuple):
    """One grid point of the GCV curve.

    value: (RSS / n) / (1 - charged / n)^2, +inf when charged >= n
    rss: residual sum of squares of the unpenalized refit on the selection
    df: trace of X_S (X_S'X_S + Sigma)^-1 X_S', the penalized fit's
        effective number of parameters
    charged: gamma * |S|, what the denominator is charged for the refit
    se: standard error of value, from the spread of the squared residuals
    """

    value: float
    rss: float
    df: float
    charged: float
    se: float


@dataclass(frozen=True, eq=False)
class TuningPath(object):
    lambdas: np.ndarray
    gcv: np.ndarray
    fits: Tuple[PmoeFit, ...]
    selected_index: int
    degenerate: np.ndarray
    se: Optional[np.ndarray] = None
    df: Optional[np.ndarray] = None
    rule: str = "min"

    @property
    def selected_fit(self) -> PmoeFit:
        return self.fits[self.selected_index]

    @property
    def lambda_hat(self) -> float:
        return float(self.lambdas[self.selected_index])

    @property
    def min_index(self) -> int:
        return int(np.argmin(self.gcv))

    def rows(self):
        """(lambda, gcv, n_selected, alpha_hat) per grid point."""
        for lam, value, fit in zip(self.lambdas, self.gcv, self.fits):
            yield float(lam), float(value), len(fit.selected), fit.alpha_hat


def lambda_max(problem, weights: PenaltyWeights) -> float:
    """Smallest lambda whose solution is exactly zero, max_j |g_j(0)| / nu_j."""
    g0 = problem.gradient(np.zeros(len(weights.nu)))
    value = float(np.max(np.abs(g0) / weights.nu)) * (1.0 + LAMBDA_MAX_INFLATION)
    return max(value, 1e-12)


def default_grid(
    lmax: float, n_lambdas: int = N_LAMBDAS, ratio: float = 1e-4
) -> np.ndarray:
    if n_lambdas == 1:
        return np.array([lmax])
    return np.geomspace(lmax, lmax * ratio, n_lambdas)


def effective_parameters(
    design: np.ndarray, fit: PmoeFit, weights: PenaltyWeights
) -> float:
    """trace[X_S (X_S'X_S + Sigma)^-1 X_S'] with Sigma = diag(lam nu_j / |alpha_j|).

    The penalty lam * sum nu_j |alpha_j| sits next to an objective whose
    curvature is already of order n, so Sigma carries no extra factor n.
    Equals |S| at lam = 0.
    """
    sel = list(fit.selected)
    if len(sel) == 0:
        return 0.0
    xs = design[:, sel]
    gram = xs.T @ xs
    sigma = fit.lam * weights.nu[sel] / np.abs(fit.alpha_hat[sel])
    return float(np.trace(scipy.linalg.solve(gram + np.diag(sigma), gram)))


def gcv_components(
    problem, fit: PmoeFit, weights: PenaltyWeights, gamma: Optional[float] = None
) -> GcvTerms:
    """GCV of the unpenalized refit of problem.response on [1 | X_S].

    The refit's hat matrix has trace |S|, GCV charges gamma per selected
    column (gamma=None picks max(1, log(n) / 2)).
    """
    n = problem.n
    if gamma is None:
        gamma = default_gcv_gamma(n)
    resp = problem.response
    sel = list(fit.selected)
    if len(sel) == 0:
        res = resp - resp.mean()
    else:
        res = least_squares_residuals(with_intercept(problem.design[:, sel]), resp)
    rss = float(res @ res)
    charged = gamma * len(sel)
    try:
        df = effective_parameters(problem.design, fit, weights)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        return GcvTerms(float("inf"), rss, float("inf"), charged, float("inf"))
    if charged >= n or df >= n:
        return GcvTerms(float("inf"), rss, df, charged, float("inf"))
    shrink = (1.0 - charged / n) ** 2
    se = float(np.std(res * res, ddof=1)) / np.sqrt(n) / shrink
    return GcvTerms((rss / n) / shrink, rss, df, charged, se)


def gcv(problem, fit: PmoeFit, weights: PenaltyWeights, gamma=None) -> float:
    """(RSS / n) / (1 - gamma |S| / n)^2 on the selected columns."""
    return gcv_components(problem, fit, weights, gamma).value


def pick_index(values: np.ndarray, se: np.ndarray, rule: str = "min") -> int:
    """Grid index chosen on a descending-lambda GCV curve.

    "min" is the argmin, "1se" the largest lambda whose GCV is within one
    standard error of the minimum. Ties go to the larger lambda.
    """
    if rule not in RULES:
        raise InvalidConfig("unknown GCV rule %r, expected one of %s" % (rule, RULES))
    # np.argmin returns the first minimum, i.e. the largest lambda
    best = int(np.argmin(values))
    if rule == "min" or not np.isfinite(values[best]):
        return best
    return int(np.flatnonzero(values <= values[best] + se[best])[0])


def _check_grid(grid: Sequence[float]) -> np.ndarray:
    grid = np.asarray(grid, dtype=float).ravel()
    if len(grid) == 0 or np.any(~np.isfinite(grid)) or np.any(grid <= 0):
        raise InvalidConfig("lambda grid must be a nonempty list of positive values")
    # descending, duplicates dropped
    return np.unique(grid)[::-1]


def select_lambda(
    problem,
    weights: PenaltyWeights,
    grid: Optional[Sequence[float]] = None,
    n_lambdas: int = N_LAMBDAS,
    lambda_ratio: Optional[float] = None,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
    parallel: bool = False,
    n_jobs: Optional[int] = None,
    accelerate: bool = False,
    gamma: Optional[float] = None,
    rule: str = "min",
) -> TuningPath:
    """Solve along a descending lambda grid and pick lambda from the GCV curve.

    The default grid has n_lambdas log-spaced values from lambda_max down to
    lambda_max * lambda_ratio. Sequential mode warm-starts each fit from the
    previous one, parallel mode cold-starts every lambda in a joblib worker.
    See pick_index for rule.
    """
    if rule not in RULES:
        raise InvalidConfig("unknown GCV rule %r, expected one of %s" % (rule, RULES))
    if grid is None:
        if lambda_ratio is None:
            lambda_ratio = default_lambda_ratio(problem.n, problem.r)
        lambdas = default_grid(lambda_max(problem, weights), n_lambdas, lambda_ratio)
    else:
        lambdas = _check_grid(grid)
    if gamma is None:
        gamma = default_gcv_gamma(problem.n)

    if parallel:
        fits = Parallel(n_jobs=n_jobs_from_env(n_jobs))(
            delayed(solve)(problem, weights, lam, None, tol, max_iter, accelerate)
            for lam in lambdas
        )
    else:
        fits = []
        init = None
        for lam in lambdas:
            fit = solve(problem, weights, lam, init, tol, max_iter, accelerate)
            fits.append(fit)
            init = fit.alpha_hat

    values = np.empty(len(lambdas))
    se = np.empty(len(lambdas))
    df = np.empty(len(lambdas))
    for i, fit in enumerate(fits):
        terms = gcv_components(problem, fit, weights, gamma)
        values[i], se[i], df[i] = terms.value, terms.se, terms.df
        log_event(
            "GCV",
            {
                "lambda": fit.lam,
                "gcv": terms.value,
                "rss": terms.rss,
                "df": terms.df,
                "charged": terms.charged,
                "se": terms.se,
                "selected": len(fit.selected),
            },
        )
    degenerate = ~np.isfinite(values)
    selected_index = pick_index(values, se, rule)

    path = TuningPath(
        lambdas, values, tuple(fits), selected_index, degenerate, se, df, rule
    )
    log_event(
        "PATH",
        {
            "n_lambdas": len(lambdas),
            "lambda_max": float(lambdas[0]),
            "lambda_hat": path.lambda_hat,
            "gcv": float(values[selected_index]),
            "gamma": gamma,
            "rule": rule,
            "selected": list(path.selected_fit.selected),
            "degenerate": int(degenerate.sum()),
        },
    )
    return path
