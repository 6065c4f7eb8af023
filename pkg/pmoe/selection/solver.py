from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from pmoe.errors import InvalidConfig, NoConvergence
from pmoe.event_log import log_event
from pmoe.selection.objective import PenaltyWeights

MAX_ITER = 10000
TOL = 1e-7
L_SHRINK = 0.9
L_FLOOR = 0.5
L_MAX = 1e300
EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class PmoeFit(object):
    alpha_hat: np.ndarray
    selected: Tuple[int, ...]
    lam: float
    tau: float
    objective_value: float
    kkt_violation: float
    iterations: int
    trace: Optional[Tuple[float, ...]] = None

    def __str__(self):
        return "PmoeFit(lambda=%.4g, tau=%g, selected=%d, kkt=%.2g, it=%d)" % (
            self.lam,
            self.tau,
            len(self.selected),
            self.kkt_violation,
            self.iterations,
        )


def soft_threshold(z: np.ndarray, thr: np.ndarray) -> np.ndarray:
    return np.sign(z) * np.maximum(np.abs(z) - thr, 0.0)


def kkt_violation(alpha: np.ndarray, grad: np.ndarray, thr: np.ndarray) -> float:
    """Largest scaled violation of the optimality conditions.

    For alpha_j != 0: |g_j + thr_j sign(alpha_j)| / max(1, thr_j).
    For alpha_j == 0: max(0, |g_j| - thr_j).
    """
    nz = alpha != 0
    v = np.zeros(len(alpha))
    v[nz] = np.abs(grad[nz] + thr[nz] * np.sign(alpha[nz])) / np.maximum(
        1.0, thr[nz]
    )
    v[~nz] = np.maximum(0.0, np.abs(grad[~nz]) - thr[~nz])
    if len(v) == 0:
        return 0.0
    return float(np.max(v))


def _penalized(problem, alpha, thr) -> Tuple[float, float]:
    f = problem.value(alpha)
    return f, f + float(thr @ np.abs(alpha))


def _prox_step(problem, point, f_point, g_point, thr, L):
    """Backtracking proximal step from point, returns (new, f_new, L)."""
    slack = 10.0 * EPS * max(1.0, abs(f_point))
    while True:
        new = soft_threshold(point - g_point / L, thr / L)
        delta = new - point
        f_new = problem.value(new)
        if f_new <= f_point + g_point @ delta + 0.5 * L * (delta @ delta) + slack:
            return new, f_new, L
        L *= 2.0
        if L > L_MAX:
            raise NoConvergence(float("inf"))


def solve(
    problem,
    weights: PenaltyWeights,
    lam: float,
    init: Optional[np.ndarray] = None,
    tol: float = TOL,
    max_iter: int = MAX_ITER,
    accelerate: bool = False,
    trace: bool = False,
) -> PmoeFit:
    """Minimize problem.value(a) + lam * sum_j nu_j |a_j| by proximal gradient.

    Works on any problem exposing value, gradient and lipschitz_bound.
    accelerate switches to the monotone accelerated variant.
    """
    if lam < 0:
        raise InvalidConfig("lambda must be nonnegative, got %r" % lam)
    r = len(weights.nu)
    thr = lam * weights.nu
    alpha = np.zeros(r) if init is None else np.array(init, dtype=float)
    L = problem.lipschitz_bound()
    # steps never grow past 1 / (L_FLOOR * bound)
    L_min = L_FLOOR * L

    f, F = _penalized(problem, alpha, thr)
    g = problem.gradient(alpha)
    values = [F] if trace else None

    # accelerated state
    y, f_y, g_y, t_k = alpha, f, g, 1.0

    it = 0
    kkt = kkt_violation(alpha, g, thr)
    while kkt > tol:
        if it >= max_iter:
            raise NoConvergence(kkt, lam)
        it += 1
        if not accelerate:
            new, f_new, L = _prox_step(problem, alpha, f, g, thr, L)
            if np.array_equal(new, alpha):
                raise NoConvergence(kkt, lam)
            alpha, f = new, f_new
            F = f + float(thr @ np.abs(alpha))
            g = problem.gradient(alpha)
        else:
            z, f_z, L = _prox_step(problem, y, f_y, g_y, thr, L)
            F_z = f_z + float(thr @ np.abs(z))
            t_next = (1.0 + math.sqrt(1.0 + 4.0 * t_k * t_k)) / 2.0
            if F_z <= F:
                prev = alpha
                alpha, f, F = z, f_z, F_z
                g = problem.gradient(alpha)
                y = alpha + ((t_k - 1.0) / t_next) * (alpha - prev)
                t_k = t_next
            elif y is alpha:
                raise NoConvergence(kkt, lam)
            else:
                # restart momentum from the incumbent
                y, t_k = alpha, 1.0
            if y is alpha:
                f_y, g_y = f, g
            else:
                f_y, g_y = problem.value(y), problem.gradient(y)
        if trace:
            values.append(F)
        kkt = kkt_violation(alpha, g, thr)
        L = max(L * L_SHRINK, L_min)

    selected = tuple(int(j) for j in np.flatnonzero(alpha))
    fit = PmoeFit(
        alpha_hat=alpha,
        selected=selected,
        lam=float(lam),
        tau=float(getattr(problem, "tau", float("inf"))),
        objective_value=F,
        kkt_violation=kkt,
        iterations=it,
        trace=tuple(values) if trace else None,
    )
    log_event(
        "SOLVE",
        {
            "lambda": fit.lam,
            "iterations": it,
            "kkt": kkt,
            "selected": len(selected),
            "accelerate": accelerate,
        },
    )
    return fit
