from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from pmoe.errors import InvalidConfig
from pmoe.selection.pilot import PilotEstimates

NU_CAP = 1e12
CAP_BELOW = 1e-12


@dataclass(frozen=True, eq=False)
class PenaltyWeights(object):
    nu: np.ndarray
    capped: np.ndarray

    @property
    def r(self) -> int:
        return len(self.nu)


def penalty_weights(pilots: PilotEstimates) -> PenaltyWeights:
    """nu_j = 1 / (alpha_y_j^2 (1 + |alpha_d_j|)^2), capped at 1e12."""
    ay2 = np.asarray(pilots.alpha_tilde_y, dtype=float) ** 2
    ad = np.abs(np.asarray(pilots.alpha_tilde_d, dtype=float))
    capped = ay2 < CAP_BELOW
    with np.errstate(divide="ignore"):
        nu = 1.0 / (ay2 * (1.0 + ad) ** 2)
    nu = np.where(capped, NU_CAP, np.minimum(nu, NU_CAP))
    return PenaltyWeights(nu, capped)


def unit_weights(r: int) -> PenaltyWeights:
    return PenaltyWeights(np.ones(r), np.zeros(r, dtype=bool))


@dataclass(frozen=True, eq=False)
class PmoeProblem(object):
    """The smooth part M(alpha) of the penalized objective.

    M(a) = |a_y - n a|^2 / 2n + (-a_d.a + sum_i log(1 + exp(x_i a))) / tau

    ds is a Dataset or an OrthogonalizedDataset, the objective is evaluated on
    ds.design (x or u). outcome_only builds the tau = inf form, which keeps
    only the quadratic part.
    """

    ds: object
    pilots: PilotEstimates
    tau: float
    a_y: np.ndarray
    a_d: np.ndarray

    @classmethod
    def build(cls, ds, pilots: PilotEstimates, tau: float) -> "PmoeProblem":
        if not (tau > 0 and np.isfinite(tau)):
            raise InvalidConfig("tau must be positive and finite, got %r" % tau)
        x = ds.design
        a_y = np.abs(x.T @ pilots.y_tilde)
        a_d = np.abs(x.T @ ds.d)
        return cls(ds, pilots, float(tau), a_y, a_d)

    @classmethod
    def outcome_only(cls, ds, pilots: PilotEstimates) -> "PmoeProblem":
        """The objective with the treatment term dropped (1 / tau = 0)."""
        a_y = np.abs(ds.design.T @ pilots.y_tilde)
        return cls(ds, pilots, float("inf"), a_y, np.zeros(ds.r))

    @property
    def n(self) -> int:
        return self.ds.n

    @property
    def r(self) -> int:
        return self.ds.r

    @property
    def design(self) -> np.ndarray:
        return self.ds.design

    @property
    def response(self) -> np.ndarray:
        """What GCV regresses on the selected columns."""
        return self.pilots.y_tilde

    @property
    def outcome_only_form(self) -> bool:
        return np.isinf(self.tau)

    def value(self, alpha: np.ndarray) -> float:
        n = self.n
        res = self.a_y - n * alpha
        quad = (res @ res) / (2.0 * n)
        if self.outcome_only_form:
            return float(quad)
        eta = self.design @ alpha
        return float(
            quad + (-(self.a_d @ alpha) + np.sum(np.logaddexp(0.0, eta))) / self.tau
        )

    def gradient(self, alpha: np.ndarray) -> np.ndarray:
        g = self.n * alpha - self.a_y
        if self.outcome_only_form:
            return g
        x = self.design
        return g + (x.T @ expit(x @ alpha) - self.a_d) / self.tau

    def lipschitz_bound(self) -> float:
        """n + |X|_2^2 / (4 tau), the logistic Hessian is at most X'X / 4."""
        if self.outcome_only_form:
            return float(self.n)
        s = np.linalg.norm(self.design, ord=2)
        return float(self.n + s * s / (4.0 * self.tau))


def objective(problem: PmoeProblem, alpha: np.ndarray) -> float:
    return problem.value(np.asarray(alpha, dtype=float))


def gradient(problem: PmoeProblem, alpha: np.ndarray) -> np.ndarray:
    return problem.gradient(np.asarray(alpha, dtype=float))
