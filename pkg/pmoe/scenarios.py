"""Generative models for the simulation harness.

Covariate indices are 0-based here (x1 is column 0); scenario files and
column names use the 1-based x1, x2, ... convention.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import expit

from pmoe.data import Dataset
from pmoe.errors import DataFormatError, UnknownScenario, ValidationError

MIN_N = 10


class LinearPredictor(object):
    """intercept + sum_j coef[j] * x[:, j] (+ effect * d for outcome models)."""

    def __init__(self, coef: Dict[int, float], intercept: float = 0.0, effect=None):
        self.coef = dict(coef)
        self.intercept = intercept
        self.effect = effect

    def __repr__(self):
        terms = ["%g*x%d" % (c, j + 1) for j, c in sorted(self.coef.items())]
        if self.effect is not None:
            terms.insert(0, "%g*d" % self.effect)
        return " + ".join(terms) if terms else "0"

    def __call__(self, x: np.ndarray, d: Optional[np.ndarray] = None) -> np.ndarray:
        out = np.full(x.shape[0], float(self.intercept))
        for j, c in self.coef.items():
            out += c * x[:, j]
        if self.effect is not None and d is not None:
            out += self.effect * d
        return out


def _ratio_treatment(x: np.ndarray, d=None) -> np.ndarray:
    # 0.1 x1 + x2 + 0.7 (x10 + x9) / (1 + |x8|)
    return 0.1 * x[:, 0] + x[:, 1] + 0.7 * (x[:, 9] + x[:, 8]) / (1.0 + np.abs(x[:, 7]))


def _exp_outcome(x: np.ndarray, d: np.ndarray) -> np.ndarray:
    # d + x1 + 2 exp(0.2 x3 + 0.2 x4) / exp(0.2 |x1| + 0.2 |x2|)
    return (
        d
        + x[:, 0]
        + 2.0
        * np.exp(0.2 * x[:, 2] + 0.2 * x[:, 3] - 0.2 * np.abs(x[:, 0]) - 0.2 * np.abs(x[:, 1]))
    )


@dataclass
class Scenario(object):
    """One generative model.

    Attributes
    ------------
    covariate_mean, covariate_variance: float
        law of every raw covariate, N(mean, variance)
    treatment_formula: callable
        raw x -> logit P(D = 1 | x)
    outcome_formula: callable
        (raw x, d) -> E[Y | d, x]
    rho: float
        AR(1) correlation between neighbouring covariates, 0 for i.i.d.
    orthogonalize: bool
        whether PMOE runs on Gram-Schmidt columns in this scenario
    """

    name: str
    r: int
    covariate_mean: float
    covariate_variance: float
    treatment_formula: Callable
    outcome_formula: Callable
    noise_sd: float
    true_theta: float = 1.0
    true_support: Tuple[int, ...] = (0, 1, 2, 3)
    orthogonalize: bool = False
    rho: float = 0.0
    description: str = ""

    def __post_init__(self):
        if self.r < 1 or self.covariate_variance <= 0 or self.noise_sd <= 0:
            raise ValidationError("scenario %s: r, variance and noise must be positive" % self.name)
        if not (-1.0 < self.rho < 1.0):
            raise ValidationError("scenario %s: rho must lie in (-1, 1)" % self.name)
        self.true_support = tuple(sorted(self.true_support))
        if any(j < 0 or j >= self.r for j in self.true_support):
            raise ValidationError("scenario %s: support outside 0..%d" % (self.name, self.r - 1))

    def __str__(self):
        return self.name

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "r": self.r,
            "covariate_mean": self.covariate_mean,
            "covariate_variance": self.covariate_variance,
            "noise_sd": self.noise_sd,
            "true_theta": self.true_theta,
            "true_support": [j + 1 for j in self.true_support],
            "orthogonalize": self.orthogonalize,
            "rho": self.rho,
            "treatment": repr(self.treatment_formula),
            "outcome": repr(self.outcome_formula),
        }

    def draw_covariates(self, rng: np.random.Generator, n: int) -> np.ndarray:
        z = rng.standard_normal((n, self.r))
        if self.rho != 0.0:
            s = math.sqrt(1.0 - self.rho**2)
            for j in range(1, self.r):
                z[:, j] = self.rho * z[:, j - 1] + s * z[:, j]
        return self.covariate_mean + math.sqrt(self.covariate_variance) * z

    def treatment_probability(self, x_raw: np.ndarray) -> np.ndarray:
        return expit(self.treatment_formula(x_raw))

    @classmethod
    def from_file(cls, filename: str) -> "Scenario":
        """Linear scenario from JSON.

        {"name": "mine", "r": 20, "covariate_mean": 0, "covariate_variance": 1,
         "treatment_coef": {"1": 0.5, "5": -1}, "outcome_coef": {"1": 1, "2": 2},
         "noise_sd": 1, "true_theta": 1, "true_support": [1, 2]}

        Covariates are 1-based. true_support defaults to the outcome covariates.
        """
        try:
            with open(filename, "r") as f:
                data = json.load(f)
        except OSError as e:
            raise DataFormatError("cannot read scenario file %s: %s" % (filename, e))
        except json.JSONDecodeError as e:
            raise DataFormatError("scenario file %s: %s" % (filename, e.msg), e.lineno)

        def coefs(key):
            raw = data.get(key, {})
            try:
                return {int(k) - 1: float(v) for k, v in raw.items()}
            except (TypeError, ValueError, AttributeError):
                raise DataFormatError("scenario file %s: bad %s" % (filename, key))

        try:
            r = int(data["r"])
            treatment = coefs("treatment_coef")
            outcome = coefs("outcome_coef")
            theta = float(data.get("true_theta", 1.0))
            support = data.get("true_support")
            if support is None:
                support = sorted(j for j, c in outcome.items() if c != 0)
            else:
                support = [int(j) - 1 for j in support]
            for j in list(treatment) + list(outcome):
                if j < 0 or j >= r:
                    raise DataFormatError(
                        "scenario file %s: covariate x%d outside 1..%d" % (filename, j + 1, r)
                    )
            return cls(
                name=str(data.get("name", filename)),
                r=r,
                covariate_mean=float(data.get("covariate_mean", 0.0)),
                covariate_variance=float(data.get("covariate_variance", 1.0)),
                treatment_formula=LinearPredictor(
                    treatment, float(data.get("treatment_intercept", 0.0))
                ),
                outcome_formula=LinearPredictor(
                    outcome, float(data.get("outcome_intercept", 0.0)), effect=theta
                ),
                noise_sd=float(data.get("noise_sd", 1.0)),
                true_theta=theta,
                true_support=tuple(support),
                orthogonalize=bool(data.get("orthogonalize", False)),
                rho=float(data.get("rho", 0.0)),
                description=str(data.get("description", "")),
            )
        except KeyError as e:
            raise DataFormatError("scenario file %s: missing %s" % (filename, e))


_TREATMENT_S = {0: 0.2, 1: -2.0, 4: 1.0, 5: -1.0, 6: 1.0, 7: -1.0}
_TREATMENT_A3 = {0: 0.5, 1: -1.0, 4: 0.5, 5: -0.5, 6: 0.5}
_OUTCOME_A3 = {0: 1.0, 1: 0.2, 2: 3.0, 3: 3.0}

BUILTIN = {
    "s1": Scenario(
        "s1",
        100,
        1.0,
        4.0,
        LinearPredictor(_TREATMENT_S),
        LinearPredictor({0: 2.0, 1: 0.5, 2: 5.0, 3: 5.0}, effect=1.0),
        2.0,
        description="no weak confounder",
    ),
    "s2": Scenario(
        "s2",
        100,
        1.0,
        4.0,
        LinearPredictor(_TREATMENT_S),
        LinearPredictor({0: 2.0, 1: 0.2, 2: 5.0, 3: 5.0}, effect=1.0),
        2.0,
        description="x2 is a weak confounder",
    ),
    "a2": Scenario(
        "a2",
        100,
        1.0,
        2.0,
        LinearPredictor({0: 1.0, 1: -2.0, 4: 1.0, 5: -1.0, 6: 1.0, 7: -1.0}),
        LinearPredictor({0: 1.0, 1: 0.2, 2: -1.0, 3: 1.0}, effect=1.0),
        math.sqrt(2.0),
        orthogonalize=True,
        description="non-orthogonal covariates, weak confounder x2",
    ),
    "a3s1": Scenario(
        "a3s1",
        550,
        0.0,
        2.0,
        LinearPredictor(_TREATMENT_A3),
        LinearPredictor(_OUTCOME_A3, effect=1.0),
        math.sqrt(2.0),
        description="r > n, both models linear",
    ),
    "a3s2": Scenario(
        "a3s2",
        550,
        0.0,
        2.0,
        _ratio_treatment,
        LinearPredictor(_OUTCOME_A3, effect=1.0),
        math.sqrt(2.0),
        description="r > n, nonlinear treatment model",
    ),
    "a3s3": Scenario(
        "a3s3",
        550,
        0.0,
        2.0,
        LinearPredictor(_TREATMENT_A3),
        _exp_outcome,
        math.sqrt(2.0),
        description="r > n, nonlinear outcome model",
    ),
}


def available() -> List[str]:
    return sorted(BUILTIN.keys())


def get_scenario(name: str) -> Scenario:
    if name not in BUILTIN:
        raise UnknownScenario(name, available())
    return BUILTIN[name]


def generate_raw(scenario: Scenario, n: int, seed):
    """(x_raw, d, y) drawn in a fixed order from default_rng(seed)."""
    if n < MIN_N:
        raise ValidationError("generate needs n >= %d, got %d" % (MIN_N, n))
    rng = np.random.default_rng(seed)
    x_raw = scenario.draw_covariates(rng, n)
    d = (rng.random(n) < scenario.treatment_probability(x_raw)).astype(float)
    y = scenario.outcome_formula(x_raw, d) + scenario.noise_sd * rng.standard_normal(n)
    return x_raw, d, y


def generate(scenario: Scenario, n: int, seed) -> Dataset:
    """Standardized Dataset of n draws, identical for identical seeds.

    seed may be an int or a sequence such as (root_seed, replication).
    """
    x_raw, d, y = generate_raw(scenario, n, seed)
    names = ["x%d" % (j + 1) for j in range(scenario.r)]
    return Dataset.from_raw(x_raw, d, y, names)
