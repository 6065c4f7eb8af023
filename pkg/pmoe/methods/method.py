from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from pmoe.estimation import estimate_effect
from pmoe.event_log import log_event


class MethodKind(Enum):
    PMOE = "pmoe"
    YFIT = "yfit"
    ORACLE = "oracle"


@dataclass(frozen=True)
class BaselineFit(object):
    """Covariates a method chose and the effect estimated on them."""

    method: MethodKind
    selected: Tuple[int, ...]
    theta_hat: float
    label: str = ""


class Method(object):
    """A selection rule followed by effect.estimate_effect.

    Subclasses implement select(); fit() runs it and estimates theta.
    """

    kind = None

    def __init__(self, ps_terms: bool = False):
        self.ps_terms = ps_terms

    def __str__(self):
        return "Method"

    def __repr__(self):
        """Allow seeing value instead of object description"""
        return str(self)

    def select(self, ds, scenario=None) -> Tuple[int, ...]:
        raise NotImplementedError()

    def fit(self, ds, scenario=None) -> BaselineFit:
        selected = tuple(self.select(ds, scenario))
        est = estimate_effect(ds, selected, self.ps_terms)
        log_event(
            "EFFECT",
            {"method": str(self), "theta_hat": est.theta_hat, "selected": len(selected)},
        )
        return BaselineFit(self.kind, est.selected, est.theta_hat, str(self))
