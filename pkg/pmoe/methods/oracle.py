from __future__ import annotations

from typing import Iterable, Optional, Tuple

from pmoe.errors import InvalidConfig
from pmoe.methods.method import BaselineFit, Method, MethodKind


class OracleMethod(Method):
    """Uses the true support, given directly or taken from the scenario."""

    kind = MethodKind.ORACLE

    def __init__(self, true_support: Optional[Iterable[int]] = None, ps_terms=False):
        super().__init__(ps_terms)
        self.true_support = None if true_support is None else tuple(true_support)

    def __str__(self):
        return "Oracle"

    def select(self, ds, scenario=None) -> Tuple[int, ...]:
        if self.true_support is not None:
            return self.true_support
        if scenario is None:
            raise InvalidConfig("oracle needs a true support or a scenario")
        return tuple(scenario.true_support)


def oracle(ds, true_support: Iterable[int]) -> BaselineFit:
    return OracleMethod(true_support).fit(ds)
