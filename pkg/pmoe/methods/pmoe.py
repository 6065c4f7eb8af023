from __future__ import annotations

import dataclasses
from typing import Optional, Tuple

from pmoe.config import PmoeConfig
from pmoe.methods.method import Method, MethodKind
from pmoe.selection import select_covariates


class PmoeMethod(Method):
    """Selection by the penalized modified objective at a fixed tau.

    orthogonalize=None follows the scenario's flag (off without a scenario).
    """

    kind = MethodKind.PMOE

    def __init__(
        self,
        config: Optional[PmoeConfig] = None,
        orthogonalize: Optional[bool] = None,
        ps_terms: bool = False,
    ):
        super().__init__(ps_terms)
        if config is None:
            config = PmoeConfig()
        self.config = config
        self.orthogonalize = orthogonalize

    def __str__(self):
        return "PMOE(tau=%g)" % self.config.tau

    def _config_for(self, scenario) -> PmoeConfig:
        orth = self.orthogonalize
        if orth is None:
            orth = bool(scenario is not None and scenario.orthogonalize)
        if orth == self.config.orthogonalize:
            return self.config
        return dataclasses.replace(self.config, orthogonalize=orth)

    def select(self, ds, scenario=None) -> Tuple[int, ...]:
        return select_covariates(ds, self._config_for(scenario)).selected
