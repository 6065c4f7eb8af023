from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from pmoe.config import n_jobs_from_env
from pmoe.errors import InvalidConfig, PmoeError, SimulationAborted
from pmoe.event_log import log_event
from pmoe.scenarios import Scenario, generate
from pmoe.utils import misc

SCHEMA_VERSION = 1
MAX_FAILED = 0.05


@dataclass
class Draw(object):
    """One method on one replication, theta_hat None on failure."""

    rep: int
    method: str
    theta_hat: Optional[float]
    selected: Optional[Tuple[int, ...]]
    error: Optional[str] = None


@dataclass
class MethodSummary(object):
    method: str
    bias: float
    sd: Optional[float]
    mse: float
    mse_decomposed: float
    mean_correct_zeros: float
    mean_incorrect_zeros: float
    successes: int
    failures: int


@dataclass
class SimulationReport(object):
    scenario: str
    n: int
    reps: int
    seed: int
    true_theta: float
    rows: List[MethodSummary]
    draws: List[Draw] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def row(self, method: str) -> MethodSummary:
        for row in self.rows:
            if row.method == method:
                return row
        raise KeyError(method)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "scenario": self.scenario,
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "true_theta": self.true_theta,
            "rows": [asdict(row) for row in self.rows],
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def table(self) -> pd.DataFrame:
        """Method, Bias, S.D, MSE, Correct, Incorrect per method."""
        return pd.DataFrame(
            {
                "Method": [row.method for row in self.rows],
                "Bias": [row.bias for row in self.rows],
                "S.D": [row.sd for row in self.rows],
                "MSE": [row.mse for row in self.rows],
                "Correct": [row.mean_correct_zeros for row in self.rows],
                "Incorrect": [row.mean_incorrect_zeros for row in self.rows],
            }
        )

    def draws_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "rep": [d.rep for d in self.draws],
                "method": [d.method for d in self.draws],
                "theta_hat": [d.theta_hat for d in self.draws],
                "selected": [
                    "" if d.selected is None else " ".join("x%d" % (j + 1) for j in d.selected)
                    for d in self.draws
                ],
                "error": ["" if d.error is None else d.error for d in self.draws],
            }
        )

    def write(self, prefix: str) -> List[str]:
        """<prefix>.json, <prefix>.csv and <prefix>_draws.csv"""
        paths = [prefix + ".json", prefix + ".csv", prefix + "_draws.csv"]
        with open(paths[0], "w") as f:
            f.write(self.to_json())
        self.table().to_csv(paths[1], index=False, float_format="%.3f")
        self.draws_frame().to_csv(paths[2], index=False, float_format="%.17g")
        return paths


def run_replication(scenario: Scenario, n: int, methods, seed: int, rep: int) -> List[Draw]:
    ds = generate(scenario, n, [int(seed), int(rep)])
    draws = []
    for method in methods:
        try:
            fit = method.fit(ds, scenario)
            draws.append(Draw(rep, str(method), fit.theta_hat, fit.selected))
        except PmoeError as e:
            draws.append(Draw(rep, str(method), None, None, str(e)))
            log_event("SIM", {"rep": rep, "method": str(method), "error": str(e)})
    return draws


def summarize(
    method: str, draws: Sequence[Draw], true_theta: float, r: int, support: Sequence[int]
) -> MethodSummary:
    ok = [d for d in draws if d.theta_hat is not None]
    failures = len(draws) - len(ok)
    if failures > MAX_FAILED * len(draws) or len(ok) == 0:
        raise SimulationAborted(method, failures, len(draws))
    thetas = np.array([d.theta_hat for d in ok])
    k = len(thetas)
    bias = float(thetas.mean() - true_theta)
    sd = float(thetas.std(ddof=1)) if k > 1 else None
    mse = float(np.mean((thetas - true_theta) ** 2))
    mse_decomposed = bias**2 + (0.0 if sd is None else sd**2 * (k - 1) / k)

    support = set(support)
    correct = []
    incorrect = []
    for d in ok:
        chosen = set(d.selected)
        correct.append(sum(1 for j in range(r) if j not in support and j not in chosen))
        incorrect.append(sum(1 for j in support if j not in chosen))
    return MethodSummary(
        method,
        bias,
        sd,
        mse,
        mse_decomposed,
        float(np.mean(correct)),
        float(np.mean(incorrect)),
        k,
        failures,
    )


def run(
    scenario: Scenario,
    n: int,
    reps: int,
    methods: Sequence,
    seed: int = 0,
    n_jobs: Optional[int] = None,
) -> SimulationReport:
    """Replicate generate -> every method -> theta_hat and aggregate.

    Replication `rep` draws its data from (seed, rep), so serial and
    parallel runs give identical reports.
    """
    if reps < 1:
        raise InvalidConfig("reps must be at least 1, got %d" % reps)
    methods = list(methods)
    workers = n_jobs_from_env(n_jobs)
    log_event(
        "SIM",
        {"scenario": scenario.name, "n": n, "reps": reps, "seed": seed, "workers": workers},
    )
    if workers == 1:
        per_rep = []
        for rep in range(reps):
            per_rep.append(run_replication(scenario, n, methods, seed, rep))
            misc.printProgressBar(rep + 1, reps, prefix=scenario.name)
    else:
        per_rep = Parallel(n_jobs=workers)(
            delayed(run_replication)(scenario, n, methods, seed, rep) for rep in range(reps)
        )

    draws = [d for rep_draws in per_rep for d in rep_draws]
    rows = []
    for method in methods:
        label = str(method)
        rows.append(
            summarize(
                label,
                [d for d in draws if d.method == label],
                scenario.true_theta,
                scenario.r,
                scenario.true_support,
            )
        )
    report = SimulationReport(
        scenario.name,
        n,
        reps,
        seed,
        scenario.true_theta,
        rows,
        draws,
        {"scenario": scenario.to_dict(), "methods": [str(m) for m in methods]},
    )
    for row in rows:
        log_event("SIM", asdict(row))
    return report
