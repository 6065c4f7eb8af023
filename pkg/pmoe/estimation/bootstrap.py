from __future__ import annotations

import dataclasses
import math
from typing import Optional, Tuple

import numpy as np
from joblib import Parallel, delayed

from pmoe.config import PmoeConfig, n_jobs_from_env
from pmoe.errors import BootstrapFailure, InvalidConfig, PmoeError
from pmoe.event_log import log_event
from pmoe.estimation.effect import estimate_effect
from pmoe.selection.pipeline import select_covariates
from pmoe.utils import misc, rng_for

MIN_REPLICATES = 100
MAX_DROPPED = 0.1


def threshold_selection(alpha_hat: np.ndarray, n: int) -> Tuple[int, ...]:
    """Columns with |alpha_hat_j| > 1/sqrt(n)."""
    return tuple(int(j) for j in np.flatnonzero(np.abs(alpha_hat) > 1.0 / math.sqrt(n)))


def bootstrap_replicate(
    ds, config: PmoeConfig, seed: int, index: int, ps_terms: bool = False
) -> Optional[float]:
    """theta_hat on resample `index`, None when the replicate fails."""
    rng = rng_for(seed, index)
    rows = rng.integers(0, ds.n, ds.n)
    try:
        sample = ds.resample(rows)
        selection = select_covariates(sample, config)
        chosen = threshold_selection(selection.fit.alpha_hat, sample.n)
        return estimate_effect(sample, chosen, ps_terms).theta_hat
    except PmoeError as e:
        log_event("BOOT", {"replicate": index, "error": str(e)})
        return None


def bootstrap_se(
    ds,
    tau: float = 0.5,
    B: int = 500,
    seed: int = 0,
    config: Optional[PmoeConfig] = None,
    ps_terms: bool = False,
    n_jobs: Optional[int] = None,
) -> Tuple[float, np.ndarray]:
    """Thresholded nonparametric bootstrap of theta_hat.

    Every replicate reruns the whole selection on a resample, zeroes the
    coefficients at or below 1/sqrt(n) and estimates theta on what is left.
    Returns (se, replicate thetas). Replicate b draws from (seed, b), so the
    result does not depend on the number of workers.
    """
    if B < MIN_REPLICATES:
        raise InvalidConfig("bootstrap needs B >= %d, got %d" % (MIN_REPLICATES, B))
    ds = ds.source
    if config is None:
        config = PmoeConfig(tau=tau)
    else:
        config = dataclasses.replace(config, tau=tau)
    # replicates already run in parallel
    config = dataclasses.replace(config, parallel_path=False)

    workers = n_jobs_from_env(n_jobs)
    if workers == 1:
        results = []
        for b in range(B):
            results.append(bootstrap_replicate(ds, config, seed, b, ps_terms))
            misc.printProgressBar(b + 1, B, prefix="bootstrap")
    else:
        results = Parallel(n_jobs=workers)(
            delayed(bootstrap_replicate)(ds, config, seed, b, ps_terms)
            for b in range(B)
        )

    thetas = np.array([t for t in results if t is not None])
    dropped = B - len(thetas)
    if dropped > MAX_DROPPED * B:
        raise BootstrapFailure(dropped, B)
    se = float(np.std(thetas, ddof=1))
    log_event("BOOT", {"B": B, "dropped": dropped, "se": se, "seed": seed})
    return se, thetas
