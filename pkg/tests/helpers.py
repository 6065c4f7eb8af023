import numpy as np
from scipy.special import expit

from pmoe.data import Dataset, gram_schmidt


def linear_dataset(n, beta_y, beta_d, theta=1.0, noise=1.0, seed=0, r=None, rho=0.0):
    """Raw N(0, 1) covariates, logistic treatment, linear outcome."""
    rng = np.random.default_rng(seed)
    beta_y = np.asarray(beta_y, dtype=float)
    beta_d = np.asarray(beta_d, dtype=float)
    if r is None:
        r = len(beta_y)
    x = rng.standard_normal((n, r))
    if rho != 0.0:
        for j in range(1, r):
            x[:, j] = rho * x[:, j - 1] + np.sqrt(1 - rho**2) * x[:, j]
    by = np.zeros(r)
    by[: len(beta_y)] = beta_y
    bd = np.zeros(r)
    bd[: len(beta_d)] = beta_d
    d = (rng.random(n) < expit(x @ bd)).astype(float)
    y = theta * d + x @ by + noise * rng.standard_normal(n)
    return Dataset.from_raw(x, d, y)


def orthogonal_dataset(n, beta_y, beta_d, theta=1.0, noise=1.0, seed=0):
    """Like linear_dataset but with Gram-Schmidt columns as the covariates."""
    ds = linear_dataset(n, beta_y, beta_d, theta, noise, seed)
    u = gram_schmidt(ds).u
    return Dataset(u, ds.d, ds.y)
