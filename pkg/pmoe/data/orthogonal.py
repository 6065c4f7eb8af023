from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import solve_triangular

from pmoe.data.dataset import Dataset
from pmoe.errors import RankDeficient, ValidationError

RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrthogonalizedDataset(object):
    """Gram-Schmidt version of a standardized dataset.

    Column j of u is built from columns 0..j of the source covariates and
    re-standardized, so u^T u = (n-1) I. With x = u @ r_factor.
    """

    u: np.ndarray
    source: Dataset
    column_map: Tuple[Tuple[int, ...], ...]
    r_factor: np.ndarray

    def __str__(self):
        return "OrthogonalizedDataset(n=%d, r=%d)" % (self.n, self.r)

    @property
    def d(self) -> np.ndarray:
        return self.source.d

    @property
    def y(self) -> np.ndarray:
        return self.source.y

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @property
    def r(self) -> int:
        return self.u.shape[1]

    @property
    def column_names(self) -> Tuple[str, ...]:
        return self.source.column_names

    @property
    def standardized(self) -> bool:
        return True

    @property
    def design(self) -> np.ndarray:
        return self.u

    def to_source_coefficients(self, beta_u: np.ndarray) -> np.ndarray:
        """Coefficients on the source covariates giving the same fitted values."""
        return solve_triangular(self.r_factor, np.asarray(beta_u, dtype=float))


def gram_schmidt(ds: Dataset) -> OrthogonalizedDataset:
    """Modified Gram-Schmidt with one re-orthogonalization pass, in column order."""
    if not ds.standardized:
        raise ValidationError("gram_schmidt needs a standardized dataset")
    x = ds.x
    n, r = x.shape
    v = np.array(x, dtype=float)
    q = np.zeros((n, r))
    rf = np.zeros((r, r))
    norms = np.linalg.norm(x, axis=0)
    for j in range(r):
        # second pass against everything accepted so far
        if j > 0:
            c = q[:, :j].T @ v[:, j]
            rf[:j, j] += c
            v[:, j] -= q[:, :j] @ c
        nv = np.linalg.norm(v[:, j])
        if nv < RANK_TOL * norms[j]:
            raise RankDeficient(j)
        rf[j, j] = nv
        q[:, j] = v[:, j] / nv
        if j + 1 < r:
            c = q[:, j] @ v[:, j + 1 :]
            rf[j, j + 1 :] = c
            v[:, j + 1 :] -= np.outer(q[:, j], c)

    scale = np.sqrt(n - 1.0)
    u = q * scale
    u.setflags(write=False)
    rf = rf / scale
    column_map = tuple(tuple(range(j + 1)) for j in range(r))
    return OrthogonalizedDataset(u, ds, column_map, rf)
