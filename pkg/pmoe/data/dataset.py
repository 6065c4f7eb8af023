from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from pmoe.errors import ConstantColumn, NonFinite, ValidationError

STANDARDIZED_TOL = 1e-10


def _check_finite(a: np.ndarray):
    bad = np.argwhere(~np.isfinite(a))
    if len(bad) > 0:
        if a.ndim == 1:
            raise NonFinite(int(bad[0][0]), 0)
        raise NonFinite(int(bad[0][0]), int(bad[0][1]))


def standardize(x_raw) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Center every column and scale it to unit sample standard deviation.

    Uses divisor n-1. Returns (x, centers, scales) so that
    x_raw = x * scales + centers.
    """
    x_raw = np.asarray(x_raw, dtype=float)
    if x_raw.ndim == 1:
        x_raw = x_raw[:, None]
    if x_raw.shape[0] < 2:
        raise ValidationError("need at least two rows to standardize")
    _check_finite(x_raw)
    centers = x_raw.mean(axis=0)
    scales = x_raw.std(axis=0, ddof=1)
    for j in range(x_raw.shape[1]):
        if scales[j] <= 1e-12 * max(1.0, abs(centers[j])):
            raise ConstantColumn(j)
    x = (x_raw - centers) / scales
    return x, centers, scales


@dataclass(frozen=True, eq=False)
class Dataset(object):
    """Covariates, binary treatment and outcome of n units.

    d and y keep their original scale, only x is standardized.
    """

    x: np.ndarray
    d: np.ndarray
    y: np.ndarray
    column_names: Tuple[str, ...] = ()
    standardized: bool = True
    centers: Optional[np.ndarray] = None
    scales: Optional[np.ndarray] = None

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        d = np.array(self.d, dtype=float).ravel()
        y = np.array(self.y, dtype=float).ravel()
        n, r = x.shape
        if n < 2 or r < 1:
            raise ValidationError("dataset needs n >= 2 and r >= 1, got %dx%d" % (n, r))
        if len(d) != n or len(y) != n:
            raise ValidationError(
                "x has %d rows but d has %d and y has %d" % (n, len(d), len(y))
            )
        _check_finite(x)
        _check_finite(d)
        _check_finite(y)
        if not np.all((d == 0) | (d == 1)):
            raise ValidationError("treatment must only contain 0 and 1")
        if d.min() == d.max():
            raise ValidationError("treatment needs at least one treated and one control")
        names = tuple(self.column_names)
        if len(names) == 0:
            names = tuple("x%d" % (j + 1) for j in range(r))
        if len(names) != r:
            raise ValidationError("%d column names for %d columns" % (len(names), r))
        if self.standardized:
            if np.max(np.abs(x.mean(axis=0))) > STANDARDIZED_TOL or np.max(
                np.abs(x.std(axis=0, ddof=1) - 1.0)
            ) > STANDARDIZED_TOL:
                raise ValidationError("columns flagged standardized are not")
        for a in (x, d, y):
            a.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_names", names)
        for attr in ("centers", "scales"):
            v = getattr(self, attr)
            if v is not None:
                v = np.array(v, dtype=float)
                v.setflags(write=False)
                object.__setattr__(self, attr, v)

    def __str__(self):
        return "Dataset(n=%d, r=%d, treated=%d, standardized=%s)" % (
            self.n,
            self.r,
            int(self.d.sum()),
            self.standardized,
        )

    @classmethod
    def from_raw(
        cls, x_raw, d, y, column_names: Sequence[str] = ()
    ) -> "Dataset":
        x, centers, scales = standardize(x_raw)
        return cls(x, d, y, tuple(column_names), True, centers, scales)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def r(self) -> int:
        return self.x.shape[1]

    @property
    def design(self) -> np.ndarray:
        """Matrix the objective is evaluated on."""
        return self.x

    @property
    def source(self) -> "Dataset":
        return self

    def raw_x(self) -> np.ndarray:
        """Covariates on their original scale."""
        if self.centers is None or self.scales is None:
            return self.x.copy()
        return self.x * self.scales + self.centers

    def resample(self, rows: np.ndarray) -> "Dataset":
        """Dataset of the given rows, re-standardized from the raw scale."""
        return Dataset.from_raw(
            self.raw_x()[rows], self.d[rows], self.y[rows], self.column_names
        )

    def max_abs_correlation(self) -> float:
        if self.r < 2:
            return 0.0
        c = np.corrcoef(self.x, rowvar=False)
        np.fill_diagonal(c, 0.0)
        return float(np.max(np.abs(c)))
