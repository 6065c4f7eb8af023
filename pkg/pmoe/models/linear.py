from typing import Optional

import numpy as np

from pmoe.errors import SingularDesign


def with_intercept(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    return np.column_stack([np.ones(x.shape[0]), x])


def least_squares(
    z: np.ndarray,
    y: np.ndarray,
    ridge: float = 0.0,
    penalized: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Minimize |y - z b|^2 + ridge * |b[penalized]|^2.

    penalized is a boolean mask over the columns of z (default: all).
    Raises SingularDesign when ridge == 0 and z is not of full column rank.
    """
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = z.shape
    if penalized is None:
        penalized = np.ones(p, dtype=bool)
    if ridge > 0:
        rows = np.sqrt(ridge) * np.diag(penalized.astype(float))[penalized]
        za = np.vstack([z, rows])
        ya = np.concatenate([y, np.zeros(rows.shape[0])])
    else:
        if n < p:
            raise SingularDesign("%d columns but only %d rows" % (p, n))
        za, ya = z, y
    coef, _, rank, sv = np.linalg.lstsq(za, ya, rcond=None)
    if rank < p:
        raise SingularDesign("design has rank %d < %d columns" % (rank, p))
    if sv[-1] <= 1e-12 * sv[0]:
        raise SingularDesign("design condition number %.3g" % (sv[0] / sv[-1]))
    return coef


def least_squares_residuals(z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Residuals of the unpenalized fit of y on z (z may be rank deficient)."""
    coef, _, _, _ = np.linalg.lstsq(z, y, rcond=None)
    return y - z @ coef

