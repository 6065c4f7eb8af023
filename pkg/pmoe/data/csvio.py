from __future__ import annotations

from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from pmoe.data.dataset import Dataset
from pmoe.errors import DataFormatError

TREATMENT_VALUES = {"0": 0, "1": 1, "0.0": 0, "1.0": 1, "false": 0, "true": 1}
DICHOTOMIZE_MODES = ("below-median", "above-median")


def _line(row_index: int) -> int:
    # header is line 1
    return int(row_index) + 2


def _to_numeric(column: pd.Series, name: str) -> np.ndarray:
    values = pd.to_numeric(column.str.strip(), errors="coerce")
    bad = np.flatnonzero(values.isna().to_numpy())
    if len(bad) > 0:
        i = bad[0]
        raise DataFormatError(
            "column '%s': cannot parse %r as a number" % (name, column.iloc[i]),
            line=_line(i),
        )
    out = values.to_numpy(dtype=float)
    bad = np.flatnonzero(~np.isfinite(out))
    if len(bad) > 0:
        raise DataFormatError(
            "column '%s': non-finite value %r" % (name, column.iloc[bad[0]]),
            line=_line(bad[0]),
        )
    return out


def _parse_treatment(column: pd.Series, name: str) -> np.ndarray:
    d = np.empty(len(column))
    for i, raw in enumerate(column):
        key = str(raw).strip().lower()
        if key not in TREATMENT_VALUES:
            raise DataFormatError(
                "treatment column '%s' must be binary (0/1/true/false), got %r"
                % (name, raw),
                line=_line(i),
            )
        d[i] = TREATMENT_VALUES[key]
    return d


def dichotomize(values: np.ndarray, mode: str) -> np.ndarray:
    """Binary treatment from a continuous exposure split at its median."""
    median = np.median(values)
    if mode == "below-median":
        return (values < median).astype(float)
    if mode == "above-median":
        return (values > median).astype(float)
    raise DataFormatError(
        "unknown dichotomize mode %r, expected one of %s"
        % (mode, ", ".join(DICHOTOMIZE_MODES))
    )


def read_csv(
    path: str,
    outcome: str,
    treatment: str,
    covariates: Optional[Sequence[str]] = None,
    dichotomize_mode: Optional[str] = None,
) -> Dataset:
    """Load a Dataset from a comma separated, UTF-8 file with a header row.

    covariates=None uses every column except outcome and treatment.
    """
    if outcome == treatment:
        raise DataFormatError("outcome and treatment must be different columns")
    try:
        df = pd.read_csv(
            path, dtype=str, keep_default_na=False, encoding="utf-8", sep=","
        )
    except pd.errors.EmptyDataError:
        raise DataFormatError("file %s is empty" % path)
    except pd.errors.ParserError as e:
        raise DataFormatError("cannot parse %s: %s" % (path, e))
    except OSError as e:
        raise DataFormatError("cannot read %s: %s" % (path, e))

    df.columns = [c.strip() for c in df.columns]
    for col in (outcome, treatment):
        if col not in df.columns:
            raise DataFormatError(
                "column '%s' not found, header has: %s" % (col, ", ".join(df.columns))
            )
    if covariates is None:
        covariates = [c for c in df.columns if c not in (outcome, treatment)]
    covariates = list(covariates)
    missing = [c for c in covariates if c not in df.columns]
    if len(missing) > 0:
        raise DataFormatError("covariate columns not found: %s" % ", ".join(missing))
    if outcome in covariates or treatment in covariates:
        raise DataFormatError("outcome/treatment cannot also be covariates")
    if len(covariates) == 0:
        raise DataFormatError("no covariate columns")

    y = _to_numeric(df[outcome], outcome)
    if dichotomize_mode is None:
        d = _parse_treatment(df[treatment], treatment)
    else:
        d = dichotomize(_to_numeric(df[treatment], treatment), dichotomize_mode)
    x = np.column_stack([_to_numeric(df[c], c) for c in covariates])
    return Dataset.from_raw(x, d, y, covariates)


def write_csv(
    ds: Dataset, path: str, outcome: str = "y", treatment: str = "d"
) -> List[str]:
    """Write raw covariates, treatment and outcome with round-trip precision."""
    df = pd.DataFrame(ds.raw_x(), columns=list(ds.column_names))
    df[treatment] = ds.d.astype(int)
    df[outcome] = ds.y
    df.to_csv(path, index=False, float_format="%.17g", encoding="utf-8")
    return list(df.columns)
