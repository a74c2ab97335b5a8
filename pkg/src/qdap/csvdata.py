"""Reading labeled and unlabeled CSV files.

Features are used as they are; no centering or scaling is applied.
Rows with a missing or non-numeric entry are dropped and counted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .core import LabeledDataset


class SchemaError(ValueError):
    """The CSV does not match the expected layout."""


@dataclass(frozen=True)
class CsvSchema:
    label: str | int | None = None
    header: bool = True


def _read(path, header: bool) -> pd.DataFrame:
    try:
        return pd.read_csv(path, header=0 if header else None, dtype=str,
                           skipinitialspace=True, keep_default_na=True)
    except pd.errors.EmptyDataError:
        return pd.DataFrame()


def _resolve(df: pd.DataFrame, label):
    if label is None:
        return df.columns[-1]
    if label in df.columns:
        return label
    text = str(label)
    if text in map(str, df.columns):
        return next(c for c in df.columns if str(c) == text)
    if text.lstrip("-").isdigit():
        idx = int(text)
        if -len(df.columns) <= idx < len(df.columns):
            return df.columns[idx]
    raise SchemaError(f"label column {label!r} not found")


def _numeric(df: pd.DataFrame):
    num = df.apply(pd.to_numeric, errors="coerce")
    ok = num.notna().all(axis=1).to_numpy()
    return num.to_numpy(dtype=float), ok


def read_labeled_csv(path, schema: CsvSchema = CsvSchema()):
    """Return ``(dataset, dropped_rows, feature_names)``."""
    df = _read(path, schema.header)
    if df.shape[1] < 2:
        raise SchemaError("need a label column and at least one feature column")
    label_col = _resolve(df, schema.label)
    features = df.drop(columns=[label_col])
    values, ok = _numeric(pd.concat([features, df[[label_col]]], axis=1))
    x, y = values[ok, :-1], values[ok, -1]
    if y.size and not np.all((y == 0) | (y == 1)):
        bad = sorted(set(np.unique(y)) - {0.0, 1.0})
        raise SchemaError(f"labels must be 0 or 1, found {bad[:5]}")
    return LabeledDataset(x, y.astype(np.int64)), int((~ok).sum()), [str(c) for c in features.columns]


def read_feature_csv(path, drop=None, header: bool = True):
    """Return ``(matrix, dropped_rows)``; ``drop`` names a column to ignore."""
    df = _read(path, header)
    if df.shape[1] == 0:
        return np.empty((0, 0)), 0
    if drop is not None:
        df = df.drop(columns=[_resolve(df, drop)])
    values, ok = _numeric(df)
    return values[ok], int((~ok).sum())


def write_labels(path, labels) -> None:
    with open(path, "w") as fh:
        fh.writelines(f"{int(v)}\n" for v in labels)


def read_labels(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([int(line) for line in fh if line.strip()], dtype=np.int64)


def write_dataset(path, data: LabeledDataset, label: str = "label") -> None:
    """Write ``data`` as a CSV with columns ``x0..x{p-1}`` and ``label``."""
    df = pd.DataFrame(data.x, columns=[f"x{i}" for i in range(data.p)])
    df[label] = data.y
    df.to_csv(path, index=False, float_format="%.17g")
