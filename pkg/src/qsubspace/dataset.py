"""Labeled feature vectors and their CSV form.

CSV layout: header ``f0,...,f{p-1},label``, one row per pattern, plain
decimal numbers, UTF-8.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DatasetError


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self):
        X = np.array(self.X, dtype=float, copy=True)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
            raise DatasetError("dataset needs at least one row and one feature")
        labels = tuple(str(lab) for lab in self.labels)
        if len(labels) != X.shape[0]:
            raise DatasetError(f"{X.shape[0]} rows but {len(labels)} labels")
        if any(lab == "" for lab in labels):
            raise DatasetError("labels must be nonempty strings")
        if not np.all(np.isfinite(X)):
            raise DatasetError("features must be finite")
        X.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", labels)

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.X.shape[0]

    @property
    def classes(self) -> tuple[str, ...]:
        """Distinct labels in order of first appearance; this fixes the class index."""
        return tuple(dict.fromkeys(self.labels))

    def rows_of(self, label: str) -> np.ndarray:
        mask = np.fromiter((lab == label for lab in self.labels), dtype=bool, count=len(self.labels))
        return self.X[mask]

    @classmethod
    def from_classes(cls, classes: dict) -> Dataset:
        """Build from ``{label: rows}``; insertion order sets class order."""
        X, labels = [], []
        for label, rows in classes.items():
            rows = np.asarray(rows, dtype=float)
            if rows.ndim == 1:
                rows = rows.reshape(-1, 1)
            X.append(rows)
            labels += [str(label)] * len(rows)
        if not X:
            raise DatasetError("no classes given")
        widths = {r.shape[1] for r in X if r.size}
        if len(widths) > 1:
            raise DatasetError("ragged feature vectors")
        return cls(np.vstack(X), tuple(labels))


def _parse_float(text: str, lineno: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DatasetError(f"not a number: {text!r}", lineno) from None
    if not math.isfinite(value):
        raise DatasetError(f"non-finite value: {text!r}", lineno)
    return value


def read_features_csv(path, *, require_label: bool):
    """Parse a feature CSV into ``(X, labels)``; ``labels`` is None when absent.

    Errors carry the 1-based line number of the offending row.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DatasetError("empty file", 1) from None
        header = [h.strip() for h in header]
        has_label = bool(header) and header[-1] == "label"
        if require_label and not has_label:
            raise DatasetError("last header column must be 'label'", 1)
        p = len(header) - (1 if has_label else 0)
        if p < 1:
            raise DatasetError("no feature columns", 1)
        rows, labels = [], []
        for row in reader:
            lineno = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DatasetError(f"expected {len(header)} columns, got {len(row)}", lineno)
            rows.append([_parse_float(cell, lineno) for cell in row[:p]])
            if has_label:
                label = row[-1].strip()
                if not label:
                    raise DatasetError("empty label", lineno)
                labels.append(label)
    if not rows:
        raise DatasetError("no data rows", 2)
    return np.asarray(rows, dtype=float), (tuple(labels) if has_label else None)


def read_csv(path) -> Dataset:
    X, labels = read_features_csv(path, require_label=True)
    return Dataset(X, labels)


def write_csv(data: Dataset, path) -> None:
    with open(Path(path), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f{j}" for j in range(data.p)] + ["label"])
        for x, label in zip(data.X, data.labels):
            writer.writerow([repr(float(v)) for v in x] + [label])
