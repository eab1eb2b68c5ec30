"""Nearest-integer quantization of real features onto basis kets.

A :class:`Quantizer` covers the integer range ``[q_min, q_max]`` of the
learning data plus two sentinel indices: ``0`` for values below the range and
``dim - 1`` for values above it.  With the default conventions::

    q_min = nint(min(values))
    q_max = nint(max(values)) + 1
    dim   = q_max - q_min + 2
    index = clip(nint(x) - q_min + 1, 0, dim - 1)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import QuantizationError
from .statevec import StateVector, basis_ket

# "rounded": below-range test on nint(x); "raw": on x itself, as in the
# reference listing, so x in [q_min - 0.5, q_min) also lands on sentinel 0.
BOUNDARIES = ("rounded", "raw")
# "listing": q_max = nint(max) + 1; "prose": q_max = nint(max).
DIM_CONVENTIONS = ("listing", "prose")


def nint(c: float) -> int:
    """Nearest integer, halves to even (C ``rint``)."""
    c = float(c)
    if not math.isfinite(c):
        raise QuantizationError(f"cannot quantize non-finite value {c!r}")
    return int(np.rint(c))


def _as_finite(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise QuantizationError("cannot quantize non-finite values")
    return arr


@dataclass(frozen=True)
class Quantizer:
    q_min: int
    q_max: int
    dim: int
    boundary: str = "rounded"

    def __post_init__(self):
        if self.q_max < self.q_min:
            raise QuantizationError(f"q_max {self.q_max} < q_min {self.q_min}")
        if self.dim != self.q_max - self.q_min + 2:
            raise QuantizationError(f"dim must equal q_max - q_min + 2, got {self.dim}")
        if self.boundary not in BOUNDARIES:
            raise QuantizationError(f"unknown boundary rule {self.boundary!r}")

    def index(self, x: float) -> int:
        return quantize(self, x)

    def indices(self, xs) -> np.ndarray:
        """Vectorized :func:`quantize` over an array of values."""
        xs = _as_finite(xs)
        idx = np.rint(xs) - self.q_min + 1
        if self.boundary == "raw":
            idx = np.where(xs < self.q_min, 0, np.where(xs > self.q_max, self.dim - 1, idx))
        return np.clip(idx, 0, self.dim - 1).astype(np.int64)

    def to_dict(self) -> dict:
        return {"qMin": self.q_min, "qMax": self.q_max, "dim": self.dim, "boundary": self.boundary}

    @classmethod
    def from_dict(cls, d: dict) -> Quantizer:
        return cls(int(d["qMin"]), int(d["qMax"]), int(d["dim"]), d.get("boundary", "rounded"))


def fit_quantizer(values, *, boundary: str = "rounded", dim_convention: str = "listing") -> Quantizer:
    """Fit a quantizer on the values of one feature pooled across every class."""
    arr = _as_finite(values).reshape(-1)
    if arr.size == 0:
        raise QuantizationError("cannot fit a quantizer on an empty list")
    if dim_convention not in DIM_CONVENTIONS:
        raise QuantizationError(f"unknown dimension convention {dim_convention!r}")
    q_min = nint(arr.min())
    q_max = nint(arr.max()) + (1 if dim_convention == "listing" else 0)
    return Quantizer(q_min, q_max, q_max - q_min + 2, boundary)


def quantize(q: Quantizer, x: float) -> int:
    """Basis index of ``x`` under ``q``."""
    r = nint(x)
    if q.boundary == "raw":
        if x < q.q_min:
            return 0
        if x > q.q_max:
            return q.dim - 1
    return min(max(r - q.q_min + 1, 0), q.dim - 1)


def quantize_to_ket(q: Quantizer, x: float) -> StateVector:
    return basis_ket(quantize(q, x), q.dim)


@dataclass(frozen=True)
class QuantizerBank:
    """One quantizer per feature, in column order."""

    quantizers: tuple[Quantizer, ...]

    def __post_init__(self):
        object.__setattr__(self, "quantizers", tuple(self.quantizers))
        if not self.quantizers:
            raise QuantizationError("a quantizer bank needs at least one feature")

    @property
    def p(self) -> int:
        return len(self.quantizers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(q.dim for q in self.quantizers)

    def __len__(self):
        return self.p

    def __getitem__(self, j) -> Quantizer:
        return self.quantizers[j]

    def indices(self, x: Sequence[float]) -> tuple[int, ...]:
        """Per-feature basis indices of one feature vector."""
        x = list(x)
        if len(x) != self.p:
            raise QuantizationError(f"expected {self.p} features, got {len(x)}")
        return tuple(quantize(q, v) for q, v in zip(self.quantizers, x))

    def kets(self, x: Sequence[float]) -> list[StateVector]:
        return [basis_ket(i, d) for i, d in zip(self.indices(x), self.dims)]

    def indices_batch(self, X) -> np.ndarray:
        """``(n, p)`` integer array of basis indices for ``(n, p)`` inputs."""
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.p:
            raise QuantizationError(f"expected an (n, {self.p}) array, got shape {X.shape}")
        if X.shape[0] == 0:
            return np.zeros((0, self.p), dtype=np.int64)
        return np.stack([q.indices(X[:, j]) for j, q in enumerate(self.quantizers)], axis=1)


def fit_bank(X, **kwargs) -> QuantizerBank:
    """Fit one quantizer per column of a rectangular ``(n, p)`` sample.

    ``X`` may be a :class:`~qsubspace.dataset.Dataset` or anything array-like;
    all rows (every class) are pooled.
    """
    X = getattr(X, "X", X)
    if isinstance(X, np.ndarray):
        arr = X
    else:
        rows = list(X)
        if rows and len({len(np.atleast_1d(r)) for r in rows}) > 1:
            raise QuantizationError("ragged feature vectors")
        arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise QuantizationError("cannot fit quantizers on an empty dataset")
    return QuantizerBank(tuple(fit_quantizer(arr[:, j], **kwargs) for j in range(arr.shape[1])))
