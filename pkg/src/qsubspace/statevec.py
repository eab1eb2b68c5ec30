"""Dense real state vectors: basis kets, superposition, inner and Kronecker products.

All amplitudes are real. Vectors are immutable; every function here is pure.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError

NORM_TOL = 1e-12
DEFAULT_MAX_PRODUCT_DIM = 2**24
MAX_PRODUCT_DIM_ENV = "QSUBSPACE_MAX_PRODUCT_DIM"


def max_product_dim() -> int:
    """Cap on Kronecker-product dimensions; overridable via the environment."""
    raw = os.environ.get(MAX_PRODUCT_DIM_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_PRODUCT_DIM
    try:
        value = int(raw)
    except ValueError:
        raise DimensionError(f"{MAX_PRODUCT_DIM_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise DimensionError(f"{MAX_PRODUCT_DIM_ENV} must be positive, got {value}")
    return value


def check_product_dim(dims: Iterable[int], limit: int | None = None) -> int:
    """Return the product of ``dims``, raising if it exceeds the cap."""
    limit = max_product_dim() if limit is None else limit
    total = 1
    for d in dims:
        total *= int(d)
        if total > limit:
            raise DimensionError(f"product space too large (exceeds {limit})")
    return total


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float, copy=True).reshape(-1)
        if amps.size < 1:
            raise DimensionError("state vector needs at least one amplitude")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(float(self.amplitudes @ self.amplitudes) - 1.0) <= tol

    def support(self) -> np.ndarray:
        """Indices of nonzero amplitudes."""
        return np.flatnonzero(self.amplitudes)

    def allclose(self, other: StateVector, atol: float = NORM_TOL) -> bool:
        return self.dim == other.dim and bool(np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=atol))

    def __len__(self):
        return self.dim

    def __repr__(self):
        nz = ", ".join(f"{i}: {self.amplitudes[i]:.6g}" for i in self.support()[:8])
        more = ", ..." if self.support().size > 8 else ""
        return f"StateVector(dim={self.dim}, {{{nz}{more}}})"


def basis_ket(index: int, dim: int) -> StateVector:
    """The ket ``|index>`` in a ``dim``-dimensional space."""
    if dim < 1:
        raise DimensionError(f"dimension must be positive, got {dim}")
    if not 0 <= index < dim:
        raise DimensionError(f"basis index out of range: {index} not in [0, {dim})")
    amps = np.zeros(dim)
    amps[index] = 1.0
    return StateVector(amps)


def inner(a: StateVector, b: StateVector) -> float:
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(a.amplitudes @ b.amplitudes)


def kron(a: StateVector, b: StateVector, max_dim: int | None = None) -> StateVector:
    """Kronecker product; entry ``i * b.dim + j`` is ``a[i] * b[j]``."""
    check_product_dim((a.dim, b.dim), max_dim)
    return StateVector(np.kron(a.amplitudes, b.amplitudes))


def kron_chain(vectors: Sequence[StateVector], max_dim: int | None = None) -> StateVector:
    """Left-to-right Kronecker product; the first vector is most significant."""
    if len(vectors) == 0:
        raise DimensionError("kron_chain needs at least one vector")
    check_product_dim((v.dim for v in vectors), max_dim)
    return reduce(lambda acc, v: kron(acc, v, max_dim), vectors[1:], vectors[0])


def superpose(vectors: Sequence[StateVector]) -> StateVector:
    """Normalized sum of ``vectors``. Repeated kets accumulate as amplitude."""
    if len(vectors) == 0:
        raise DimensionError("superpose needs a nonempty list of vectors")
    dim = vectors[0].dim
    total = np.zeros(dim)
    for v in vectors:
        if v.dim != dim:
            raise DimensionError(f"dimension mismatch: {v.dim} vs {dim}")
        total += v.amplitudes
    return normalized(total)


def normalized(amplitudes) -> StateVector:
    amps = np.asarray(amplitudes, dtype=float)
    norm = math.sqrt(float(amps @ amps))
    if norm == 0.0:
        raise DimensionError("zero superposition cannot be normalized")
    return StateVector(amps / norm)


def count_superposition(indices, dim: int) -> StateVector:
    """Normalized superposition of basis kets given by ``indices`` (with multiplicity).

    Equivalent to ``superpose([basis_ket(i, dim) for i in indices])`` without
    materializing the individual kets.
    """
    idx = np.asarray(indices, dtype=np.int64).reshape(-1)
    if idx.size == 0:
        raise DimensionError("superpose needs a nonempty list of vectors")
    if idx.min() < 0 or idx.max() >= dim:
        raise DimensionError("basis index out of range")
    return normalized(np.bincount(idx, minlength=dim).astype(float))
