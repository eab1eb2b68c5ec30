"""Class representatives built from quantized learning data, and their scores.

Three modes:

* ``FLAT1D``: one feature; the class is the normalized superposition of the
  kets of its elements.
* ``SEPARABLE``: one such superposition per feature, kept as a tuple.
* ``NONSEPARABLE``: the normalized sum, over class elements, of the Kronecker
  product of the element's per-feature kets.  Lives in a space of dimension
  ``prod(dims)``; feature 0 is the most significant digit of the index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, ModelError
from .quantize import QuantizerBank
from .statevec import (
    StateVector,
    check_product_dim,
    count_superposition,
    inner,
    kron_chain,
    normalized,
)

RANK_TOL = 1e-10


class Mode(str, enum.Enum):
    FLAT1D = "flat1d"
    SEPARABLE = "separable"
    NONSEPARABLE = "nonseparable"

    @classmethod
    def parse(cls, value) -> Mode:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ModelError(f"unknown mode {value!r}; expected one of {[m.value for m in cls]}") from None


@dataclass(frozen=True, eq=False)
class ClassRepresentation:
    label: str
    mode: Mode
    flat: StateVector | None = None
    components: tuple[StateVector, ...] | None = None
    product: StateVector | None = None
    dims: tuple[int, ...] = ()

    def __post_init__(self):
        present = {
            Mode.FLAT1D: self.flat is not None,
            Mode.SEPARABLE: self.components is not None,
            Mode.NONSEPARABLE: self.product is not None,
        }
        if not present[self.mode] or sum(present.values()) != 1:
            raise ModelError(f"{self.mode.value} representation must carry exactly its own field")
        if self.components is not None:
            object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if self.mode is Mode.NONSEPARABLE and math.prod(self.dims) != self.product.dim:
            raise DimensionError(f"product dim {self.product.dim} != prod{self.dims}")

    def vectors(self) -> list[StateVector]:
        if self.mode is Mode.FLAT1D:
            return [self.flat]
        if self.mode is Mode.SEPARABLE:
            return list(self.components)
        return [self.product]

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return all(v.is_normalized(tol) for v in self.vectors())

    def amplitude_table(self) -> np.ndarray:
        """Product amplitudes reshaped to ``dims`` (non-separable only)."""
        if self.mode is not Mode.NONSEPARABLE:
            raise ModelError("amplitude_table needs a non-separable representation")
        return self.product.amplitudes.reshape(self.dims)


def _class_indices(bank: QuantizerBank, class_vectors) -> np.ndarray:
    rows = class_vectors if isinstance(class_vectors, np.ndarray) else list(class_vectors)
    if len(rows) == 0:
        raise ModelError("class has no elements")
    if not isinstance(rows, np.ndarray) and len({len(np.atleast_1d(r)) for r in rows}) > 1:
        raise ModelError("ragged feature vectors")
    X = np.asarray(rows, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1) if bank.p == 1 else X.reshape(1, -1)
    if X.shape[1] != bank.p:
        raise DimensionError(f"expected {bank.p} features, got {X.shape[1]}")
    return bank.indices_batch(X)


def represent_flat_1d(bank: QuantizerBank, class_values, label: str = "") -> ClassRepresentation:
    if bank.p != 1:
        raise ModelError(f"flat 1D representation needs exactly one feature, got {bank.p}")
    idx = _class_indices(bank, class_values)
    return ClassRepresentation(label, Mode.FLAT1D, flat=count_superposition(idx[:, 0], bank.dims[0]), dims=bank.dims)


def represent_separable(
    bank: QuantizerBank, class_vectors, label: str = "", *, normalize: bool = True
) -> ClassRepresentation:
    """Per-feature superpositions of the class elements' kets.

    With ``normalize=False`` each component is scaled by ``1/sqrt(k)`` for a
    class of ``k`` elements instead of by its own norm; the two agree only when
    no two elements share a quantization cell in that feature.
    """
    idx = _class_indices(bank, class_vectors)
    k = idx.shape[0]
    comps = []
    for j, d in enumerate(bank.dims):
        if normalize:
            comps.append(count_superposition(idx[:, j], d))
        else:
            comps.append(StateVector(np.bincount(idx[:, j], minlength=d) / math.sqrt(k)))
    return ClassRepresentation(label, Mode.SEPARABLE, components=tuple(comps), dims=bank.dims)


def product_index(indices, dims: Sequence[int]) -> np.ndarray | int:
    """Mixed-radix index of per-feature basis indices; feature 0 most significant."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim == 1:
        return int(np.ravel_multi_index(tuple(idx), tuple(dims)))
    return np.ravel_multi_index(tuple(idx.T), tuple(dims))


def represent_nonseparable(bank: QuantizerBank, class_vectors, label: str = "") -> ClassRepresentation:
    """Normalized sum of per-element Kronecker products.

    Each element contributes ``kron(|i_1>, ..., |i_p>)``, which is the basis
    ket at the mixed-radix index of its quantized coordinates, so the sum is a
    histogram over product cells.
    """
    total = check_product_dim(bank.dims)
    idx = _class_indices(bank, class_vectors)
    flat_idx = product_index(idx, bank.dims)
    amps = np.bincount(np.atleast_1d(flat_idx), minlength=total).astype(float)
    return ClassRepresentation(label, Mode.NONSEPARABLE, product=normalized(amps), dims=bank.dims)


def expand_separable(rep: ClassRepresentation) -> ClassRepresentation:
    """The product-space ket ``kron(component_1, ..., component_p)`` of a separable representative."""
    if rep.mode is not Mode.SEPARABLE:
        raise ModelError("expand_separable needs a separable representation")
    return ClassRepresentation(rep.label, Mode.NONSEPARABLE, product=kron_chain(rep.components), dims=rep.dims)


def _require(rep: ClassRepresentation, mode: Mode):
    if rep.mode is not mode:
        raise ModelError(f"expected a {mode.value} representation, got {rep.mode.value}")


def score_flat(rep: ClassRepresentation, x_ket: StateVector) -> float:
    _require(rep, Mode.FLAT1D)
    return abs(inner(x_ket, rep.flat))


def score_separable(rep: ClassRepresentation, x_kets: Sequence[StateVector]) -> float:
    """Root of the summed squared per-feature overlaps; lies in ``[0, sqrt(p)]``."""
    _require(rep, Mode.SEPARABLE)
    if len(x_kets) != len(rep.components):
        raise DimensionError(f"expected {len(rep.components)} component kets, got {len(x_kets)}")
    return math.sqrt(sum(inner(c, x) ** 2 for c, x in zip(rep.components, x_kets)))


def score_nonseparable(rep: ClassRepresentation, x_kets: Sequence[StateVector]) -> float:
    _require(rep, Mode.NONSEPARABLE)
    if tuple(x.dim for x in x_kets) != rep.dims:
        raise DimensionError(f"pattern dims {tuple(x.dim for x in x_kets)} != {rep.dims}")
    return abs(inner(kron_chain(x_kets), rep.product))


def score(rep: ClassRepresentation, x_kets: Sequence[StateVector]) -> float:
    """Mode-appropriate score of a pattern given as per-feature kets."""
    if rep.mode is Mode.FLAT1D:
        if len(x_kets) != 1:
            raise DimensionError("flat 1D score takes a single ket")
        return score_flat(rep, x_kets[0])
    if rep.mode is Mode.SEPARABLE:
        return score_separable(rep, x_kets)
    return score_nonseparable(rep, x_kets)


def score_indices(rep: ClassRepresentation, idx: np.ndarray) -> np.ndarray:
    """Scores for a batch of patterns already reduced to basis indices.

    Patterns are basis kets, so every overlap is a single amplitude lookup.
    ``idx`` has shape ``(n, p)``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    if rep.mode is Mode.FLAT1D:
        return np.abs(rep.flat.amplitudes[idx[:, 0]])
    if rep.mode is Mode.SEPARABLE:
        sq = sum(c.amplitudes[idx[:, j]] ** 2 for j, c in enumerate(rep.components))
        return np.sqrt(sq)
    return np.abs(rep.product.amplitudes[product_index(idx, rep.dims)])


def schmidt_rank(rep: ClassRepresentation, cut: int = 1, tol: float = RANK_TOL) -> int:
    """Rank of the amplitude matrix across the bipartition ``features[:cut] | features[cut:]``.

    Rank 1 means the class state is a product state.
    """
    if rep.mode is Mode.SEPARABLE:
        rep = expand_separable(rep)
    if rep.mode is not Mode.NONSEPARABLE:
        raise ModelError("schmidt_rank needs a multi-feature representation")
    p = len(rep.dims)
    if p < 2 or not 1 <= cut < p:
        raise ModelError(f"invalid cut {cut} for {p} features")
    rows = math.prod(rep.dims[:cut])
    sv = np.linalg.svd(rep.product.amplitudes.reshape(rows, -1), compute_uv=False)
    return int(np.sum(sv > tol))
