"""Fitting class representatives and classifying patterns by maximal overlap."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .dataset import Dataset
from .errors import DimensionError, ModelError
from .quantize import QuantizerBank, fit_bank
from .represent import (
    ClassRepresentation,
    Mode,
    represent_flat_1d,
    represent_nonseparable,
    represent_separable,
    score,
    score_indices,
)

TIE_TOL = 1e-12
TIE_POLICIES = ("lowest", "random")


@dataclass(frozen=True, eq=False)
class Prediction:
    label: str
    scores: dict[str, float]
    tie: bool


@dataclass(frozen=True, eq=False)
class ClassifierModel:
    mode: Mode
    bank: QuantizerBank
    reps: tuple[ClassRepresentation, ...]
    tie_policy: str = "lowest"
    tie_seed: int = 0
    # per class, the (n_i, p) basis indices of its learning elements; kNN only
    stored: tuple[np.ndarray, ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "reps", tuple(self.reps))
        if len(self.reps) < 2:
            raise ModelError("a classifier needs at least two classes")
        labels = [r.label for r in self.reps]
        if len(set(labels)) != len(labels):
            raise ModelError(f"class labels must be unique: {labels}")
        if self.tie_policy not in TIE_POLICIES:
            raise ModelError(f"unknown tie policy {self.tie_policy!r}")
        for r in self.reps:
            if r.mode is not self.mode:
                raise ModelError("all class representations must share the model's mode")
            if r.dims != self.bank.dims:
                raise DimensionError(f"representation dims {r.dims} != quantizer dims {self.bank.dims}")
        if self.stored is not None:
            stored = tuple(np.asarray(s, dtype=np.int64).reshape(-1, self.bank.p) for s in self.stored)
            if len(stored) != len(self.reps):
                raise ModelError("stored elements must be given for every class")
            object.__setattr__(self, "stored", stored)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(r.label for r in self.reps)

    @property
    def p(self) -> int:
        return self.bank.p


_BUILDERS = {
    Mode.FLAT1D: represent_flat_1d,
    Mode.SEPARABLE: represent_separable,
    Mode.NONSEPARABLE: represent_nonseparable,
}


def fit(
    data: Dataset,
    mode=Mode.NONSEPARABLE,
    *,
    tie_policy: str = "lowest",
    tie_seed: int = 0,
    store_elements: bool = False,
    boundary: str = "rounded",
    dim_convention: str = "listing",
    normalize_separable: bool = True,
) -> ClassifierModel:
    """Fit quantizers on the pooled data and one representative per class.

    Class order (and hence the lowest-index tie winner) is the order in which
    labels first appear in ``data``.
    """
    mode = Mode.parse(mode)
    classes = data.classes
    if len(classes) < 2:
        raise ModelError(f"need at least two classes, got {len(classes)}")
    if mode is Mode.FLAT1D and data.p != 1:
        raise ModelError(f"flat1d mode requires exactly one feature, got {data.p}")
    bank = fit_bank(data.X, boundary=boundary, dim_convention=dim_convention)
    build = _BUILDERS[mode]
    reps, stored = [], []
    for label in classes:
        rows = data.rows_of(label)
        if mode is Mode.SEPARABLE:
            reps.append(build(bank, rows, label, normalize=normalize_separable))
        else:
            reps.append(build(bank, rows, label))
        if store_elements:
            stored.append(bank.indices_batch(rows))
    return ClassifierModel(mode, bank, tuple(reps), tie_policy, tie_seed, tuple(stored) if store_elements else None)


def _decide(model: ClassifierModel, scores: np.ndarray, cell: tuple[int, ...]) -> tuple[int, bool]:
    best = scores.max()
    top = np.flatnonzero(scores >= best - TIE_TOL)
    tie = top.size > 1
    if not tie or model.tie_policy == "lowest":
        return int(top[0]), tie
    # seeded by the quantization cell so equal cells always break ties alike
    rng = np.random.default_rng([model.tie_seed & 0xFFFFFFFFFFFFFFFF, *cell])
    return int(rng.choice(top)), tie


def _check_x(model: ClassifierModel, x) -> list[float]:
    x = [float(v) for v in np.atleast_1d(x)]
    if len(x) != model.p:
        raise DimensionError(f"expected {model.p} features, got {len(x)}")
    if not all(math.isfinite(v) for v in x):
        raise DimensionError("pattern features must be finite")
    return x


def predict(model: ClassifierModel, x: Sequence[float]) -> Prediction:
    """Quantize ``x``, score it against every class, and take the argmax."""
    x = _check_x(model, x)
    kets = model.bank.kets(x)
    scores = np.array([score(rep, kets) for rep in model.reps])
    k, tie = _decide(model, scores, model.bank.indices(x))
    return Prediction(model.labels[k], dict(zip(model.labels, scores.tolist())), tie)


@dataclass(frozen=True, eq=False)
class BatchPrediction:
    labels: tuple[str, ...]
    class_index: np.ndarray  # (n,)
    scores: np.ndarray  # (n, C)
    tie: np.ndarray  # (n,) bool

    def __len__(self):
        return self.class_index.size

    def __getitem__(self, i) -> Prediction:
        return Prediction(
            self.labels[self.class_index[i]],
            dict(zip(self.labels, self.scores[i].tolist())),
            bool(self.tie[i]),
        )


def predict_batch(model: ClassifierModel, X) -> BatchPrediction:
    """Vectorized :func:`predict` for an ``(n, p)`` array; same decisions row by row."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, model.p)
    if X.ndim != 2 or X.shape[1] != model.p:
        raise DimensionError(f"expected {model.p} features per row, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise DimensionError("pattern features must be finite")
    idx = model.bank.indices_batch(X)
    scores = np.stack([score_indices(rep, idx) for rep in model.reps], axis=1) if len(X) else np.zeros((0, len(model.reps)))
    best = scores.max(axis=1, keepdims=True) if len(X) else scores
    top = scores >= best - TIE_TOL
    tie = top.sum(axis=1) > 1
    choice = np.argmax(top, axis=1)
    if model.tie_policy == "random":
        for i in np.flatnonzero(tie):
            choice[i], _ = _decide(model, scores[i], tuple(int(v) for v in idx[i]))
    return BatchPrediction(model.labels, choice, scores, tie)


def _element_overlap(mode: Mode, a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|`` between two single patterns given by basis indices.

    For the separable mode the per-feature score is divided by ``sqrt(p)`` so
    the result stays in ``[0, 1]``.
    """
    if mode is Mode.SEPARABLE:
        return math.sqrt(np.count_nonzero(a == b) / a.size)
    return 1.0 if np.array_equal(a, b) else 0.0


def predict_knn(model: ClassifierModel, x: Sequence[float], k: int) -> Prediction:
    """Majority vote among the ``k`` stored learning elements nearest to ``x``.

    Distance is ``1 - |overlap|`` between single quantized patterns; class
    superpositions are not used.  Distance ties go to the lower (class,
    element) index, vote ties to the lower class index.  ``scores`` holds the
    vote fraction per class.
    """
    if model.stored is None:
        raise ModelError("model was fitted without stored elements; refit with store_elements=True")
    total = sum(len(s) for s in model.stored)
    if not 1 <= k <= total:
        raise ModelError(f"k must be in [1, {total}], got {k}")
    x = _check_x(model, x)
    xi = np.asarray(model.bank.indices(x))
    ranked = []
    for c, elems in enumerate(model.stored):
        for e, el in enumerate(elems):
            ranked.append((1.0 - _element_overlap(model.mode, xi, el), c, e))
    ranked.sort()
    votes = np.zeros(len(model.reps))
    for _, c, _ in ranked[:k]:
        votes[c] += 1
    top = np.flatnonzero(votes == votes.max())
    return Prediction(model.labels[int(top[0])], dict(zip(model.labels, (votes / k).tolist())), top.size > 1)
