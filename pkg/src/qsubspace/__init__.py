"""Quantum-inspired pattern classification with quantized basis-state encodings."""

from .classify import ClassifierModel, Prediction, fit, predict, predict_batch, predict_knn
from .dataset import Dataset
from .errors import DatasetError, DimensionError, ModelError, QSubspaceError, QuantizationError
from .quantize import Quantizer, QuantizerBank, fit_bank, fit_quantizer, nint, quantize, quantize_to_ket
from .represent import (
    ClassRepresentation,
    Mode,
    represent_flat_1d,
    represent_nonseparable,
    represent_separable,
    schmidt_rank,
    score_flat,
    score_nonseparable,
    score_separable,
)
from .statevec import StateVector, basis_ket, inner, kron, superpose

__version__ = "0.1.0"
