"""JSON model files.

Schema (``"format": 1``)::

    {
      "format": 1,
      "mode": "flat1d" | "separable" | "nonseparable",
      "tie_policy": "lowest" | "random",
      "tie_seed": int,
      "bank": [{"qMin": int, "qMax": int, "dim": int, "boundary": str}, ...],
      "classes": [
        {"label": str, "mode": str,
         "flat": [float, ...]                                  # flat1d
         "components": [[float, ...], ...]                     # separable
         "product": {"dims": [int, ...],
                     "indices": [int, ...], "amplitudes": [float, ...]}}  # nonseparable, sparse
      ],
      "stored_elements": null | [[[int, ...], ...], ...]       # per class, per element basis indices
    }

Floats are written with ``repr`` precision, so a save/load cycle reproduces
every amplitude bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .classify import ClassifierModel
from .errors import ModelError
from .quantize import Quantizer, QuantizerBank
from .represent import ClassRepresentation, Mode
from .statevec import StateVector

FORMAT_VERSION = 1


def _rep_to_dict(rep: ClassRepresentation) -> dict:
    d = {"label": rep.label, "mode": rep.mode.value}
    if rep.mode is Mode.FLAT1D:
        d["flat"] = rep.flat.amplitudes.tolist()
    elif rep.mode is Mode.SEPARABLE:
        d["components"] = [c.amplitudes.tolist() for c in rep.components]
    else:
        nz = rep.product.support()
        d["product"] = {
            "dims": list(rep.dims),
            "indices": nz.tolist(),
            "amplitudes": rep.product.amplitudes[nz].tolist(),
        }
    return d


def _rep_from_dict(d: dict, dims: tuple[int, ...]) -> ClassRepresentation:
    mode = Mode.parse(d["mode"])
    label = str(d["label"])
    if mode is Mode.FLAT1D:
        return ClassRepresentation(label, mode, flat=StateVector(d["flat"]), dims=dims)
    if mode is Mode.SEPARABLE:
        return ClassRepresentation(label, mode, components=tuple(StateVector(c) for c in d["components"]), dims=dims)
    prod = d["product"]
    pdims = tuple(int(v) for v in prod["dims"])
    amps = np.zeros(int(np.prod(pdims)))
    amps[np.asarray(prod["indices"], dtype=np.int64)] = np.asarray(prod["amplitudes"], dtype=float)
    return ClassRepresentation(label, mode, product=StateVector(amps), dims=pdims)


def model_to_dict(model: ClassifierModel) -> dict:
    return {
        "format": FORMAT_VERSION,
        "mode": model.mode.value,
        "tie_policy": model.tie_policy,
        "tie_seed": model.tie_seed,
        "bank": [q.to_dict() for q in model.bank.quantizers],
        "classes": [_rep_to_dict(r) for r in model.reps],
        "stored_elements": None if model.stored is None else [s.tolist() for s in model.stored],
    }


def model_from_dict(d: dict) -> ClassifierModel:
    if d.get("format") != FORMAT_VERSION:
        raise ModelError(f"unsupported model format {d.get('format')!r}")
    try:
        bank = QuantizerBank(tuple(Quantizer.from_dict(q) for q in d["bank"]))
        reps = tuple(_rep_from_dict(r, bank.dims) for r in d["classes"])
        stored = d.get("stored_elements")
        return ClassifierModel(
            Mode.parse(d["mode"]),
            bank,
            reps,
            d.get("tie_policy", "lowest"),
            int(d.get("tie_seed", 0)),
            None if stored is None else tuple(np.asarray(s, dtype=np.int64).reshape(-1, bank.p) for s in stored),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ModelError(f"malformed model file: {exc!r}") from None


def save_model(model: ClassifierModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=1) + "\n", encoding="utf-8")


def load_model(path) -> ClassifierModel:
    try:
        d = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file is not valid JSON: {exc}") from None
    return model_from_dict(d)
