"""JSON files for models and states.

Matrices are row-major nested lists. An entry is either a real number or an
``[re, im]`` pair. A model document looks like::

    {
      "dims": [2, 2],                  # system first, then apparatus factors
      "xi": [[...]],
      "U": [[...]],
      "pointer": {"outcomes": ["0", "1"], "projectors": [[[...]], [[...]]]},
      "hamiltonians": {"H_S0": ..., "H_Stau": ..., "H_A0": ..., "H_Atau": ...}
    }

Outcome labels are strings, or lists of strings for composite outcomes. A
state document is ``{"dims": [d], "rho": [[...]]}``.

Structural problems raise :class:`ModelFileError` naming the offending field
(or the line and column for invalid JSON). Physical checks such as unitarity
happen later, when the model is constructed.
"""

from __future__ import annotations

import json
from math import prod
from pathlib import Path

import numpy as np

from .errors import ModelFileError
from .measurement import MeasurementModel, PointerObservable
from .opcore import DensityState, as_array

HAMILTONIAN_KEYS = ("H_S0", "H_Stau", "H_A0", "H_Atau")


def _entry(v, path: str) -> complex:
    if isinstance(v, bool):
        raise ModelFileError(f"{path}: expected a number or [re, im], got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in v):
        return complex(v[0], v[1])
    raise ModelFileError(f"{path}: expected a number or [re, im], got {v!r}")


def parse_matrix(obj, path: str, side: int | None = None) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ModelFileError(f"{path}: expected a nonempty list of rows")
    n = len(obj)
    for i, row in enumerate(obj):
        if len(row) != n:
            raise ModelFileError(f"{path}[{i}]: row has {len(row)} entries, matrix must be square ({n}x{n})")
    if side is not None and n != side:
        raise ModelFileError(f"{path}: expected a {side}x{side} matrix, got {n}x{n}")
    return np.array([[_entry(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(obj)])


def encode_matrix(a) -> list:
    a = as_array(a)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def _label(v, path: str):
    if isinstance(v, str):
        return v
    if isinstance(v, list) and v and all(isinstance(t, str) for t in v):
        return tuple(v)
    raise ModelFileError(f"{path}: outcome label must be a string or a list of strings")


def _load_json(source) -> dict:
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ModelFileError(f"{source}: cannot read file ({exc.strerror})") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ModelFileError(f"{source}: top level must be an object")
    return doc


def _require(doc: dict, key: str, path: str = ""):
    if key not in doc:
        raise ModelFileError(f"{path}{key}: missing field")
    return doc[key]


def _dims(doc: dict) -> tuple[int, ...]:
    dims = _require(doc, "dims")
    if not isinstance(dims, list) or not dims or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims):
        raise ModelFileError("dims: expected a nonempty list of positive integers")
    return tuple(dims)


def model_from_dict(doc: dict) -> MeasurementModel:
    dims = _dims(doc)
    if len(dims) < 2:
        raise ModelFileError("dims: need the system dimension followed by at least one apparatus dimension")
    dS, adims = dims[0], dims[1:]
    dA = prod(adims)
    pointer = _require(doc, "pointer")
    if not isinstance(pointer, dict):
        raise ModelFileError("pointer: expected an object")
    outcomes = _require(pointer, "outcomes", "pointer.")
    projs = _require(pointer, "projectors", "pointer.")
    if not isinstance(outcomes, list) or not isinstance(projs, list) or len(outcomes) != len(projs):
        raise ModelFileError("pointer: outcomes and projectors must be lists of equal length")
    labels = tuple(_label(v, f"pointer.outcomes[{k}]") for k, v in enumerate(outcomes))
    P = [parse_matrix(p, f"pointer.projectors[{k}]", dA) for k, p in enumerate(projs)]
    hams = _require(doc, "hamiltonians")
    if not isinstance(hams, dict):
        raise ModelFileError("hamiltonians: expected an object")
    H = {
        key: parse_matrix(_require(hams, key, "hamiltonians."), f"hamiltonians.{key}", dS if key.startswith("H_S") else dA)
        for key in HAMILTONIAN_KEYS
    }
    return MeasurementModel(
        system_dim=dS,
        apparatus_dims=adims,
        xi=parse_matrix(_require(doc, "xi"), "xi", dA),
        U=parse_matrix(_require(doc, "U"), "U", dS * dA),
        pointer=PointerObservable(labels, P),
        **H,
    )


def model_to_dict(model: MeasurementModel) -> dict:
    return {
        "dims": list(model.dims),
        "xi": encode_matrix(model.xi),
        "U": encode_matrix(model.U),
        "pointer": {
            "outcomes": [list(x) if isinstance(x, tuple) else x for x in model.outcomes],
            "projectors": [encode_matrix(p) for p in model.pointer.projectors],
        },
        "hamiltonians": {key: encode_matrix(getattr(model, key)) for key in HAMILTONIAN_KEYS},
    }


def state_from_dict(doc: dict) -> DensityState:
    dims = _dims(doc)
    return DensityState(parse_matrix(_require(doc, "rho"), "rho", prod(dims)), dims)


def state_to_dict(rho) -> dict:
    a = as_array(rho)
    dims = list(rho.dims) if isinstance(rho, DensityState) else [a.shape[0]]
    return {"dims": dims, "rho": encode_matrix(a)}


def load_model(path) -> MeasurementModel:
    return model_from_dict(_load_json(path))


def load_state(path) -> DensityState:
    return state_from_dict(_load_json(path))


def save_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")
