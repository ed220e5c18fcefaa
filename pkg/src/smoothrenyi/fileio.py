"""JSON descriptor files for distributions, chains and quantum objects.

Formats (all plain JSON objects):

    distribution   {"p": [0.5, 0.25, 0.25]}
    chain          {"T": [[0.9, 0.1], [0.2, 0.8]], "init": [...]}   (init optional)
    density        {"dim": 2, "re": [[...]], "im": [[...]]}          (im optional)
    quantum source {"kind": "product", "base": <density>} or
                   {"kind": "cc", "chain": <chain>, "unitary": {"re": ..., "im": ...}}

Loaders raise ValidationError with the offending field named, so the CLI
can exit 1 with a usable diagnostic.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .entropy import ProbVector
from .errors import ValidationError
from .quantum import DensityMatrix, QuantumBlockSource
from .sources import MarkovChain


def _load_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON ({exc.msg} at line {exc.lineno}, column {exc.colno})"
        ) from exc
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: top-level value must be a JSON object")
    return obj


def _field(obj: dict, name: str, where: str):
    if name not in obj:
        raise ValidationError(f"{where}: missing required field {name!r}")
    return obj[name]


def _as_vector(value, where: str, name: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: field {name!r} must be a list of numbers") from exc
    if arr.ndim != 1:
        raise ValidationError(f"{where}: field {name!r} must be a flat list of numbers")
    return arr


def _as_matrix(value, where: str, name: str) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{where}: field {name!r} must be a matrix of numbers") from exc
    if arr.ndim != 2:
        raise ValidationError(f"{where}: field {name!r} must be a list of equal-length rows")
    return arr


def load_distribution(path) -> ProbVector:
    obj = _load_json(path)
    return ProbVector(_as_vector(_field(obj, "p", f"{path}"), f"{path}", "p"))


def _chain_from_obj(obj: dict, where: str) -> MarkovChain:
    t = _as_matrix(_field(obj, "T", where), where, "T")
    init = None
    if obj.get("init") is not None:
        init = _as_vector(obj["init"], where, "init")
    return MarkovChain.from_transition(t, init)


def load_chain(path) -> MarkovChain:
    return _chain_from_obj(_load_json(path), f"{path}")


def _density_from_obj(obj: dict, where: str, sub_normalized: bool = False) -> DensityMatrix:
    dim = _field(obj, "dim", where)
    if not isinstance(dim, int) or dim < 1:
        raise ValidationError(f"{where}: field 'dim' must be a positive integer")
    re = _as_matrix(_field(obj, "re", where), where, "re")
    im = _as_matrix(obj["im"], where, "im") if obj.get("im") is not None else None
    if re.shape != (dim, dim) or (im is not None and im.shape != (dim, dim)):
        raise ValidationError(f"{where}: 're'/'im' must be {dim}x{dim} matrices")
    return DensityMatrix.from_parts(re, im, sub_normalized=sub_normalized)


def load_density(path) -> DensityMatrix:
    return _density_from_obj(_load_json(path), f"{path}")


def load_hermitian(path) -> np.ndarray:
    """General Hermitian matrix in the density file format (no trace checks)."""
    obj = _load_json(path)
    where = f"{path}"
    re = _as_matrix(_field(obj, "re", where), where, "re")
    im = _as_matrix(obj["im"], where, "im") if obj.get("im") is not None else np.zeros_like(re)
    if re.shape != im.shape:
        raise ValidationError(f"{where}: 're' and 'im' must have matching shapes")
    return re + 1j * im


def load_quantum_source(path) -> QuantumBlockSource:
    obj = _load_json(path)
    where = f"{path}"
    kind = _field(obj, "kind", where)
    if kind == "product":
        base = _field(obj, "base", where)
        if not isinstance(base, dict):
            raise ValidationError(f"{where}: field 'base' must be a density object")
        return QuantumBlockSource.product(_density_from_obj(base, f"{where}:base"))
    if kind == "cc":
        chain_obj = _field(obj, "chain", where)
        if not isinstance(chain_obj, dict):
            raise ValidationError(f"{where}: field 'chain' must be a chain object")
        chain = _chain_from_obj(chain_obj, f"{where}:chain")
        unitary = None
        if obj.get("unitary") is not None:
            u_obj = obj["unitary"]
            if not isinstance(u_obj, dict):
                raise ValidationError(f"{where}: field 'unitary' must hold 're'/'im' matrices")
            u_where = f"{where}:unitary"
            re = _as_matrix(_field(u_obj, "re", u_where), u_where, "re")
            im = (
                _as_matrix(u_obj["im"], u_where, "im")
                if u_obj.get("im") is not None
                else np.zeros_like(re)
            )
            unitary = re + 1j * im
        return QuantumBlockSource.classically_correlated(chain, unitary)
    raise ValidationError(f"{where}: field 'kind' must be 'product' or 'cc', got {kind!r}")
