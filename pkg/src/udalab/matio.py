"""JSON interchange for matrices, vectors, and reports.

Matrix schema: ``{"d": n, "entries": [[re, im], ...]}`` with the entries in
row-major order.  A file with exactly ``n`` entry pairs is an amplitude
vector; ``n*n`` pairs make a matrix.  Observable files carry a list of
row-major entry lists under ``"matrices"``; tripartite tensors carry
``"dims"`` plus flattened entries in (i, j, k) order.

Serialization is byte-deterministic: floats are rendered with 17 significant
digits, dictionaries keep insertion order, and no whitespace choices are left
to a library.
"""

from __future__ import annotations

import json
from dataclasses import is_dataclass, asdict
from typing import Any

import numpy as np


def format_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def dumps(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON with fixed float formatting."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent)
    if is_dataclass(obj) and not isinstance(obj, type):
        return dumps(asdict(obj), indent)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 2)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(v, (int, float, np.integer, np.floating)) for v in seq)
        if flat:
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        items = [f"{inner}{dumps(v, indent + 2)}" for v in seq]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def write_json(path: str, obj: Any) -> None:
    with open(path, "w") as handle:
        handle.write(dumps(obj))
        handle.write("\n")


def _entries(mat: np.ndarray) -> list[list[float]]:
    flat = np.asarray(mat, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def matrix_to_json(mat: np.ndarray) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {"d": int(mat.shape[0]), "entries": _entries(mat)}


def vector_to_json(vec: np.ndarray) -> dict:
    vec = np.asarray(vec, dtype=complex)
    return {"d": int(vec.shape[0]), "entries": _entries(vec)}


def observables_to_json(stack: np.ndarray) -> dict:
    stack = np.asarray(stack, dtype=complex)
    return {"d": int(stack.shape[1]), "matrices": [_entries(m) for m in stack]}


def tensor_to_json(dims, tensor: np.ndarray) -> dict:
    return {"dims": [int(x) for x in dims], "entries": _entries(np.asarray(tensor))}


def _from_entries(entries, shape) -> np.ndarray:
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(shape)


def load_json(path: str) -> Any:
    with open(path) as handle:
        return json.load(handle)


def parse_matrix_or_vector(doc: dict) -> np.ndarray:
    """Parse the shared schema; returns a (d,) vector or a (d, d) matrix."""
    d = int(doc["d"])
    entries = doc["entries"]
    if len(entries) == d:
        return _from_entries(entries, (d,))
    if len(entries) == d * d:
        return _from_entries(entries, (d, d))
    raise ValueError(f"expected {d} or {d * d} entries, got {len(entries)}")


def load_matrix(path: str) -> np.ndarray:
    out = parse_matrix_or_vector(load_json(path))
    if out.ndim != 2:
        raise ValueError(f"{path} holds a vector, expected a matrix")
    return out


def load_vector(path: str) -> np.ndarray:
    out = parse_matrix_or_vector(load_json(path))
    if out.ndim != 1:
        raise ValueError(f"{path} holds a matrix, expected a vector")
    return out


def load_observables(path: str) -> np.ndarray:
    doc = load_json(path)
    d = int(doc["d"])
    mats = [_from_entries(entries, (d, d)) for entries in doc["matrices"]]
    return np.array(mats)


def load_tensor(path: str) -> tuple[tuple[int, ...], np.ndarray]:
    doc = load_json(path)
    dims = tuple(int(x) for x in doc["dims"])
    tensor = _from_entries(doc["entries"], dims)
    return dims, tensor
