"""Orthogonal Hermitian operator bases and Bloch-vector coordinates.

The basis built here consists of the identity (scaled to ``sqrt(d-1) * I``)
followed by the generalized Gell-Mann matrices scaled by
``sqrt(d*(d-1)/2)``, so that every pair satisfies
``tr(b_i b_j) = d*(d-1) * delta_ij``.  With that normalization a density
matrix decomposes as ``rho = (I + r . b[1:]) / d`` with a real coefficient
vector ``r`` of unit length exactly when ``rho`` is pure.

Element order is fixed so serialized output is stable: symmetric
off-diagonal pairs first (lexicographic in (j, k)), then the antisymmetric
pairs, then the diagonal matrices.
"""

from __future__ import annotations

import numpy as np

from .linalg import check_hermitian

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def gellmann_basis(d: int) -> np.ndarray:
    """Return the scaled Hermitian basis as an array of shape (d*d, d, d).

    ``basis[0]`` is ``sqrt(d-1) * I``; the remaining ``d*d - 1`` elements are
    traceless and mutually orthogonal with ``tr(b_i b_j) = d*(d-1) delta_ij``.
    For d=2 the traceless part is exactly the Pauli triple (X, Y, Z).
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    scale = np.sqrt(d * (d - 1) / 2.0)
    out = np.zeros((d * d, d, d), dtype=complex)
    out[0] = np.sqrt(d - 1) * np.eye(d)
    idx = 1
    for j in range(d):
        for k in range(j + 1, d):
            out[idx, j, k] = scale
            out[idx, k, j] = scale
            idx += 1
    for j in range(d):
        for k in range(j + 1, d):
            out[idx, j, k] = -1j * scale
            out[idx, k, j] = 1j * scale
            idx += 1
    for level in range(1, d):
        coeff = scale * np.sqrt(2.0 / (level * (level + 1)))
        diag = np.zeros(d)
        diag[:level] = 1.0
        diag[level] = -level
        out[idx] = coeff * np.diag(diag)
        idx += 1
    return out


def bloch_decompose(rho: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    """Coefficient vector r with ``rho = (I + r . basis[1:]) / d``.

    Components are ``r_i = tr(rho basis[i]) / (d - 1)``.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    if basis is None:
        basis = gellmann_basis(d)
    if basis.shape[1] != d:
        raise ValueError("basis dimension does not match the state")
    traces = np.einsum("ab,iba->i", rho, basis[1:])
    return np.real(traces) / (d - 1)


def bloch_compose(r: np.ndarray, basis: np.ndarray | None = None) -> np.ndarray:
    """Hermitian matrix ``(I + r . basis[1:]) / d`` for a real vector ``r``.

    The result always has trace one but is not necessarily positive
    semidefinite; callers that need a state must validate separately.
    """
    r = np.asarray(r, dtype=float)
    if basis is None:
        d = int(round(np.sqrt(r.size + 1)))
        if d * d - 1 != r.size:
            raise ValueError(f"coefficient vector of length {r.size} does not fit any dimension")
        basis = gellmann_basis(d)
    d = basis.shape[1]
    if r.shape != (d * d - 1,):
        raise ValueError(f"expected {d * d - 1} coefficients, got {r.size}")
    return (np.eye(d) + np.tensordot(r, basis[1:], axes=1)) / d


def expectation(observable: np.ndarray, state: np.ndarray) -> float:
    """Expectation value of a Hermitian observable in a state.

    ``state`` may be a pure-state amplitude vector or a density matrix; the
    value is ``<psi|A|psi>`` or ``tr(rho A)`` accordingly.
    """
    observable = np.asarray(observable, dtype=complex)
    check_hermitian(observable)
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if state.shape[0] != observable.shape[0]:
            raise ValueError("state and observable dimensions differ")
        return float(np.real(np.vdot(state, observable @ state)))
    if state.shape != observable.shape:
        raise ValueError("state and observable dimensions differ")
    return float(np.real(np.trace(state @ observable)))


def traceless_coords(mat: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real coordinates of the traceless part of ``mat`` in the unit-normalized basis.

    The returned vector has length d*d - 1 and is computed against
    ``basis[1:] / sqrt(d*(d-1))``, which is orthonormal for the
    Hilbert-Schmidt inner product.  Euclidean geometry on these coordinates
    therefore matches operator geometry exactly.
    """
    d = basis.shape[1]
    norm = np.sqrt(d * (d - 1))
    traces = np.einsum("ab,iba->i", np.asarray(mat, dtype=complex), basis[1:])
    return np.real(traces) / norm


def traceless_from_coords(coords: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Inverse of :func:`traceless_coords` (traceless Hermitian matrix)."""
    d = basis.shape[1]
    norm = np.sqrt(d * (d - 1))
    return np.tensordot(np.asarray(coords, dtype=float), basis[1:], axes=1) / norm
