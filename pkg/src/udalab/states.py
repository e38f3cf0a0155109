"""State validation, seeded random states, and partial traces."""

from __future__ import annotations

import numpy as np

from .linalg import check_hermitian

PURE_NORM_TOL = 1e-12
DENSITY_EIG_TOL = 1e-10
DENSITY_TRACE_TOL = 1e-12


def check_pure(psi: np.ndarray, tol: float = PURE_NORM_TOL) -> None:
    """Raise unless ``psi`` is a unit vector within ``tol``."""
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise ValueError("pure state must be a 1-D amplitude vector")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError("pure state is not normalized")


def check_density(rho: np.ndarray, eig_tol: float = DENSITY_EIG_TOL,
                  trace_tol: float = DENSITY_TRACE_TOL) -> None:
    """Raise unless ``rho`` is Hermitian, unit trace, and PSD within tolerance."""
    rho = np.asarray(rho, dtype=complex)
    check_hermitian(rho)
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise ValueError("density matrix trace differs from 1")
    if float(np.linalg.eigvalsh(rho)[0]) < -eig_tol:
        raise ValueError("density matrix has a negative eigenvalue")


def pure_density(psi: np.ndarray) -> np.ndarray:
    """Rank-one projector |psi><psi|."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def random_pure(d: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """Normalized complex Gaussian vector; deterministic per seed."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return vec / np.linalg.norm(vec)


def random_density(d: int, rank: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """Random density matrix ``G G† / tr(G G†)`` for a d-by-rank Gaussian G.

    The result has the requested rank with probability one and is
    deterministic per seed.
    """
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in 1..{d}, got {rank}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def partial_trace(rho: np.ndarray, dims, keep) -> np.ndarray:
    """Partial trace of a multipartite density matrix.

    ``dims`` lists the subsystem dimensions (their product must equal the
    matrix size) and ``keep`` the subsystem indices to retain, in increasing
    order of the original layout.
    """
    dims = [int(x) for x in dims]
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep must select at least one subsystem")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise ValueError("keep indices out of range")
    rho = np.asarray(rho, dtype=complex)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise ValueError(f"matrix shape {rho.shape} does not match dims product {total}")
    n = len(dims)
    tensor = rho.reshape(dims + dims)
    row_ids = list(range(n))
    col_ids = [i if i not in keep else n + i for i in range(n)]
    out_ids = [i for i in keep] + [n + i for i in keep]
    reduced = np.einsum(tensor, row_ids + col_ids, out_ids)
    kept = int(np.prod([dims[k] for k in keep]))
    return reduced.reshape(kept, kept)
