"""Dense Hermitian linear algebra: eigensolves, signatures, rank, orthonormalization.

Everything here works on plain complex ``numpy`` arrays.  Matrices are small
(dimension of order tens), so dense LAPACK routines are used throughout and
the rank computation favors a transparent pivoted elimination over anything
clever.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12
SIGNATURE_TOL = 1e-9


def hermitian_defect(mat: np.ndarray) -> float:
    """Max-norm distance of ``mat`` from its own conjugate transpose."""
    return float(np.max(np.abs(mat - mat.conj().T)))


def check_hermitian(mat: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    """Raise ``ValueError`` unless ``mat`` is square and Hermitian within ``tol``.

    The tolerance is relative: the defect is compared against
    ``tol * max(1, max |entry|)`` so that large, well-scaled matrices are not
    rejected for roundoff in their biggest entries.
    """
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    scale = max(1.0, float(np.max(np.abs(mat))) if mat.size else 0.0)
    if hermitian_defect(mat) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")


def hermitize(mat: np.ndarray) -> np.ndarray:
    """Return the Hermitian part ``(M + M†)/2``."""
    return (mat + mat.conj().T) / 2


def hs_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert-Schmidt inner product tr(A†B), real part.

    For Hermitian inputs the product is exactly real; the real part is taken
    to strip roundoff.
    """
    return float(np.real(np.sum(a.conj() * b)))


def hs_norm(a: np.ndarray) -> float:
    """Frobenius / Hilbert-Schmidt norm."""
    return float(np.linalg.norm(a))


def spectral_norm(mat: np.ndarray) -> float:
    """Largest singular value; for Hermitian input the largest |eigenvalue|."""
    return float(np.linalg.norm(np.asarray(mat), 2))


def eig_hermitian(mat: np.ndarray, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues ascending and eigenvectors
    in the columns of ``vectors``.  Input is validated and symmetrized before
    the solve; non-Hermitian input raises ``ValueError``.
    """
    mat = np.asarray(mat, dtype=complex)
    check_hermitian(mat, tol)
    values, vectors = np.linalg.eigh(hermitize(mat))
    return values, vectors


def signature(mat: np.ndarray, tol: float = SIGNATURE_TOL) -> tuple[int, int, int]:
    """Count eigenvalues above, below, and inside a scale-free zero band.

    The band is ``tol * max(1, spectral norm)`` wide on each side, so the
    decision does not depend on the overall scale of the matrix.

    Returns ``(n_plus, n_minus, n_zero)`` with ``n_plus + n_minus + n_zero``
    equal to the dimension.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    values, _ = eig_hermitian(mat)
    cut = tol * max(1.0, float(np.max(np.abs(values))) if values.size else 0.0)
    n_plus = int(np.sum(values > cut))
    n_minus = int(np.sum(values < -cut))
    return n_plus, n_minus, len(values) - n_plus - n_minus


def interlacing_check(mat: np.ndarray, rows, slack: float = 1e-9) -> bool:
    """Check Cauchy interlacing of a principal submatrix against the full matrix.

    ``rows`` selects the principal submatrix (same row and column indices).
    With ascending eigenvalues w (full, size d) and s (submatrix, size r) the
    test is ``w[k] <= s[k] <= w[k + d - r]`` for all k, inside a slack scaled
    by ``max(1, spectral norm)``.
    """
    rows = sorted(set(int(r) for r in rows))
    if not rows:
        raise ValueError("rows must be a non-empty index subset")
    mat = np.asarray(mat, dtype=complex)
    d = mat.shape[0]
    if rows[0] < 0 or rows[-1] >= d:
        raise ValueError("row indices out of range")
    full, _ = eig_hermitian(mat)
    sub, _ = eig_hermitian(mat[np.ix_(rows, rows)])
    r = len(rows)
    eps = slack * max(1.0, float(np.max(np.abs(full))))
    for k in range(r):
        if not (full[k] - eps <= sub[k] <= full[k + d - r] + eps):
            return False
    return True


def rank_row_reduction(mat: np.ndarray, pivot_tol: float = 1e-10) -> int:
    """Numerical rank by Gaussian elimination with complete pivoting.

    Columns are normalized to unit length first, so the pivot threshold is
    relative to the natural scale of the system regardless of how the caller
    scaled individual columns.  A pivot is accepted while the largest entry of
    the remaining block exceeds ``pivot_tol``.
    """
    work = np.array(mat, dtype=complex)
    if work.size == 0:
        return 0
    norms = np.linalg.norm(work, axis=0)
    nonzero = norms > 0
    work[:, nonzero] = work[:, nonzero] / norms[nonzero]
    m, n = work.shape
    rank = 0
    while rank < min(m, n):
        block = np.abs(work[rank:, rank:])
        i, j = np.unravel_index(np.argmax(block), block.shape)
        if block[i, j] <= pivot_tol:
            break
        i += rank
        j += rank
        work[[rank, i], :] = work[[i, rank], :]
        work[:, [rank, j]] = work[:, [j, rank]]
        pivot_row = work[rank, rank:] / work[rank, rank]
        work[rank + 1:, rank:] -= np.outer(work[rank + 1:, rank], pivot_row)
        rank += 1
    return rank


def mgs_extend(base: np.ndarray | None, candidates: np.ndarray, drop_tol: float = 1e-12) -> np.ndarray:
    """Extend an orthonormal set by modified Gram-Schmidt.

    ``base`` rows (may be ``None`` or empty) are assumed orthonormal and are
    not re-emitted.  Each candidate row is orthogonalized twice (one
    re-orthogonalization pass for numerical hygiene) and kept only if the
    residual exceeds ``drop_tol`` relative to the candidate's norm.

    Returns the newly added orthonormal rows.
    """
    candidates = np.atleast_2d(np.asarray(candidates))
    have: list[np.ndarray] = [] if base is None else [row for row in np.atleast_2d(base)]
    added: list[np.ndarray] = []
    for vec in candidates:
        scale = np.linalg.norm(vec)
        if scale == 0:
            continue
        w = vec.astype(complex if np.iscomplexobj(vec) else float).copy()
        for _ in range(2):
            for row in have:
                w = w - np.vdot(row, w) * row
        res = np.linalg.norm(w)
        if res > drop_tol * max(1.0, scale):
            w = w / res
            have.append(w)
            added.append(w)
    if not added:
        return np.zeros((0, candidates.shape[1]), dtype=candidates.dtype)
    return np.array(added)
