"""Finite symmetry groups of the state space and the certificates they yield.

A symmetry here is conjugation by a unitary, optionally composed with the
computational-basis transpose.  Averaging the induced superoperators over a
finite closed group gives the orthogonal projection onto the fixed operator
subspace; when that subspace is the span of the measured observables, a pure
state unique among pure states is automatically unique among all states.

The workhorse certificate checks whether the complex span of the observables
(with identity adjoined) is closed under products: a *-subalgebra is the
fixed-point set of conjugation by the unitaries of its commutant, so the
symmetry argument applies.  For qubits a reflection through the observable
span always exists, so the implication holds unconditionally there.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Any

import numpy as np

from .basis import gellmann_basis
from .certify import CertificateOutcome, FALSIFIED, FeasibilityConfig, measure, uda_certify
from .linalg import check_hermitian, hermitize
from .states import check_density, pure_density, random_pure


@dataclass(frozen=True)
class SymmetryElement:
    """State-space symmetry: transpose first (optionally), then conjugate by U."""

    unitary: np.ndarray
    transpose_flag: bool = False

    def __post_init__(self) -> None:
        u = np.asarray(self.unitary)
        defect = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if defect > 1e-10:
            raise ValueError("matrix is not unitary within tolerance")

    @property
    def d(self) -> int:
        return self.unitary.shape[0]

    def apply(self, mat: np.ndarray) -> np.ndarray:
        mat = np.asarray(mat, dtype=complex)
        if self.transpose_flag:
            mat = mat.T
        return self.unitary @ mat @ self.unitary.conj().T

    def compose(self, other: "SymmetryElement") -> "SymmetryElement":
        # self after other; transpose flags xor, with the inner unitary
        # conjugated when it crosses a transpose.
        inner = other.unitary.conj() if self.transpose_flag else other.unitary
        return SymmetryElement(unitary=self.unitary @ inner,
                               transpose_flag=self.transpose_flag != other.transpose_flag)

    def inverse(self) -> "SymmetryElement":
        if self.transpose_flag:
            return SymmetryElement(unitary=self.unitary.T, transpose_flag=True)
        return SymmetryElement(unitary=self.unitary.conj().T, transpose_flag=False)


def _projectively_equal(a: SymmetryElement, b: SymmetryElement, tol: float = 1e-8) -> bool:
    """Equality up to a global phase on the unitary (phases act trivially on states)."""
    if a.transpose_flag != b.transpose_flag:
        return False
    overlap = np.trace(a.unitary.conj().T @ b.unitary) / a.d
    if abs(overlap) < 1e-12:
        return False
    phase = overlap / abs(overlap)
    return bool(np.max(np.abs(a.unitary * phase - b.unitary)) < tol)


@dataclass(frozen=True)
class SymmetryGroup:
    """Finite list of symmetries, verified closed under composition and inverse."""

    elements: tuple[SymmetryElement, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("group needs at least the identity")
        for g in self.elements:
            if not any(_projectively_equal(g.inverse(), h) for h in self.elements):
                raise ValueError("element list is not closed under inverses")
        for g in self.elements:
            for h in self.elements:
                if not any(_projectively_equal(g.compose(h), e) for e in self.elements):
                    raise ValueError("element list is not closed under composition")

    @property
    def d(self) -> int:
        return self.elements[0].d

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def generate(cls, generators, max_size: int = 512) -> "SymmetryGroup":
        d = generators[0].d
        elements = [SymmetryElement(unitary=np.eye(d, dtype=complex))]
        frontier = list(generators)
        while frontier:
            g = frontier.pop()
            if any(_projectively_equal(g, h) for h in elements):
                continue
            elements.append(g)
            if len(elements) > max_size:
                raise ValueError("group generation exceeded the size cap")
            for h in list(elements):
                frontier.append(g.compose(h))
                frontier.append(h.compose(g))
        return cls(elements=tuple(elements))


def apply_symmetry(g: SymmetryElement, rho: np.ndarray) -> np.ndarray:
    """Image of a density matrix; positivity and trace are preserved."""
    check_density(rho)
    return hermitize(g.apply(rho))


def _orthonormal_hermitian_basis(d: int) -> np.ndarray:
    # every element has squared Hilbert-Schmidt norm d(d-1), identity included
    return gellmann_basis(d) / np.sqrt(d * (d - 1))


def superoperator_matrix(g: SymmetryElement) -> np.ndarray:
    """Real action matrix of the symmetry on Hermitian space.

    Computed in an orthonormal Hermitian basis, so orthogonality statements
    about the superoperator are plain matrix statements.
    """
    basis = _orthonormal_hermitian_basis(g.d)
    images = np.array([g.apply(b) for b in basis])
    return np.real(np.einsum("iab,jab->ij", basis.conj(), images))


def average_projection(group: SymmetryGroup) -> np.ndarray:
    """Group average of the action matrices; the projection onto the fixed space.

    Postconditions asserted: idempotent, symmetric (self-adjoint for the
    Hilbert-Schmidt inner product), and absorbed by every group element on
    both sides.
    """
    actions = [superoperator_matrix(g) for g in group.elements]
    proj = np.mean(actions, axis=0)
    if np.max(np.abs(proj @ proj - proj)) > 1e-10:
        raise AssertionError("group average is not idempotent")
    if np.max(np.abs(proj - proj.T)) > 1e-10:
        raise AssertionError("group average is not self-adjoint")
    for act in actions:
        if np.max(np.abs(act @ proj - proj)) > 1e-10 or np.max(np.abs(proj @ act - proj)) > 1e-10:
            raise AssertionError("group average is not absorbed by an element")
    return proj


def fixed_point_space(group: SymmetryGroup, eig_tol: float = 1e-8) -> np.ndarray:
    """Orthonormal Hermitian basis of the fixed operator subspace.

    Eigenvectors of the averaging projection with eigenvalue within
    ``eig_tol`` of one, mapped back to matrices; the identity direction is
    always present.
    """
    proj = average_projection(group)
    values, vectors = np.linalg.eigh((proj + proj.T) / 2)
    basis = _orthonormal_hermitian_basis(group.d)
    keep = np.abs(values - 1.0) < eig_tol
    return np.array([np.tensordot(vectors[:, k], basis, axes=1)
                     for k in np.nonzero(keep)[0]])


def convex_hull_residual(group: SymmetryGroup, proj: np.ndarray | None = None) -> float:
    """Distance of the averaging projection from the hull of the group actions.

    Solved as a least-squares over element weights; if the unconstrained
    solution strays negative the uniform weights (always feasible) are used.
    """
    actions = np.array([superoperator_matrix(g) for g in group.elements])
    if proj is None:
        proj = average_projection(group)
    flat = actions.reshape(len(group), -1).T
    weights, *_ = np.linalg.lstsq(flat, proj.reshape(-1), rcond=None)
    if np.any(weights < -1e-10):
        weights = np.full(len(group), 1.0 / len(group))
    return float(np.linalg.norm(flat @ weights - proj.reshape(-1)))


def _complex_orthobasis(mats, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (as matrices) of the complex span of ``mats``."""
    stack = np.array([np.asarray(m, dtype=complex) for m in mats])
    d = stack.shape[1]
    flat = stack.reshape(len(stack), d * d)
    # SVD row space; singular vectors with non-negligible singular values
    _, svals, vh = np.linalg.svd(flat, full_matrices=False)
    keep = svals > tol * max(1.0, svals[0] if len(svals) else 1.0)
    return vh[keep].reshape(-1, d, d)


def _project_onto_span(mat: np.ndarray, basis: np.ndarray) -> np.ndarray:
    flat = mat.reshape(-1)
    out = np.zeros_like(flat)
    for b in basis:
        bf = b.reshape(-1)
        out = out + np.vdot(bf, flat) * bf
    return out.reshape(mat.shape)


def is_star_algebra(observables, tol: float = 1e-8) -> bool:
    """Is the complex span of the observables (with identity) product-closed?

    Hermitian spans are automatically adjoint-closed, so only products are
    probed: every pairwise product of basis elements must project back into
    the span with small residual.
    """
    mats = [np.asarray(m, dtype=complex) for m in _as_matrix_list(observables)]
    d = mats[0].shape[0]
    basis = _complex_orthobasis([np.eye(d, dtype=complex)] + mats)
    for a in basis:
        for b in basis:
            prod = a @ b
            residual = np.linalg.norm(prod - _project_onto_span(prod, basis))
            if residual > tol * max(1.0, np.linalg.norm(prod)):
                return False
    return True


def _as_matrix_list(observables) -> list[np.ndarray]:
    from .certify import as_observable_stack

    stack, _, _ = as_observable_stack(observables)
    return [m for m in stack]


def commutant(observables, tol: float = 1e-10) -> np.ndarray:
    """Basis of the matrices commuting with every observable.

    The commutator map is stacked into one linear operator on vectorized
    matrices and its null space extracted by SVD; the complex dimension is
    the length of the returned stack.
    """
    mats = _as_matrix_list(observables)
    d = mats[0].shape[0]
    eye = np.eye(d)
    blocks = [np.kron(a, eye) - np.kron(eye, a.T) for a in mats]
    stacked = np.vstack(blocks) if blocks else np.zeros((1, d * d))
    _, svals, vh = np.linalg.svd(stacked)
    svals = np.concatenate([svals, np.zeros(vh.shape[0] - len(svals))])
    scale = max(1.0, svals[0] if len(svals) else 1.0)
    null_rows = vh[svals < tol * scale]
    return null_rows.reshape(-1, d, d)


def generated_algebra(observables, tol: float = 1e-10, max_rounds: int = 32) -> np.ndarray:
    """Smallest product-closed complex span containing the observables and identity.

    Iterates span <- span + span*span until the dimension stabilizes.
    """
    mats = _as_matrix_list(observables)
    d = mats[0].shape[0]
    basis = _complex_orthobasis([np.eye(d, dtype=complex)] + mats, tol)
    for _ in range(max_rounds):
        products = [a @ b for a in basis for b in basis]
        new_basis = _complex_orthobasis(list(basis) + products, tol)
        if new_basis.shape[0] == basis.shape[0]:
            return new_basis
        basis = new_basis
    raise RuntimeError("algebra generation failed to stabilize")


def subspace_equal(stack_a: np.ndarray, stack_b: np.ndarray, tol: float = 1e-8) -> bool:
    """Mutual-projection equality of two complex matrix spans."""
    basis_a = _complex_orthobasis(stack_a)
    basis_b = _complex_orthobasis(stack_b)
    if basis_a.shape[0] != basis_b.shape[0]:
        return False
    for a in basis_a:
        if np.linalg.norm(a - _project_onto_span(a, basis_b)) > tol:
            return False
    for b in basis_b:
        if np.linalg.norm(b - _project_onto_span(b, basis_a)) > tol:
            return False
    return True


def bicommutant_check(observables, tol: float = 1e-8) -> bool:
    """Double commutant equals the generated algebra (with identity adjoined)."""
    first = commutant(observables)
    second = commutant(first)
    algebra = generated_algebra(observables)
    return subspace_equal(second, algebra, tol)


@dataclass
class SymmetryVerdict:
    certified: bool
    route: str | None
    evidence: dict[str, Any] = field(default_factory=dict)


def udp_implies_uda_via_symmetry(observables) -> SymmetryVerdict:
    """Certificate that uniqueness among pure states extends to all states.

    Certification happens through the *-subalgebra route (the commutant's
    unitaries provide the symmetry group) or, for qubits, unconditionally
    through the reflection construction.  Absence of a certificate is not a
    refutation.
    """
    mats = _as_matrix_list(observables)
    d = mats[0].shape[0]
    if is_star_algebra(mats):
        comm = commutant([np.eye(d, dtype=complex)] + mats)
        return SymmetryVerdict(
            certified=True,
            route="star-subalgebra",
            evidence={
                "commutant_dim": int(comm.shape[0]),
                "detail": "span is product-closed; conjugations by commutant unitaries fix it",
            },
        )
    if d == 2:
        return SymmetryVerdict(
            certified=True,
            route="qubit-reflection",
            evidence={"detail": "reflection through the observable span fixes exactly its states"},
        )
    return SymmetryVerdict(certified=False, route=None,
                           evidence={"detail": "no certificate from this module"})


def _partitions(n: int, cap: int | None = None):
    cap = n if cap is None else cap
    if n == 0:
        yield ()
        return
    for first in range(min(n, cap), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def realizable_fixed_dims(d: int) -> list[int]:
    """Possible spans of observable sets fixed by some state-space symmetry.

    Union of every k <= d (repeated-diagonal commutative algebras) and every
    sum of squared block sizes over partitions of d (block-diagonal
    algebras), sorted ascending.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    dims = set(range(1, d + 1))
    for part in _partitions(d):
        dims.add(int(sum(k * k for k in part)))
    return sorted(dims)


# Named example groups (used by tests and the acceptance suite).

def transpose_reflection_group(d: int) -> SymmetryGroup:
    """Order-two group {identity, transpose}; fixes the real symmetric matrices.

    On the qubit Bloch ball the transpose flips the y component, so this is
    the reflection through the xz-plane.
    """
    eye = np.eye(d, dtype=complex)
    return SymmetryGroup(elements=(
        SymmetryElement(unitary=eye),
        SymmetryElement(unitary=eye, transpose_flag=True),
    ))


def xy_reflection_group() -> SymmetryGroup:
    """Qubit reflection through the xy-plane: transpose composed with an x-flip.

    The bare transpose sends Bloch (x, y, z) to (x, -y, z); conjugating by
    Pauli X afterwards restores y and flips z, fixing exactly span{I, X, Y}.
    """
    from .basis import PAULI_X

    return SymmetryGroup(elements=(
        SymmetryElement(unitary=np.eye(2, dtype=complex)),
        SymmetryElement(unitary=PAULI_X, transpose_flag=True),
    ))


def sign_flip_group(pattern: np.ndarray) -> SymmetryGroup:
    """Order-two group generated by conjugation with a diagonal sign pattern."""
    signs = np.asarray(pattern, dtype=float)
    return SymmetryGroup.generate([SymmetryElement(unitary=np.diag(signs).astype(complex))])


def cyclic_diagonal_group(d: int) -> SymmetryGroup:
    """Cyclic group of the root-of-unity diagonal; its average pinches to diagonals."""
    omega = np.exp(2j * np.pi / d)
    gen = np.diag(omega ** np.arange(d))
    return SymmetryGroup.generate([SymmetryElement(unitary=gen)])


def permutation_conjugation_group(d: int) -> SymmetryGroup:
    """All permutation-matrix conjugations of a d-level system."""
    elements = []
    for perm in permutations(range(d)):
        mat = np.zeros((d, d), dtype=complex)
        for i, p in enumerate(perm):
            mat[p, i] = 1.0
        elements.append(SymmetryElement(unitary=mat))
    return SymmetryGroup(elements=tuple(elements))


def pauli_conjugation_group() -> SymmetryGroup:
    """Conjugations by I, X, Y, Z on a qubit (projectively closed)."""
    from .basis import PAULI_X, PAULI_Y, PAULI_Z

    return SymmetryGroup(elements=tuple(
        SymmetryElement(unitary=u) for u in
        (np.eye(2, dtype=complex), PAULI_X, PAULI_Y, PAULI_Z)))


def cyclic_shift_group(d: int) -> SymmetryGroup:
    """Conjugations by powers of the cyclic shift; fixes the circulant matrices."""
    shift = np.zeros((d, d), dtype=complex)
    for i in range(d):
        shift[(i + 1) % d, i] = 1.0
    return SymmetryGroup.generate([SymmetryElement(unitary=shift)])


@dataclass
class QubitClassification:
    """Fixed-set geometry of a qubit observable span plus per-state outcomes."""

    span_dim: int
    label: str
    on_fixed_outcomes: list[CertificateOutcome]
    off_fixed_outcomes: list[CertificateOutcome]

    @property
    def consistent(self) -> bool:
        on_ok = all(not o.falsified for o in self.on_fixed_outcomes)
        off_ok = all(o.falsified for o in self.off_fixed_outcomes)
        return on_ok and off_ok


def _qubit_bloch(mat: np.ndarray) -> np.ndarray:
    from .basis import PAULI_X, PAULI_Y, PAULI_Z

    return np.array([float(np.real(np.trace(mat @ p))) / 2
                     for p in (PAULI_X, PAULI_Y, PAULI_Z)])


def _bloch_state(r: np.ndarray) -> np.ndarray:
    from .basis import PAULI_X, PAULI_Y, PAULI_Z

    rho = (np.eye(2, dtype=complex) + r[0] * PAULI_X + r[1] * PAULI_Y + r[2] * PAULI_Z) / 2
    values, vectors = np.linalg.eigh(rho)
    return vectors[:, -1]


def qubit_classification(observables, samples: int = 20, seed: int = 0,
                         cfg: FeasibilityConfig | None = None) -> QubitClassification:
    """Classify which qubit pure states the observables pin down.

    The traceless parts of the observables span a subspace of the Bloch ball
    of dimension 0 to 3.  States on the intersection of that span with the
    sphere survive the UDA falsifier; states off it are falsified for UDP by
    their reflection through the span, an explicitly constructed partner with
    identical expectations.
    """
    mats = _as_matrix_list(observables)
    d = mats[0].shape[0]
    if d != 2:
        raise ValueError("classification applies to qubits only")
    for m in mats:
        check_hermitian(m)
    cfg = cfg or FeasibilityConfig(restarts=5, max_iterations=1500)
    directions = np.array([_qubit_bloch(m) for m in mats])
    svals = np.linalg.svd(directions, compute_uv=False) if directions.size else np.zeros(1)
    span_dim = int(np.sum(svals > 1e-10 * max(1.0, svals[0] if len(svals) else 1.0)))
    labels = {0: "center", 1: "diameter", 2: "disk-section", 3: "full-ball"}

    # orthonormal frame of the span
    if span_dim:
        _, _, vh = np.linalg.svd(directions)
        frame = vh[:span_dim]
    else:
        frame = np.zeros((0, 3))

    rng = np.random.default_rng(seed)
    stack = np.array(mats)
    on_outcomes: list[CertificateOutcome] = []
    off_outcomes: list[CertificateOutcome] = []

    for _ in range(samples):
        if span_dim == 0:
            psi = None
        else:
            coeff = rng.standard_normal(span_dim)
            direction = coeff @ frame
            direction /= np.linalg.norm(direction)
            psi = _bloch_state(direction)
        if psi is not None:
            on_outcomes.append(uda_certify(psi, stack, cfg, use_structural=(span_dim == 3)))
        if span_dim == 3:
            continue  # nothing lies off a full span

        # off-span state with a safely separated mirror partner
        while True:
            psi = random_pure(2, rng)
            r = _qubit_bloch(pure_density(psi))
            r_proj = frame.T @ (frame @ r) if span_dim else np.zeros(3)
            if np.linalg.norm(r - r_proj) > 0.2:
                break
        mirror = _bloch_state(2 * r_proj - r)
        gap = float(np.max(np.abs(measure(stack, mirror) - measure(stack, psi))))
        distance = float(np.linalg.norm(pure_density(mirror) - pure_density(psi)))
        if gap > 1e-9 or distance < cfg.distinctness_tol:
            raise AssertionError("reflection partner failed to falsify")
        off_outcomes.append(CertificateOutcome(
            verdict=FALSIFIED,
            witness=mirror,
            evidence={"route": "bloch-reflection", "measurement_gap": gap, "distance": distance},
        ))

    return QubitClassification(
        span_dim=span_dim,
        label=labels[span_dim],
        on_fixed_outcomes=on_outcomes,
        off_fixed_outcomes=off_outcomes,
    )
