"""Certify or falsify uniqueness of a state given observable expectations.

Two notions are handled.  A pure state is *uniquely determined among pure
states* (UDP) if no other pure state reproduces its expectation values, and
*uniquely determined among all states* (UDA) if no state at all does.

Positive certificates come from structure: a trivial orthocomplement means
the measurements amount to full tomography, and observable sets built by
:func:`udalab.construction.uda_observables` guarantee every perturbation
direction leaves the positive cone.  Everything else is attacked by
falsification engines: Dykstra alternating projections between the PSD cone
and the measurement-affine slab (for UDA) and projected gradient descent on
the unit sphere (for UDP).  When the engines find nothing the verdict is an
explicit ``Inconclusive``, never a silent pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .basis import expectation, gellmann_basis, traceless_coords
from .construction import ObservableSet, OperatorSubspace, orthocomplement, subspace_from_matrices
from .linalg import check_hermitian, eig_hermitian, hermitize, hs_norm, signature
from .states import check_pure, pure_density, random_density, random_pure

CERTIFIED = "CertifiedUnique"
FALSIFIED = "Falsified"
INCONCLUSIVE = "Inconclusive"


@dataclass
class FeasibilityConfig:
    """Knobs for the falsification engines."""

    max_iterations: int = 2000
    restarts: int = 20
    seed: int = 0
    constraint_tol: float = 1e-8
    distinctness_tol: float = 1e-4
    orbit_overlap: float = 0.99
    step_init: float = 1.0
    step_shrink: float = 0.5
    min_step: float = 1e-12
    gradient_tol: float = 1e-10

    def __post_init__(self) -> None:
        if self.constraint_tol <= 0 or self.distinctness_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass
class CertificateOutcome:
    """Result of a uniqueness check.

    ``witness`` is populated only for ``Falsified`` verdicts and then
    satisfies the same measurement vector within the tolerance reported in
    ``evidence`` while differing from the query state beyond the reported
    distance.
    """

    verdict: str
    witness: np.ndarray | None = None
    evidence: dict[str, Any] = field(default_factory=dict)

    @property
    def falsified(self) -> bool:
        return self.verdict == FALSIFIED


def as_observable_stack(observables) -> tuple[np.ndarray, bool, int]:
    """Normalize an ObservableSet or array stack to (stack, structural_flag, q)."""
    if isinstance(observables, ObservableSet):
        return observables.matrices, observables.complement_two_sided, observables.q
    stack = np.asarray(observables, dtype=complex)
    if stack.ndim == 2:
        stack = stack[None, :, :]
    return stack, False, 1


def measure(observables, state: np.ndarray) -> np.ndarray:
    """Expectation values of every observable in the given state."""
    stack, _, _ = as_observable_stack(observables)
    return np.array([expectation(a, state) for a in stack])


def observable_span_complement(observables, d: int) -> OperatorSubspace:
    """Orthocomplement of the observables' traceless span."""
    stack, _, _ = as_observable_stack(observables)
    traceless = [a - np.trace(a) / d * np.eye(d) for a in stack]
    span = subspace_from_matrices(np.array(traceless), d)
    return orthocomplement(span)


def projection_equivalence_check(observables, rho1: np.ndarray, rho2: np.ndarray,
                                 tol: float = 1e-8) -> bool:
    """Agreement of expectations equals agreement of span projections.

    Evaluates both predicates independently -- equal measurement vectors, and
    equal Hilbert-Schmidt projections onto the observables' span -- and
    asserts that they coincide before returning the common value.
    """
    stack, _, _ = as_observable_stack(observables)
    d = stack.shape[1]
    meas_equal = bool(np.max(np.abs(measure(stack, rho1) - measure(stack, rho2))) < tol)

    basis_ops = gellmann_basis(d)
    traceless = [a - np.trace(a) / d * np.eye(d) for a in stack]
    span = subspace_from_matrices(np.array(traceless), d)
    diff = np.asarray(rho1, dtype=complex) - np.asarray(rho2, dtype=complex)
    coords = traceless_coords(diff, basis_ops)
    proj = np.zeros_like(coords)
    for b in span.basis:
        bc = traceless_coords(b, basis_ops)
        proj += np.dot(bc, coords) * bc
    trace_gap = abs(np.trace(diff).real)
    proj_equal = bool(np.linalg.norm(proj) < tol and trace_gap < tol)

    if meas_equal != proj_equal:
        raise AssertionError(
            f"projection/measurement equivalence violated: meas={meas_equal} proj={proj_equal}")
    return meas_equal


def _project_psd(mats: np.ndarray) -> np.ndarray:
    """Batched projection onto the PSD cone (eigenvalue clipping)."""
    herm = (mats + np.conj(np.swapaxes(mats, -1, -2))) / 2
    values, vectors = np.linalg.eigh(herm)
    clipped = np.clip(values, 0.0, None)
    return np.einsum("...ab,...b,...cb->...ac", vectors, clipped, vectors.conj())


class _AffineProjector:
    """Projection onto {X Hermitian : tr X = 1, tr(A_i X) = t_i}, batched.

    ``targets`` may be a single vector or one row per batch entry.  The
    constraint Gram matrix is inverted once; each projection is a batched
    small linear solve.
    """

    def __init__(self, stack: np.ndarray, targets: np.ndarray):
        d = stack.shape[1]
        constraints = [np.eye(d, dtype=complex)] + [a for a in stack]
        self.constraints = np.array(constraints)
        targets = np.atleast_2d(np.asarray(targets, dtype=float))
        ones = np.ones((targets.shape[0], 1))
        self.rhs = np.hstack([ones, targets])
        m = len(constraints)
        gram = np.zeros((m, m))
        for i in range(m):
            for j in range(m):
                gram[i, j] = float(np.real(np.sum(self.constraints[i].conj() * self.constraints[j])))
        self.gram_pinv = np.linalg.pinv(gram, rcond=1e-13)

    def _values(self, mats: np.ndarray) -> np.ndarray:
        # Frobenius inner products <C_i, M> = tr(C_i† M), one row per batch entry
        return np.real(np.einsum("iab,...ab->...i", self.constraints.conj(), mats))

    def residual(self, mats: np.ndarray) -> np.ndarray:
        return np.linalg.norm(self._values(mats) - self.rhs, axis=-1)

    def __call__(self, mats: np.ndarray) -> np.ndarray:
        coeff = (self._values(mats) - self.rhs) @ self.gram_pinv.T
        return mats - np.einsum("...i,iab->...ab", coeff, self.constraints)


def _dykstra(starts: np.ndarray, affine: _AffineProjector, cfg: FeasibilityConfig) -> dict[str, Any]:
    """Dykstra alternating projections between the PSD cone and affine sets.

    Runs one projection stream per batch entry (entries may carry different
    affine targets).  Returns the PSD iterates, their affine residuals, the
    iteration count, and per-run counts of affine-distance increases (which
    stay at zero up to roundoff slack).
    """
    x = affine((starts + np.conj(np.swapaxes(starts, -1, -2))) / 2)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    y = x
    batch = x.shape[0]
    prev_dist = np.full(batch, np.inf)
    monotonicity_breaks = np.zeros(batch, dtype=int)
    iterations = 0
    for iterations in range(1, cfg.max_iterations + 1):
        y = _project_psd(x + p)
        p = x + p - y
        x_new = affine(y + q)
        q = y + q - x_new
        dist = np.linalg.norm((y - affine(y)).reshape(batch, -1), axis=1)
        monotonicity_breaks += dist > prev_dist + 1e-12 * np.maximum(1.0, prev_dist)
        prev_dist = dist
        change = np.linalg.norm((x_new - x).reshape(batch, -1), axis=1)
        x = x_new
        if np.all(dist < cfg.constraint_tol) and np.all(change < cfg.constraint_tol * 1e-2):
            break
    return {
        "points": y,
        "residuals": affine.residual(y),
        "iterations": iterations,
        "monotonicity_breaks": monotonicity_breaks,
    }


def _structural_certificate(psi: np.ndarray, observables, cfg: FeasibilityConfig,
                            samples_per_restart: int = 100) -> CertificateOutcome | None:
    """Certify through the orthocomplement structure when possible."""
    stack, flagged, q = as_observable_stack(observables)
    d = stack.shape[1]
    comp = observable_span_complement(stack, d)
    if comp.dim == 0:
        return CertificateOutcome(
            verdict=CERTIFIED,
            evidence={
                "route": "complete-tomography",
                "detail": "trivial orthocomplement: expectations plus trace determine the state",
            },
        )
    if not flagged:
        return None
    rng = np.random.default_rng(cfg.seed)
    total = cfg.restarts * samples_per_restart
    need = q + 1
    min_plus = d
    min_minus = d
    for _ in range(total):
        coeff = rng.standard_normal(comp.dim)
        norm = np.linalg.norm(coeff)
        if norm == 0:
            continue
        v = np.tensordot(coeff / norm, comp.basis, axes=1)
        n_plus, n_minus, _ = signature(v)
        min_plus = min(min_plus, n_plus)
        min_minus = min(min_minus, n_minus)
        if n_plus < need or n_minus < need:
            return None
    return CertificateOutcome(
        verdict=CERTIFIED,
        evidence={
            "route": "two-sided-complement",
            "detail": "every sampled complement direction has >= q+1 eigenvalues of each sign",
            "samples": total,
            "min_n_plus": min_plus,
            "min_n_minus": min_minus,
        },
    )


def uda_certify(psi: np.ndarray, observables, cfg: FeasibilityConfig | None = None,
                use_structural: bool = True) -> CertificateOutcome:
    """Decide or falsify uniqueness among all states for a pure query state.

    Structural certificates are attempted first (see module docstring); when
    unavailable, Dykstra projections are launched from ``cfg.restarts``
    random starts.  Any feasible point farther than ``distinctness_tol``
    (Frobenius) from the query projector falsifies; otherwise the verdict is
    ``Inconclusive`` with per-restart convergence evidence.
    """
    cfg = cfg or FeasibilityConfig()
    check_pure(psi)
    stack, _, _ = as_observable_stack(observables)
    d = stack.shape[1]
    if psi.shape[0] != d:
        raise ValueError("state and observable dimensions differ")

    if use_structural:
        outcome = _structural_certificate(psi, observables, cfg)
        if outcome is not None:
            return outcome

    target = measure(stack, psi)
    affine = _AffineProjector(stack, target)
    query = pure_density(psi)
    starts = np.array([random_density(d, d, cfg.seed + r) for r in range(cfg.restarts)])
    run = _dykstra(starts, affine, cfg)
    converged = run["residuals"] <= cfg.constraint_tol
    distances = np.linalg.norm((run["points"] - query).reshape(cfg.restarts, -1), axis=1)
    hits = np.nonzero(converged & (distances > cfg.distinctness_tol))[0]
    if hits.size:  # first restart wins, deterministic under the seed
        r = int(hits[0])
        return CertificateOutcome(
            verdict=FALSIFIED,
            witness=run["points"][r],
            evidence={
                "route": "dykstra",
                "restart": r,
                "residual": float(run["residuals"][r]),
                "distance": float(distances[r]),
                "iterations": run["iterations"],
                "monotonicity_breaks": int(run["monotonicity_breaks"][r]),
            },
        )
    any_converged = bool(np.any(converged))
    return CertificateOutcome(
        verdict=INCONCLUSIVE,
        evidence={
            "route": "dykstra",
            "detail": "no feasible state beyond the distinctness tolerance was found",
            "restarts": cfg.restarts,
            "max_distance": float(np.max(distances[converged])) if any_converged else 0.0,
            "worst_residual": float(np.max(run["residuals"][converged])) if any_converged else 0.0,
            "best_residual": float(np.min(run["residuals"])),
            "non_converged": int(np.sum(~converged)),
        },
    )


def _sphere_minimize(stack: np.ndarray, target: np.ndarray, start: np.ndarray,
                     cfg: FeasibilityConfig) -> tuple[np.ndarray, float]:
    """Projected gradient descent for ||A(phi) - target||^2 on the unit sphere."""
    phi = start / np.linalg.norm(start)

    def objective(vec: np.ndarray) -> float:
        gaps = np.real(np.einsum("i,kij,j->k", vec.conj(), stack, vec)) - target
        return float(np.dot(gaps, gaps))

    value = objective(phi)
    for _ in range(cfg.max_iterations):
        if value < 1e-20:
            break
        gaps = np.real(np.einsum("i,kij,j->k", phi.conj(), stack, phi)) - target
        grad = 2.0 * np.einsum("k,kij,j->i", gaps, stack, phi)
        grad = grad - np.vdot(phi, grad) * phi
        gnorm = float(np.linalg.norm(grad))
        if gnorm < cfg.gradient_tol:
            break

        def probe(step: float) -> tuple[np.ndarray, float]:
            trial = phi - step * grad
            trial = trial / np.linalg.norm(trial)
            return trial, objective(trial)

        step = cfg.step_init
        improved = False
        while step >= cfg.min_step:
            trial, trial_value = probe(step)
            if trial_value < value - 1e-4 * step * gnorm * gnorm:
                if step == cfg.step_init:
                    # flat valleys (quartic minima) need steps far above the
                    # unit scale: expand while strictly better.
                    for _ in range(60):
                        wider, wider_value = probe(step * 2)
                        if wider_value < trial_value:
                            step *= 2
                            trial, trial_value = wider, wider_value
                        else:
                            break
                # a bare Armijo step tends to overshoot the line minimum and
                # ping-pong across it: contract while strictly better.
                while step / 2 >= cfg.min_step:
                    finer, finer_value = probe(step / 2)
                    if finer_value < trial_value:
                        step /= 2
                        trial, trial_value = finer, finer_value
                    else:
                        break
                phi, value = trial, trial_value
                improved = True
                break
            step *= cfg.step_shrink
        if not improved:
            break
    return phi, value


def udp_certify(psi: np.ndarray, observables, cfg: FeasibilityConfig | None = None) -> CertificateOutcome:
    """Falsify uniqueness among pure states, or report Inconclusive.

    Minimizes the measurement mismatch over the unit sphere from random
    starts.  Candidates whose overlap with the query exceeds
    ``1 - distinctness_tol`` are the same physical state and are rejected.
    A rejected-overlap run can still end on the query's orbit; the evidence
    records the best off-orbit objective so callers can assert margins.
    This routine never certifies positively: uniqueness among pure states
    follows from :func:`uda_certify` when it certifies.
    """
    cfg = cfg or FeasibilityConfig(restarts=50)
    check_pure(psi)
    stack, _, _ = as_observable_stack(observables)
    d = stack.shape[1]
    if psi.shape[0] != d:
        raise ValueError("state and observable dimensions differ")
    target = measure(stack, psi)
    rng = np.random.default_rng(cfg.seed)
    best_off_orbit = np.inf
    on_orbit_runs = 0
    near_orbit_runs = 0
    for r in range(cfg.restarts):
        start = random_pure(d, rng)
        phi, value = _sphere_minimize(stack, target, start, cfg)
        overlap = abs(np.vdot(phi, psi)) ** 2
        if overlap > 1.0 - cfg.distinctness_tol:
            on_orbit_runs += 1
            continue
        if value < cfg.constraint_tol ** 2:
            return CertificateOutcome(
                verdict=FALSIFIED,
                witness=phi,
                evidence={
                    "route": "sphere-gradient",
                    "restart": r,
                    "objective": value,
                    "overlap": overlap,
                },
            )
        # margin bookkeeping: finals hovering near the query orbit say
        # nothing about second preimages, so they are tallied separately
        if overlap <= cfg.orbit_overlap:
            best_off_orbit = min(best_off_orbit, value)
        else:
            near_orbit_runs += 1
    return CertificateOutcome(
        verdict=INCONCLUSIVE,
        evidence={
            "route": "sphere-gradient",
            "detail": "no distinct pure state matched the measurements",
            "restarts": cfg.restarts,
            "min_off_orbit_objective": best_off_orbit,
            "on_orbit_runs": on_orbit_runs,
            "near_orbit_runs": near_orbit_runs,
        },
    )


def gap_witness(v: np.ndarray, observables) -> tuple[np.ndarray, np.ndarray]:
    """Build a pure state and a mixed twin with identical expectations.

    ``v`` must be an invertible traceless Hermitian direction orthogonal to
    the observables' span whose spectrum has, after an overall sign flip if
    needed, exactly one (nondegenerate) negative eigenvalue mu.  The pure
    state is the corresponding eigenvector phi and the twin is
    ``phi phi† - v / mu``: positive semidefinite, unit trace, and equal on
    every observable yet different from the projector.  Such a state is
    unique among pure states but not among all states.
    """
    v = np.asarray(v, dtype=complex)
    check_hermitian(v)
    d = v.shape[0]
    stack, _, _ = as_observable_stack(observables)
    norm = hs_norm(v)
    if norm == 0:
        raise ValueError("direction must be nonzero")
    v = v / norm
    scale = max(1.0, float(np.max(np.abs(v))))
    if abs(np.trace(v).real) > 1e-10 * scale:
        raise ValueError("direction must be traceless")
    proj = np.array([float(np.real(np.sum(a.conj() * v))) for a in stack])
    if np.max(np.abs(proj)) > 1e-10:
        raise ValueError("direction is not orthogonal to the observable span")
    values, vectors = eig_hermitian(v)
    if np.min(np.abs(values)) < 1e-10:
        raise ValueError("direction must be invertible")
    n_neg = int(np.sum(values < 0))
    if n_neg == d - 1:
        v = -v
        values, vectors = eig_hermitian(v)
        n_neg = int(np.sum(values < 0))
    if n_neg != 1:
        raise ValueError(
            "construction needs an isolated-sign eigenvalue: exactly one eigenvalue "
            "of one sign and d-1 of the other")
    if d > 1 and values[1] - values[0] < 1e-10:
        raise ValueError("the isolated negative eigenvalue must be nondegenerate")
    mu = values[0]
    phi = vectors[:, 0]
    rho_twin = pure_density(phi) - v / mu
    return phi, hermitize(rho_twin)


@dataclass
class GroundStateReport:
    ground_state: np.ndarray
    gap: float
    outcome: CertificateOutcome

    @property
    def passed(self) -> bool:
        return not self.outcome.falsified


def ground_state_check(coeffs: np.ndarray, observables, cfg: FeasibilityConfig | None = None,
                       use_structural: bool = True) -> GroundStateReport:
    """Verify that a nondegenerate ground state survives the UDA falsifier.

    Builds ``H = sum coeffs_i A_i``, requires a spectral gap above
    ``1e-8 * norm`` for the lowest eigenvalue, and runs :func:`uda_certify`
    on the ground state; a falsification here would be a contradiction.
    """
    stack, _, _ = as_observable_stack(observables)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != stack.shape[0]:
        raise ValueError("coefficient count does not match observable count")
    ham = np.tensordot(coeffs, stack, axes=1)
    values, vectors = eig_hermitian(ham)
    scale = max(1.0, float(np.max(np.abs(values))))
    gap = float(values[1] - values[0])
    if gap <= 1e-8 * scale:
        raise ValueError("ground state is degenerate within tolerance")
    psi = vectors[:, 0]
    obs = observables if isinstance(observables, ObservableSet) else stack
    outcome = uda_certify(psi, obs, cfg, use_structural=use_structural)
    return GroundStateReport(ground_state=psi, gap=gap, outcome=outcome)
