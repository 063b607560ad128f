"""Braiding as imaginary-time ground-space projections, plus the dense gates.

The braid cycles the three-site chain through the stage Hamiltonians
0 -> 1 -> 2 -> 0.  Each leg is an imaginary-time evolution exp(-H t) which,
for large t, projects onto the ground space of the new stage, so the whole
cycle is a projector product acting inside the 27-dimensional spin space.
Restricted to the threefold-degenerate encoded space the cycle acts as the
unitary exp(-i*pi/6) * diag(1, 1, w): a Clifford gate with relative Berry
phases (0, 0, 2*pi/3).

Because the amplitudes produced by each projection depend on a single clock
index, the same evolution collapses onto three modes ("dense" pipeline):
an identity phase gate, one basis rotation and one phase gate, whose product
is the braid matrix in the operational basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .chain import ChainSpec, braiding_hamiltonian
from .tensor import (OMEGA, OMEGA_BAR, cyclic_eigenprojector, dag,
                     fourier_matrix, is_hermitian, normalize,
                     trace_distance_pure)

_SPEC = ChainSpec(n=3, L=3)

#: Squared-norm retained by one full projective cycle on any encoded state.
CYCLE_RETENTION = 1.0 / 27.0


def chain_basis_states() -> np.ndarray:
    """The three encoded chain states as rows of a (3, 27) array.

    Row l is (|000> + w^l |111> + w^2l |222>)/sqrt(3) in the per-site clock
    eigenbasis; together they span the ground space of the stage-0
    Hamiltonian.
    """
    out = np.zeros((3, 27), dtype=complex)
    for l in range(3):
        for k in range(3):
            out[l, k * 9 + k * 3 + k] = OMEGA ** (l * k) / np.sqrt(3)
    return out


_PSI = chain_basis_states()


def encode_logical(coeffs) -> np.ndarray:
    """Map three logical amplitudes onto the encoded 27-dimensional state."""
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (3,):
        raise ValueError("encode_logical expects exactly three amplitudes")
    return normalize(_PSI.T @ coeffs)


def decode_logical(state: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """Project a 27-dim state onto the encoded span.

    Returns the renormalized logical amplitudes and the squared norm lying
    outside the span (leakage).  A state with no support on the span at all
    cannot be decoded.
    """
    coeffs = _PSI.conj() @ state
    weight = float(np.vdot(coeffs, coeffs).real)
    total = float(np.vdot(state, state).real)
    leakage = max(0.0, total - weight)
    if weight <= tol * max(total, 1.0):
        raise ValueError("state has fully leaked out of the encoded span")
    return coeffs / np.sqrt(weight), leakage


def decode_density(rho: np.ndarray, tol: float = 1e-12) -> tuple[np.ndarray, float]:
    """Ground-space block of a 27-dim density matrix, renormalized.

    Returns the 3x3 logical density matrix and the weight lost outside the
    encoded span.  Raises if the block has (numerically) zero trace.
    """
    block = _PSI.conj() @ rho @ _PSI.T
    weight = float(np.trace(block).real)
    total = float(np.trace(rho).real)
    if weight <= tol * max(abs(total), 1.0):
        raise ValueError("density matrix has fully leaked out of the encoded span")
    return block / weight, max(0.0, total - weight)


def imaginary_time_projector(h: np.ndarray, t: float | None = None) -> np.ndarray:
    """Ground-space projector of h, exact or by imaginary-time evolution.

    With ``t=None`` the exact spectral projector is returned.  Otherwise the
    result is expm(-(h - E0) t): the ground sector has unit gain and every
    excited amplitude is suppressed by exp(-gap * t), so the operator
    converges to the exact projector as t grows.
    """
    if not is_hermitian(h):
        raise ValueError("imaginary_time_projector requires a Hermitian matrix")
    evals = np.linalg.eigvalsh(h)
    if t is not None:
        return sla.expm(-(h - evals[0] * np.eye(h.shape[0])) * float(t))
    evals_full, vecs = np.linalg.eigh(h)
    spread = max(evals_full[-1] - evals_full[0], 1.0)
    sel = evals_full <= evals_full[0] + 1e-9 * spread
    vg = vecs[:, sel]
    return vg @ dag(vg)


def stage_projectors(t: float | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(P0, P1, P2): ground projectors of the three stage Hamiltonians."""
    return tuple(
        imaginary_time_projector(braiding_hamiltonian(stage), t) for stage in (0, 1, 2)
    )


def _per_term_projectors() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three essential projections of the decomposed cycle.

    Each stage Hamiltonian is a sum of commuting order-3 unitary terms, so
    its ground projector factorizes into per-term eigenprojectors; the bond
    term shared by every stage never has to be re-projected once the state
    starts in the stage-0 ground space.  What remains is one projection per
    leg: onto sigma-strings (stage 0), onto the site-1 shift eigenvalue 1
    (stage 1) and onto the unit eigenspace of the stage-2 string term.
    """
    spec = _SPEC
    t1, s1 = spec.site_ops(1)
    t2, s2 = spec.site_ops(2)
    t3, s3 = spec.site_ops(3)
    p0 = cyclic_eigenprojector(s1 @ dag(s2), 0) @ cyclic_eigenprojector(s2 @ dag(s3), 0)
    p1 = cyclic_eigenprojector(t1, 0)
    string2 = s1 @ dag(t2) @ dag(t3) @ dag(s3)
    p2 = cyclic_eigenprojector(string2, 0)
    return p0, p1, p2


def braid_full_space(state: np.ndarray, t: float | None = None) -> tuple[np.ndarray, float]:
    """Run one projective braid cycle on a 27-dimensional state.

    The legs are applied in evolution order: project onto the stage-0
    ground space (any weight removed here is reported as input leakage),
    then stage 1, stage 2 and back to stage 0.  With ``t=None`` the legs
    are the decomposed per-term projections; with finite t they are the
    imaginary-time operators of the full stage Hamiltonians.

    Returns the renormalized final state, gauged so that the encoded l=0
    state acquires zero phase (reported phases are then the relative Berry
    phases), together with the total squared norm dissipated by the cycle.
    """
    state = np.asarray(state, dtype=complex)
    if t is None:
        p0, p1, p2 = _per_term_projectors()
    else:
        p0, p1, p2 = stage_projectors(t)
    pipeline = p0 @ p2 @ p1 @ p0

    out = pipeline @ state
    norm2 = float(np.vdot(out, out).real)
    if norm2 <= 1e-28:
        raise ValueError("braid cycle annihilated the state (orthogonal evolution)")
    dissipated = float(np.vdot(state, state).real) - norm2

    ref = complex(np.vdot(_PSI[0], pipeline @ _PSI[0]))
    gauge = np.exp(-1j * np.angle(ref))
    return out / np.sqrt(norm2) * gauge, dissipated


def braid_matrix_restricted(t: float | None = None) -> np.ndarray:
    """The braid cycle restricted to the encoded space, as a 3x3 matrix.

    Entry (i, j) is <psi_i| cycle |psi_j>; the projective content is the
    matrix divided by its (sub-unit) overall scale.
    """
    if t is None:
        p0, p1, p2 = _per_term_projectors()
    else:
        p0, p1, p2 = stage_projectors(t)
    pipeline = p0 @ p2 @ p1 @ p0
    return _PSI.conj() @ pipeline @ _PSI.T


def berry_phase(l: int, t: float | None = None) -> float:
    """Berry phase -arg <psi_l| P1 P2 |psi_l> of the braid cycle, in (-pi, pi].

    P1 and P2 are the stage-1/2 ground projectors (exact, or imaginary-time
    with parameter t).  Phases are reported raw; subtract the l=0 value to
    remove the common dynamical offset.
    """
    if l not in (0, 1, 2):
        raise ValueError(f"basis index must be 0, 1 or 2, got {l}")
    _, p1, p2 = stage_projectors(t)
    ov = complex(np.vdot(_PSI[l], p1 @ p2 @ _PSI[l]))
    if abs(ov) < 1e-14:
        raise ValueError("vanishing projector overlap, Berry phase undefined")
    phase = -np.angle(ov)
    if phase <= -np.pi:
        phase += 2 * np.pi
    return float(phase)


@dataclass(frozen=True)
class DenseGateSet:
    """The three dense-pipeline gates and their products.

    p1, r2, p3 are the per-leg coefficient maps on the three operational
    modes (normalization dropped; only ray equivalence matters), btilde
    their product, and bs the same gate rotated to the encoded eigenbasis:
    exp(-i*pi/6) * diag(1, 1, w).
    """

    p1: np.ndarray
    r2: np.ndarray
    p3: np.ndarray
    btilde: np.ndarray
    bs: np.ndarray


def dense_braid_gates() -> DenseGateSet:
    w, wb = OMEGA, OMEGA_BAR
    p1 = np.eye(3, dtype=complex)
    r2 = np.array([[1, wb, 1], [1, 1, wb], [1, w, w]], dtype=complex) / np.sqrt(3)
    p3 = np.diag([1, 1, wb]).astype(complex)
    btilde = p3 @ r2 @ p1
    f = fourier_matrix(3)
    bs = dag(f) @ btilde @ f
    return DenseGateSet(p1=p1, r2=r2, p3=p3, btilde=btilde, bs=bs)


def dense_vs_full_equivalence(
    coeffs, t: float | None = None
) -> tuple[np.ndarray, np.ndarray, float]:
    """Compare the 3-mode pipeline against the full 27-dim cycle.

    coeffs are logical amplitudes.  Returns the two logical output states
    (dense first) and their trace distance as pure states.
    """
    coeffs = normalize(np.asarray(coeffs, dtype=complex))
    gates = dense_braid_gates()
    f = fourier_matrix(3)
    operational = f @ coeffs
    dense_out = dag(f) @ (gates.p3 @ (gates.r2 @ (gates.p1 @ operational)))
    dense_out = normalize(dense_out)

    full_state, _ = braid_full_space(encode_logical(coeffs), t)
    full_out, _ = decode_logical(full_state)
    return dense_out, full_out, trace_distance_pure(dense_out, full_out)
