"""Qutrit contextuality witnesses: the stabilizer magic witness and the
pentagon (five-cycle) inequality.

The magic witness is built from the four Weyl-Heisenberg displacement
operators D = {D_01, D_10, D_11, D_12} whose eigenbases form a complete set
of mutually unbiased bases.  Each witness A^{xz} subtracts one rank-1
eigenprojector per basis, selected by r = x*a + z*b mod 3 with a = (1,0,1,2)
and b = -(0,1,1,1); any non-contextual value assignment keeps every
expectation <= 0, while states useful for magic state distillation push the
maximum above zero.  Conjugation by the braid Clifford permutes the witness
set, so the maximum is braid-invariant.

The pentagon witness sums five projector expectations over a cyclically
orthogonal set of settings; non-contextual models are bounded by 2 and the
qutrit maximum sqrt(5) is reached only by the distinguished state (0, 0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import (OMEGA, clock_shift, cyclic_eigenprojector, dag,
                     is_hermitian)

SQRT5 = np.sqrt(5.0)

#: Non-contextual bound of the pentagon inequality.
PENTAGON_NCHV_BOUND = 2.0

#: r = x * WITNESS_A + z * WITNESS_B (mod 3).
WITNESS_A = np.array([1, 0, 1, 2])
WITNESS_B = np.array([0, -1, -1, -1]) % 3

#: (x, z) labels of the four displacement operators spanning the MUBs.
DISPLACEMENT_LABELS = ((0, 1), (1, 0), (1, 1), (1, 2))


def displacement(x: int, z: int) -> np.ndarray:
    """Weyl-Heisenberg displacement w^(2xz) tau^x sigma^z for a qutrit.

    The prefactor uses the inverse of 2 mod 3 (= 2), which keeps every
    displacement a unitary with D^3 = 1 and spectrum {1, w, w^2}.
    """
    if x % 3 != x or z % 3 != z:
        x, z = x % 3, z % 3
    tau, sigma = clock_shift(3)
    return OMEGA ** ((2 * x * z) % 3) * \
        np.linalg.matrix_power(tau, x) @ np.linalg.matrix_power(sigma, z)


def displacement_list() -> list[np.ndarray]:
    """The four displacements whose eigenbases are pairwise unbiased."""
    return [displacement(x, z) for x, z in DISPLACEMENT_LABELS]


def witness_vector(x: int, z: int) -> np.ndarray:
    """Eigenvalue selector r for witness (x, z), components mod 3."""
    return (x * WITNESS_A + z * WITNESS_B) % 3


def witness_operator(x: int, z: int) -> np.ndarray:
    """A^{xz} = 1 - sum_j P_j^{r_j}: Hermitian with trace -1."""
    if x not in (0, 1, 2) or z not in (0, 1, 2):
        raise ValueError(f"witness labels must lie in 0..2, got ({x}, {z})")
    r = witness_vector(x, z)
    out = np.eye(3, dtype=complex)
    for d, rj in zip(displacement_list(), r):
        out -= cyclic_eigenprojector(d, int(rj))
    return out


def _check_density(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not is_hermitian(rho, tol):
        raise ValueError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1) > tol:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix must be positive semidefinite")
    return rho


def witness_table(rho: np.ndarray) -> np.ndarray:
    """All nine expectations Tr[A^{xz} rho] as a (3, 3) array indexed [x, z]."""
    rho = _check_density(rho)
    out = np.empty((3, 3))
    for x in range(3):
        for z in range(3):
            out[x, z] = np.trace(witness_operator(x, z) @ rho).real
    return out


def magic_witness(rho: np.ndarray) -> tuple[float, tuple[int, int]]:
    """Maximum witness expectation and its (x, z) label.

    A positive maximum certifies state-dependent contextuality, i.e. the
    state is a usable distillation resource; every non-contextual model is
    bounded by zero.  Ties break lexicographically in (x, z).
    """
    table = witness_table(rho)
    best = (0, 0)
    for x in range(3):
        for z in range(3):
            if table[x, z] > table[best]:
                best = (x, z)
    return float(table[best]), best


@dataclass(frozen=True)
class KcbsSettings:
    """Five rank-1 pentagon settings with neighboring projectors orthogonal.

    ``vectors`` holds the settings as rows in cycle order (each orthogonal
    to the next, cyclically).  ``printed_order`` records the permutation
    mapping cycle position to the conventional label k = 1..5 of the
    underlying vectors (angle 2*pi*k/5); stepping the pentagon in label
    order visits every second vertex.
    """

    vectors: np.ndarray
    printed_order: tuple[int, ...] = field(default=(1, 3, 5, 2, 4))

    def projectors(self) -> list[np.ndarray]:
        return [np.outer(v, v.conj()) for v in self.vectors]


def kcbs_optimal_settings() -> KcbsSettings:
    """The five optimal settings reaching the qutrit maximum sqrt(5).

    Vector k has in-plane angle 2*pi*k/5 and fixed third component
    sqrt(1+sqrt(5))/2, scaled by sqrt(1 - 1/sqrt(5)); vectors two steps
    apart in k are exactly orthogonal, so the cycle order is (1,3,5,2,4).
    """
    pref = np.sqrt(1 - 1 / SQRT5)
    z = np.sqrt(1 + SQRT5) / 2
    raw = {
        k: pref * np.array([np.cos(2 * k * np.pi / 5),
                            np.sin(2 * k * np.pi / 5), z], dtype=complex)
        for k in range(1, 6)
    }
    order = (1, 3, 5, 2, 4)
    return KcbsSettings(vectors=np.array([raw[k] for k in order]),
                        printed_order=order)


def kcbs_value(rho: np.ndarray, settings: KcbsSettings | None = None,
               compat_tol: float = 1e-10) -> float:
    """Pentagon witness K = sum_i Tr[B_i rho].

    Raises if any neighboring pair of settings fails orthogonality within
    compat_tol (incompatible measurement contexts would open the signaling
    loophole).  K <= 2 for non-contextual models; the quantum maximum is
    sqrt(5).
    """
    rho = _check_density(rho)
    if settings is None:
        settings = kcbs_optimal_settings()
    vecs = settings.vectors
    for i in range(5):
        ov = abs(np.vdot(vecs[i], vecs[(i + 1) % 5]))
        if ov > compat_tol:
            raise ValueError(
                f"settings {i} and {(i + 1) % 5} are not compatible "
                f"(overlap {ov:.2e})")
    return float(sum(np.vdot(v, rho @ v).real for v in vecs))


def self_test_deficit(k_obs: float) -> float:
    """Distance sqrt(5) - K of an observed pentagon value from the maximum.

    A small deficit certifies (up to local isometries) proximity of the
    tested state to the distinguished maximizer; the precise trace-distance
    bound is external to this package and scales like the square root of
    the deficit.
    """
    if k_obs > SQRT5 + 1e-9:
        raise ValueError(
            f"observed value {k_obs} exceeds the quantum maximum sqrt(5); "
            "upstream computation is inconsistent")
    if k_obs < 0:
        raise ValueError("pentagon witness values are nonnegative")
    return float(SQRT5 - k_obs)


@dataclass(frozen=True)
class WitnessReport:
    """Contextuality summary for one state: the nine-entry table, its
    maximum with label, and the pentagon value (error bars optional)."""

    table: np.ndarray
    m_value: float
    m_argmax: tuple[int, int]
    kcbs: float
    sigma_m: float | None = None
    sigma_kcbs: float | None = None


def witness_report(rho: np.ndarray) -> WitnessReport:
    table = witness_table(rho)
    m_value, m_argmax = magic_witness(rho)
    return WitnessReport(table=table, m_value=m_value, m_argmax=m_argmax,
                         kcbs=kcbs_value(rho))
