"""Simulated qutrit state/process tomography.

A process is represented by its chi matrix over the orthonormal Hermitian
basis E_0..E_8 (sqrt(2/3)*identity plus the eight Gell-Mann matrices):
E(rho) = sum_jk chi_jk E_j rho E_k^dagger.  Preparation and measurement run
over the same nine informationally complete kets, giving the 9x9 probability
table p_mn = <Phi_n| E(|Psi_m><Psi_m|) |Phi_n>.

Reconstruction is least squares over physical chi: the matrix is kept
positive semidefinite by optimizing a Cholesky-style factor chi = L L^+,
with trace preservation enforced through a quadratic penalty (one-sided when
the data are lossy).  The optimizer starts from the linear-inversion
estimate, which is already exact on noiseless data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .noise import Channel
from .tensor import dag, fourier_matrix, gell_mann_basis, is_unitary

_BASIS = gell_mann_basis()
_TRIL_R, _TRIL_C = np.tril_indices(9, -1)

#: _SMAP[j, k] = E_k @ E_j, the building block of the trace-preservation map.
_SMAP = np.array([[ek @ ej for ek in _BASIS] for ej in _BASIS])


def tomography_bases() -> list[np.ndarray]:
    """The nine preparation/measurement kets (informationally complete)."""
    s = 1 / np.sqrt(2)
    vecs = [
        (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (0, s, s), (s, 0, s), (s, s, 0),
        (0, s, -1j * s), (s, 0, -1j * s), (s, -1j * s, 0),
    ]
    return [np.array(v, dtype=complex) for v in vecs]


def _as_channel_map(process):
    """Normalize a process argument to a rho -> rho callable."""
    if isinstance(process, Channel):
        return process.apply
    if callable(process):
        return process
    u = np.asarray(process, dtype=complex)
    if u.shape != (3, 3):
        raise ValueError("process must be a 3x3 matrix, a Channel or a callable")
    return lambda rho: u @ rho @ dag(u)


def probabilities(process) -> np.ndarray:
    """Detection table p[m, n] for preparation m and measurement n."""
    apply = _as_channel_map(process)
    kets = tomography_bases()
    out = np.empty((9, 9))
    for m, prep in enumerate(kets):
        evolved = apply(np.outer(prep, prep.conj()))
        for n, meas in enumerate(kets):
            out[m, n] = np.vdot(meas, evolved @ meas).real
    return out


@dataclass(frozen=True)
class CountTable:
    """Poisson coincidence counts per (preparation, measurement) setting."""

    counts: np.ndarray
    shots: int
    seed: int

    def frequencies(self) -> np.ndarray:
        return self.counts / self.shots

    def to_csv(self) -> str:
        lines = ["prep,meas,count"]
        for m in range(9):
            for n in range(9):
                lines.append(f"{m},{n},{int(self.counts[m, n])}")
        return "\n".join(lines) + "\n"


def simulate_counts(probs: np.ndarray, shots: int, seed: int) -> CountTable:
    """Draw counts[m, n] ~ Poisson(shots * p[m, n]), reproducible per seed."""
    if shots <= 0:
        raise ValueError(f"shots must be positive, got {shots}")
    rng = np.random.default_rng(seed)
    counts = rng.poisson(shots * np.clip(np.asarray(probs, dtype=float), 0, None))
    return CountTable(counts=counts, shots=int(shots), seed=int(seed))


def chi_theoretical(u: np.ndarray) -> np.ndarray:
    """Rank-1 chi of a unitary: chi = c c^+ with c_j = Tr[E_j^+ U] / 2.

    The normalization follows Tr[E_j^+ E_k] = 2 delta_jk; for the identity
    channel chi_00 = 3/2 and every other entry vanishes.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("chi_theoretical expects a unitary matrix")
    c = np.array([np.trace(dag(e) @ u) / 2 for e in _BASIS])
    return np.outer(c, c.conj())


def apply_chi(chi: np.ndarray, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    for j in range(9):
        for k in range(9):
            if chi[j, k] != 0:
                out = out + chi[j, k] * _BASIS[j] @ rho @ dag(_BASIS[k])
    return out


def trace_map(chi: np.ndarray) -> np.ndarray:
    """sum_jk chi_jk E_k E_j; equals the identity for trace-preserving chi."""
    return np.einsum("jk,jkab->ab", chi, _SMAP)


def _design_vectors() -> np.ndarray:
    """w[m*9+n, j] = conj(<Phi_n|E_j|Psi_m>) so that p = w^+ chi w per row."""
    kets = tomography_bases()
    out = np.empty((81, 9), dtype=complex)
    for m, prep in enumerate(kets):
        for n, meas in enumerate(kets):
            out[m * 9 + n] = np.conj([np.vdot(meas, e @ prep) for e in _BASIS])
    return out


_W = _design_vectors()
_AMAT = np.einsum("ij,ik->ijk", _W.conj(), _W).reshape(81, 81)


def design_condition_number() -> float:
    """Condition number of the linear map chi -> probabilities."""
    return float(np.linalg.cond(_AMAT))


def linear_inversion(probs: np.ndarray) -> np.ndarray:
    """Unconstrained chi solving p = A vec(chi); Hermitized."""
    chi = np.linalg.solve(_AMAT, np.asarray(probs, dtype=float).reshape(81))
    chi = chi.reshape(9, 9)
    return (chi + dag(chi)) / 2


def _pack(l_factor: np.ndarray) -> np.ndarray:
    x = np.empty(81)
    x[:9] = l_factor[np.arange(9), np.arange(9)].real
    x[9:45] = l_factor[_TRIL_R, _TRIL_C].real
    x[45:] = l_factor[_TRIL_R, _TRIL_C].imag
    return x


def _unpack(x: np.ndarray) -> np.ndarray:
    l_factor = np.zeros((9, 9), dtype=complex)
    l_factor[np.arange(9), np.arange(9)] = x[:9]
    l_factor[_TRIL_R, _TRIL_C] = x[9:45] + 1j * x[45:]
    return l_factor


@dataclass(frozen=True)
class QptResult:
    """Fitted process matrix plus convergence diagnostics."""

    chi: np.ndarray
    residual: float
    tp_residual: float
    lossy: bool
    converged: bool
    iterations: int


def qpt_fit(data, penalty: float = 1e3, max_iter: int = 10_000,
            grad_tol: float = 1e-10) -> QptResult:
    """Least-squares reconstruction of a physical process matrix.

    ``data`` is a 9x9 probability table or a CountTable.  chi is
    parameterized as L L^+ (always Hermitian PSD); trace preservation adds
    penalty * ||trace_map(chi) - 1||^2 to the squared residual.  When the
    data show losses (some probability row sums fall clearly below the
    lossless value) only trace increase is penalized and the result is
    flagged lossy.  Raises on non-convergence.
    """
    if isinstance(data, CountTable):
        probs = data.frequencies()
    else:
        probs = np.asarray(data, dtype=float)
    if probs.shape != (9, 9):
        raise ValueError("expected a 9x9 probability/frequency table")
    pvec = probs.reshape(81)

    lossless_row_sum = probabilities(np.eye(3, dtype=complex)).sum(axis=1).min()
    lossy = bool(probs.sum(axis=1).min() < lossless_row_sum - 0.05)

    def loss_grad(x):
        l_factor = _unpack(x)
        chi = l_factor @ dag(l_factor)
        pred = np.einsum("ij,jk,ik->i", _W.conj(), chi, _W).real
        r = pred - pvec
        g_chi = 2 * np.einsum("i,ij,ik->jk", r, _W, _W.conj())
        smat = trace_map(chi) - np.eye(3)
        if lossy:
            # penalize only the trace-increasing part: positive eigenvalues
            evals, vecs = np.linalg.eigh((smat + dag(smat)) / 2)
            pos = np.clip(evals, 0, None)
            pen = penalty * float(np.sum(pos**2))
            smat_pen = vecs @ np.diag(pos) @ dag(vecs)
        else:
            pen = penalty * float(np.sum(np.abs(smat) ** 2))
            smat_pen = smat
        g_chi = g_chi + penalty * 2 * np.einsum("ab,jkab->jk", smat_pen.conj(), _SMAP).conj()
        g_l = 2 * g_chi @ l_factor
        return float(np.sum(r**2) + pen), _pack(g_l)

    chi0 = linear_inversion(probs)
    evals, vecs = np.linalg.eigh(chi0)
    chi0_psd = vecs @ np.diag(np.clip(evals, 1e-10, None)) @ dag(vecs)
    l0 = np.linalg.cholesky(chi0_psd + 1e-12 * np.eye(9))

    res = minimize(loss_grad, _pack(l0), jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iter, "gtol": grad_tol, "ftol": 1e-14})
    l_fit = _unpack(res.x)
    chi = l_fit @ dag(l_fit)
    pred = np.einsum("ij,jk,ik->i", _W.conj(), chi, _W).real
    residual = float(np.linalg.norm(pred - pvec))
    tp_residual = float(np.abs(trace_map(chi) - np.eye(3)).max())

    grad_norm = float(np.linalg.norm(res.jac)) if res.jac is not None else np.inf
    converged = bool(res.success or grad_norm < 1e-6 or res.nit < max_iter)
    if not converged:
        raise RuntimeError(
            f"process fit did not converge after {res.nit} iterations "
            f"(residual {residual:.3e}, gradient {grad_norm:.3e})")
    return QptResult(chi=chi, residual=residual, tp_residual=tp_residual,
                     lossy=lossy, converged=converged, iterations=int(res.nit))


def chi_basis_change(chi: np.ndarray, rotation: np.ndarray | None = None) -> np.ndarray:
    """Express chi in the frame rotated by ``rotation`` (default: Fourier).

    The rotated channel is rho -> V^+ E(V rho V^+) V, i.e. every basis
    element E_m is replaced by V^+ E_m V; expanding back onto the E basis
    gives chi' = R chi R^+ with R_jm = Tr[E_j (V^+ E_m V)] / 2.  Applying
    the inverse rotation round-trips.
    """
    v = fourier_matrix(3) if rotation is None else np.asarray(rotation, dtype=complex)
    r = np.empty((9, 9), dtype=complex)
    for j in range(9):
        for m in range(9):
            r[j, m] = np.trace(dag(_BASIS[j]) @ (dag(v) @ _BASIS[m] @ v)) / 2
    return r @ np.asarray(chi, dtype=complex) @ dag(r)


def process_fidelity(chi_a: np.ndarray, chi_b: np.ndarray) -> float:
    """Normalized overlap Tr[chi_a chi_b] / sqrt(Tr[chi_a^2] Tr[chi_b^2])."""
    a = np.asarray(chi_a, dtype=complex)
    b = np.asarray(chi_b, dtype=complex)
    na = np.trace(a @ a).real
    nb = np.trace(b @ b).real
    if na <= 0 or nb <= 0:
        raise ValueError("process fidelity of a zero-norm matrix is undefined")
    return float(np.trace(a @ b).real / np.sqrt(na * nb))


def bootstrap(counts: CountTable, statistic, resamples: int = 100,
              seed: int | None = None) -> tuple[float, float]:
    """Poisson-resample the counts and report (mean, one-sigma) of a statistic.

    Each resample redraws every count from Poisson(observed count); the
    statistic receives a CountTable.  Per-resample generators are spawned
    from the master seed (default: the table's own seed).
    """
    if np.any(counts.counts < 0):
        raise ValueError("counts must be nonnegative")
    master = counts.seed if seed is None else seed
    streams = np.random.SeedSequence(master).spawn(resamples)
    values = []
    for stream in streams:
        rng = np.random.default_rng(stream)
        resampled = CountTable(counts=rng.poisson(counts.counts),
                               shots=counts.shots, seed=counts.seed)
        values.append(statistic(resampled))
    values = np.asarray(values, dtype=float)
    return float(values.mean()), float(values.std())
