"""Dense linear algebra for small clock/shift (generalized Pauli) systems.

Conventions fixed here and relied on by every other module:

* ``omega(n) = exp(2j*pi/n)``; all phases are built from ``2*pi/n``, never
  from decimal literals.
* ``tau`` is the cyclic shift ``|k> -> |k+1 mod n>``; ``sigma`` is the clock
  ``diag(1, w, ..., w**(n-1))``.  They obey ``sigma @ tau == w * tau @ sigma``.
* In tensor embeddings, site 1 is the leftmost (most significant) factor.
"""

from __future__ import annotations

import numpy as np

#: Largest allowed dimension (entries per matrix row) for embedded operators.
MAX_EMBED_DIM = 10**6

OMEGA = np.exp(2j * np.pi / 3)
OMEGA_BAR = OMEGA.conjugate()


def omega(n: int) -> complex:
    """Primitive n-th root of unity exp(2j*pi/n)."""
    return np.exp(2j * np.pi / n)


def dag(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.abs(m - dag(m)).max() <= tol)


def is_unitary(m: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.abs(m @ dag(m) - np.eye(m.shape[0])).max() <= tol)


def clock_shift(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Shift and clock matrices (tau, sigma) of order n.

    tau maps |k> to |k+1 mod n>, sigma = diag(1, w, ..., w**(n-1)) with
    w = omega(n).  For n = 2 these reduce to the Pauli X and Z matrices.
    """
    if n < 2:
        raise ValueError(f"clock/shift order must be at least 2, got {n}")
    tau = np.zeros((n, n), dtype=complex)
    for k in range(n):
        tau[(k + 1) % n, k] = 1.0
    sigma = np.diag(omega(n) ** np.arange(n)).astype(complex)
    return tau, sigma


def eigenbasis(kind: str, k: int, n: int = 3) -> np.ndarray:
    """Normalized eigenvector of sigma, tau or chi = sigma @ tau with eigenvalue w**k.

    ``kind`` is one of ``"sigma"``, ``"tau"``, ``"chi"``.  The chi basis is
    only tabulated for n = 3.
    """
    if kind not in ("sigma", "tau", "chi"):
        raise ValueError(f"unknown basis kind {kind!r}")
    if not 0 <= k < n:
        raise ValueError(f"eigenvalue index {k} outside 0..{n - 1}")
    w = omega(n)
    if kind == "sigma":
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        return v
    if kind == "tau":
        # components w**(-k*j); tau shifts these into themselves with gain w**k
        return w ** (-k * np.arange(n)) / np.sqrt(n)
    if n != 3:
        raise ValueError("chi eigenbasis is only defined for n = 3")
    w = OMEGA
    table = {
        0: np.array([1, w, 1], dtype=complex),
        1: np.array([1, 1, w], dtype=complex),
        2: np.array([1, w.conjugate(), w.conjugate()], dtype=complex),
    }
    return table[k] / np.sqrt(3)


def kron_chain(ops) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for op in ops:
        out = np.kron(out, op)
    return out


def embed_site(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    """Embed a single-site operator: I x ... x op x ... x I (site 1 leftmost)."""
    d = op.shape[0]
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} outside 1..{n_sites}")
    if d**n_sites > MAX_EMBED_DIM:
        raise ValueError(
            f"embedded dimension {d}**{n_sites} exceeds the {MAX_EMBED_DIM} guard")
    eye = np.eye(d, dtype=complex)
    return kron_chain(op if j == site else eye for j in range(1, n_sites + 1))


def cyclic_eigenprojector(u: np.ndarray, k: int, order: int = 3) -> np.ndarray:
    """Projector onto the w**k eigenspace of a unitary with u**order = 1.

    Group averaging: (1/order) * sum_m w**(-k*m) u**m.  Exact for any unitary
    whose spectrum lies in the order-th roots of unity.
    """
    w = omega(order)
    acc = np.zeros_like(u)
    term = np.eye(u.shape[0], dtype=complex)
    for m in range(order):
        acc += w ** (-k * m) * term
        term = term @ u
    return acc / order


def fourier_matrix(n: int = 3) -> np.ndarray:
    """F[j, k] = w**(j*k) / sqrt(n); maps clock-eigenbasis coefficients to
    shift-invariant-string amplitudes."""
    w = omega(n)
    jk = np.outer(np.arange(n), np.arange(n))
    return w**jk / np.sqrt(n)


def gell_mann_basis() -> list[np.ndarray]:
    """Orthonormal Hermitian qutrit operator basis, Tr[E_j E_k] = 2 delta_jk.

    Index 0 is sqrt(2/3) * identity, indices 1..8 the standard Gell-Mann
    matrices in their usual order.
    """
    lam = [
        np.sqrt(2.0 / 3.0) * np.eye(3, dtype=complex),
        np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex),
        np.array([[0, -1j, 0], [1j, 0, 0], [0, 0, 0]], dtype=complex),
        np.diag([1, -1, 0]).astype(complex),
        np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex),
        np.array([[0, 0, -1j], [0, 0, 0], [1j, 0, 0]], dtype=complex),
        np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex),
        np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex),
        np.diag([1, 1, -2]).astype(complex) / np.sqrt(3),
    ]
    return lam


def normalize(v: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / nrm


def trace_distance_pure(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance between |a><a| and |b><b| for normalized a, b.

    Equals sqrt(1 - |<a|b>|^2) but is evaluated through the gauge-aligned
    difference vector, which stays accurate when the states are almost
    identical (the naive formula loses half the significant digits).
    """
    ov = np.vdot(b, a)
    if abs(ov) < 0.5:
        return float(np.sqrt(max(0.0, 1.0 - abs(ov) ** 2)))
    delta = a - b * (ov / abs(ov))
    d2 = np.vdot(delta, delta).real - abs(np.vdot(a, delta)) ** 2
    return float(np.sqrt(max(0.0, d2)))
