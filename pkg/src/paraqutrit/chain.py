"""Parafermion chain operators and Hamiltonians.

Parafermion pairs (alpha_ka, alpha_kb) are built from clock/shift spin
operators through the non-local string map

    alpha_ka = sigma_k * prod_{j<k} tau_j,
    alpha_kb = sigma_k * prod_{j<=k} tau_j,

so every operator here is an ordinary dense matrix on the n**L spin space.
The three-stage braiding Hamiltonians exist in both pictures: ``parafermion``
builds them from the alpha products, ``spin`` from the equivalent clock/shift
expressions.  The two agree for stage 0 and have identical spectra for all
stages; the stage-1/2 matrices differ by the chirality bookkeeping of the
string map (see notes on `braiding_hamiltonian`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import clock_shift, dag, embed_site, is_hermitian, omega

#: Hard cap on the chain Hilbert-space dimension (exactness over scalability).
MAX_CHAIN_DIM = 729

#: Chirality of the braiding-stage bond terms, the value that keeps the edge
#: zero modes maximally robust.
CHIRAL_PHASE = np.pi / 6


@dataclass(frozen=True)
class ChainSpec:
    """Parameters of a Z_n parafermion chain.

    f and J are the field and bond couplings, theta and phi the chiral
    phases of the respective terms (stored mod 2*pi).
    """

    n: int = 3
    L: int = 3
    f: float = 0.0
    J: float = 1.0
    theta: float = 0.0
    phi: float = CHIRAL_PHASE

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"Z_n order must be at least 2, got {self.n}")
        if self.L < 1:
            raise ValueError(f"chain length must be at least 1, got {self.L}")
        if self.n**self.L > MAX_CHAIN_DIM:
            raise ValueError(
                f"chain dimension {self.n}**{self.L} exceeds the {MAX_CHAIN_DIM} guard")
        object.__setattr__(self, "theta", float(self.theta) % (2 * np.pi))
        object.__setattr__(self, "phi", float(self.phi) % (2 * np.pi))

    @property
    def dim(self) -> int:
        return self.n**self.L

    def site_ops(self, site: int) -> tuple[np.ndarray, np.ndarray]:
        """(tau_site, sigma_site) embedded in the full chain space."""
        tau, sigma = clock_shift(self.n)
        return embed_site(tau, site, self.L), embed_site(sigma, site, self.L)


def fk_operator(site: int, flavor: str, spec: ChainSpec) -> np.ndarray:
    """Parafermion operator alpha_{site,flavor} on the full chain space.

    flavor "a" attaches the shift string over sites j < site, flavor "b"
    over j <= site.  For n = 3 the result is a unitary cube root of the
    identity with alpha^dagger = alpha^2.
    """
    if flavor not in ("a", "b"):
        raise ValueError(f"flavor must be 'a' or 'b', got {flavor!r}")
    if not 1 <= site <= spec.L:
        raise ValueError(f"site {site} outside 1..{spec.L}")
    tau, sigma = clock_shift(spec.n)
    out = embed_site(sigma, site, spec.L)
    last = site if flavor == "b" else site - 1
    for j in range(1, last + 1):
        out = out @ embed_site(tau, j, spec.L)
    return out


def parity_operator(spec: ChainSpec) -> np.ndarray:
    """Total charge operator prod_k tau_k = prod_k alpha_ka^dagger alpha_kb.

    Unitary with eigenvalues in the n-th roots of unity.  On the encoded
    chain states built by `braid.chain_basis_states` the eigenvalue of the
    l-th state is omega**(-l); its adjoint measures the charge with the
    opposite sign convention.
    """
    tau, _ = clock_shift(spec.n)
    out = np.eye(spec.dim, dtype=complex)
    for k in range(1, spec.L + 1):
        out = out @ embed_site(tau, k, spec.L)
    return out


def fock_parafermion(site: int, spec: ChainSpec) -> np.ndarray:
    """Fock parafermion annihilator C_site (Z_3 chains only).

    C = (2/3) a - (1/3) sum_{m=1,2} w^{m(m+1)/2} a^{m+1} (b^dagger)^m with
    (a, b) the two parafermion flavors on the site.  C is traceless and
    nilpotent of order 3; C^dagger C = (2 - tau - tau^dagger)/3 counts
    whether the site charge is nonzero.
    """
    if spec.n != 3:
        raise ValueError(f"Fock parafermions are only defined for n = 3, got n = {spec.n}")
    w = omega(3)
    a = fk_operator(site, "a", spec)
    b = fk_operator(site, "b", spec)
    out = (2.0 / 3.0) * a
    for m in (1, 2):
        out = out - (w ** (m * (m + 1) // 2) / 3.0) * \
            np.linalg.matrix_power(a, m + 1) @ np.linalg.matrix_power(dag(b), m)
    return out


def _hc(m: np.ndarray) -> np.ndarray:
    return m + dag(m)


def braiding_hamiltonian(stage: int, picture: str = "spin") -> np.ndarray:
    """27x27 Hamiltonian of the three-site braiding cycle, stages 0/1/2.

    Stage 0 couples bonds (1,2) and (2,3); stage 1 replaces bond (1,2) by a
    local field on site 1 ("effect of a local external field"); stage 2
    couples site 1 back to site 3 through the string operator.  All bond
    terms carry the chiral phase exp(i*pi/6) and the Hermitian conjugate is
    always added.

    picture "spin" uses the clock/shift expressions, picture "parafermion"
    the literal alpha products.  The two pictures have identical spectra;
    for stages 1 and 2 the matrices themselves differ (the string map drags
    an omega-bar onto the field term and conjugates the stage-2 string
    term), and the spin picture is the one whose ground spaces define the
    projective braid.
    """
    if stage not in (0, 1, 2):
        raise ValueError(f"stage must be 0, 1 or 2, got {stage}")
    if picture not in ("spin", "parafermion"):
        raise ValueError(f"unknown picture {picture!r}")
    spec = ChainSpec(n=3, L=3)
    phase = np.exp(1j * CHIRAL_PHASE)

    if picture == "parafermion":
        a = {(k, fl): fk_operator(k, fl, spec) for k in (1, 2, 3) for fl in ("a", "b")}
        bond23 = a[(2, "b")] @ dag(a[(3, "a")])
        if stage == 0:
            h = -phase * (a[(1, "b")] @ dag(a[(2, "a")]) + bond23)
        elif stage == 1:
            h = -phase * bond23 - a[(1, "a")] @ dag(a[(1, "b")])
        else:
            h = -phase * (bond23 + a[(3, "b")] @ dag(a[(1, "b")]))
    else:
        t1, s1 = spec.site_ops(1)
        t2, s2 = spec.site_ops(2)
        t3, s3 = spec.site_ops(3)
        bond23 = s2 @ dag(s3)
        if stage == 0:
            h = -phase * (s1 @ dag(s2) + bond23)
        elif stage == 1:
            h = -phase * bond23 - t1
        else:
            h = -phase * (bond23 + s1 @ dag(t2) @ dag(t3) @ dag(s3))

    h = _hc(h)
    if not is_hermitian(h):
        raise RuntimeError("braiding Hamiltonian failed the Hermiticity check")
    return h


def generic_chain_hamiltonian(spec: ChainSpec) -> np.ndarray:
    """Open-chain Hamiltonian -f e^{i theta} sum_j a_ja^+ a_jb
    - J e^{i phi} sum_j a_jb^+ a_(j+1)a + h.c., built from the alpha products.

    In the spin picture the field term reduces to tau_j, while the string
    map gives a_jb^+ a_(j+1)a = omega_bar * sigma_j^+ sigma_{j+1}: the bond
    term carries a fixed extra omega_bar, so the effective bond chirality is
    phi - 2*pi/n.  With f=0, J=1, n=3 the stage-0 braiding Hamiltonian is
    recovered at phi = pi/2 (the nominal pi/6 shifted by 2*pi/3 to cancel
    the omega_bar).
    """
    h = np.zeros((spec.dim, spec.dim), dtype=complex)
    if spec.f != 0.0:
        coeff = -spec.f * np.exp(1j * spec.theta)
        for j in range(1, spec.L + 1):
            h += coeff * dag(fk_operator(j, "a", spec)) @ fk_operator(j, "b", spec)
    if spec.J != 0.0 and spec.L > 1:
        coeff = -spec.J * np.exp(1j * spec.phi)
        for j in range(1, spec.L):
            h += coeff * dag(fk_operator(j, "b", spec)) @ fk_operator(j + 1, "a", spec)
    h = _hc(h)
    if not is_hermitian(h):
        raise RuntimeError("generic chain Hamiltonian failed the Hermiticity check")
    return h


def ground_space(h: np.ndarray, degeneracy_tol: float = 1e-9) -> tuple[float, list[np.ndarray]]:
    """Ground energy and an orthonormal basis of the ground eigenspace.

    degeneracy_tol is relative to the spectral range; it only absorbs
    floating-point noise, the physical degeneracies here are exact.
    """
    if not is_hermitian(h):
        raise ValueError("ground_space requires a Hermitian matrix")
    evals, evecs = np.linalg.eigh(h)
    spread = max(evals[-1] - evals[0], 1.0)
    sel = evals <= evals[0] + degeneracy_tol * spread
    basis = evecs[:, sel]
    # eigh already returns orthonormal columns; re-orthonormalize defensively
    q, _ = np.linalg.qr(basis)
    return float(evals[0]), [q[:, i] for i in range(q.shape[1])]
