"""Noise channels for the encoded chain and for a bare qutrit.

Chain noise acts on the 27-dimensional spin space and is followed by
imaginary-time dissipation: the output is projected back onto the encoded
ground space and renormalized, mirroring how excited photonic modes are
discarded.  The hopping operator transfers one unit of clock charge between
sites 1 and 2, so it maps the ground space exactly into the excited sector
(hopped population is pure leakage); the phase operator acts as the identity
inside the ground space.  Either way the surviving encoded state is
untouched, which is the topological protection the witnesses certify.

Bare-qutrit noise applies the shift (flip) and clock (dephase) operators
directly with no dissipation step, so the same witnesses degrade.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import braid, witness
from .chain import ChainSpec
from .tensor import clock_shift, dag

_SPEC = ChainSpec(n=3, L=3)

#: Nearly optimal distillation resource used by the reference noise sweeps.
RESOURCE_STATE = np.array([0.5, 0.0, -np.sqrt(3) / 2], dtype=complex)

DEFAULT_GRID = np.round(np.arange(0.0, 1.0 + 1e-12, 0.1), 10)


@dataclass(frozen=True)
class Channel:
    """Mixture-of-conjugations map rho -> sum_i w_i K_i rho K_i^dagger.

    trace_mode "preserving" promises the output trace equals the input
    trace; "renormalize" marks maps that lose (or shuffle) weight and are
    meant to be followed by ground-space dissipation and renormalization.
    """

    name: str
    terms: tuple[tuple[float, np.ndarray], ...]
    trace_mode: str = "preserving"

    def __post_init__(self):
        if self.trace_mode not in ("preserving", "renormalize"):
            raise ValueError(f"unknown trace mode {self.trace_mode!r}")
        for w, _ in self.terms:
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"term weight {w} outside [0, 1]")

    @property
    def dim(self) -> int:
        return self.terms[0][1].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = np.zeros_like(rho)
        for w, k in self.terms:
            if w != 0.0:
                out += w * (k @ rho @ dag(k))
        return out


def identity_channel(dim: int = 3) -> Channel:
    return Channel("identity", ((1.0, np.eye(dim, dtype=complex)),))


def _check_probability(p: float, name: str) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p}")
    return float(p)


def hopping_operator() -> np.ndarray:
    """Charge-transfer operator between chain sites 1 and 2.

    (1/9) (2 - s1 - s1+) t1+ s1 t2 (2 - s2 - s2+): the shift factors move
    one unit of clock charge from site 1 to site 2, so uniform-charge
    (encoded) states are mapped exactly into the orthogonal complement of
    the ground space; the clock polynomials weight the transfer by the
    local charge content.  Spectral norm 1.
    """
    t1, s1 = _SPEC.site_ops(1)
    t2, s2 = _SPEC.site_ops(2)
    eye = np.eye(27, dtype=complex)
    return (2 * eye - s1 - dag(s1)) @ dag(t1) @ s1 @ t2 @ (2 * eye - s2 - dag(s2)) / 9


def phase_operator() -> np.ndarray:
    """Site-1 phase-noise operator (3 - t1 - t1+)/3.

    Acts as the identity on the encoded ground space while pumping weight
    into the excited sector, so it is removed by the dissipation step.
    """
    t1, _ = _SPEC.site_ops(1)
    return (3 * np.eye(27, dtype=complex) - t1 - dag(t1)) / 3


def hopping_channel(p: float) -> Channel:
    """rho -> (1-p) rho + p X rho X+ on the chain, X the hopping operator."""
    p = _check_probability(p, "hopping probability")
    return Channel(
        "hopping",
        ((1.0 - p, np.eye(27, dtype=complex)), (p, hopping_operator())),
        trace_mode="renormalize",
    )


def phase_channel(q: float) -> Channel:
    """rho -> (1-q) rho + q Z rho Z+ on the chain, Z the phase operator."""
    q = _check_probability(q, "phase probability")
    return Channel(
        "phase",
        ((1.0 - q, np.eye(27, dtype=complex)), (q, phase_operator())),
        trace_mode="renormalize",
    )


def flip_channel(p: float) -> Channel:
    """Bare-qutrit flip: (1-p) rho + (p/2)(t rho t+ + t+ rho t)."""
    p = _check_probability(p, "flip probability")
    tau, _ = clock_shift(3)
    return Channel(
        "flip",
        ((1.0 - p, np.eye(3, dtype=complex)), (p / 2, tau), (p / 2, dag(tau))),
    )


def dephase_channel(q: float) -> Channel:
    """Bare-qutrit dephasing: (1-q) rho + (q/2)(s rho s+ + s+ rho s)."""
    q = _check_probability(q, "dephase probability")
    _, sigma = clock_shift(3)
    return Channel(
        "dephase",
        ((1.0 - q, np.eye(3, dtype=complex)), (q / 2, sigma), (q / 2, dag(sigma))),
    )


def compose(*channels: Channel) -> Channel:
    """Sequential composition; the first listed channel acts first.

    Term lists multiply out (weights multiply, operators left-compose).
    Any renormalizing member makes the composition renormalizing.
    """
    if not channels:
        raise ValueError("compose requires at least one channel")
    dims = {c.dim for c in channels}
    if len(dims) != 1:
        raise ValueError(f"cannot compose channels of different dimensions {dims}")
    terms = [(1.0, np.eye(channels[0].dim, dtype=complex))]
    for ch in channels:
        terms = [(w1 * w2, k2 @ k1) for w1, k1 in terms for w2, k2 in ch.terms]
    mode = ("renormalize" if any(c.trace_mode == "renormalize" for c in channels)
            else "preserving")
    name = "∘".join(c.name for c in reversed(channels))
    return Channel(name, tuple(terms), trace_mode=mode)


def dissipate_and_decode(channel: Channel, rho27: np.ndarray,
                         zero_tol: float = 1e-14) -> tuple[np.ndarray, float]:
    """Apply a chain channel, dissipate to the ground space, decode.

    Returns the renormalized 3x3 logical density matrix together with the
    input weight lost to dissipation (everything not retained in the
    encoded span, whether moved to excited states or annihilated by a
    contraction).  Conditioning on survival becomes ill-posed when every
    surviving branch carries zero probability (e.g. hopping with p = 1);
    the survivor-conditioned state is then continued from p < 1, which is
    exact here because the surviving state is p-independent.  Term branches
    whose ground-projected trace is a structural zero are recognized at
    zero_tol and dropped.
    """
    if channel.dim != 27:
        raise ValueError("dissipation applies to chain (27-dim) channels only")
    psi = braid.chain_basis_states()
    blocks = []
    for w, k in channel.terms:
        moved = k @ rho27 @ dag(k)
        block = psi.conj() @ moved @ psi.T
        blocks.append((w, block, float(np.trace(block).real)))
    retained = sum(w * tr for w, _, tr in blocks)
    leaked = max(0.0, float(np.trace(rho27).real) - retained)

    if retained > zero_tol:
        out = sum(w * b for w, b, _ in blocks) / retained
        return out, leaked
    # zero-probability conditioning: keep the branches that survive at all
    alive = [(b, tr) for _, b, tr in blocks if tr > zero_tol]
    if not alive:
        raise ValueError("channel output has fully leaked out of the encoded span")
    out = sum(b for b, _ in alive) / sum(tr for _, tr in alive)
    return out, leaked


@dataclass(frozen=True)
class SweepResult:
    """Witness values on a noise-probability grid.

    grid_p / grid_q are the sampled probabilities (grid_q is None for
    one-parameter sweeps), m_values and kcbs_values the per-point witness
    outcomes, leakage the per-point weight dissipated by the chain (zero
    for bare-qutrit families).  2-d sweeps store arrays shaped
    (len(grid_p), len(grid_q)).
    """

    family: str
    grid_p: np.ndarray
    grid_q: np.ndarray | None
    m_values: np.ndarray
    kcbs_values: np.ndarray
    leakage: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.grid_p) <= 0):
            raise ValueError("probability grid must be sorted ascending")
        for arr in (self.m_values, self.kcbs_values, self.leakage):
            if not np.all(np.isfinite(arr)):
                raise ValueError("sweep produced non-finite witness values")


_FAMILIES = ("qutrit", "chain")


def _qutrit_channel(p: float, q: float) -> Channel:
    if q == 0.0:
        return flip_channel(p)
    return compose(dephase_channel(q), flip_channel(p))


def _chain_channel(p: float, q: float) -> Channel:
    if q == 0.0:
        return hopping_channel(p)
    return compose(phase_channel(q), hopping_channel(p))


def sweep_witness(family: str, logical_state=None,
                  grid_p=None, grid_q=None) -> SweepResult:
    """Evaluate the magic and pentagon witnesses along a noise grid.

    family "qutrit" runs flip (+ dephase when grid_q is given) noise on the
    bare logical state; family "chain" encodes the state, applies hopping
    (+ phase) noise and dissipates back to the ground space before
    evaluating the witnesses.  Composition order matches the composed
    superoperator convention: the q-channel acts first.
    """
    if family not in _FAMILIES:
        raise ValueError(f"unknown sweep family {family!r}")
    coeffs = RESOURCE_STATE if logical_state is None else np.asarray(logical_state, complex)
    coeffs = coeffs / np.linalg.norm(coeffs)
    grid_p = DEFAULT_GRID if grid_p is None else np.asarray(grid_p, dtype=float)
    qs = np.array([0.0]) if grid_q is None else np.asarray(grid_q, dtype=float)

    shape = (len(grid_p), len(qs))
    m_vals = np.empty(shape)
    k_vals = np.empty(shape)
    leak = np.zeros(shape)

    if family == "qutrit":
        rho0 = np.outer(coeffs, coeffs.conj())
        for i, p in enumerate(grid_p):
            for j, q in enumerate(qs):
                rho = _qutrit_channel(float(p), float(q)).apply(rho0)
                m_vals[i, j] = witness.magic_witness(rho)[0]
                k_vals[i, j] = witness.kcbs_value(rho)
    else:
        encoded = braid.encode_logical(coeffs)
        rho0 = np.outer(encoded, encoded.conj())
        for i, p in enumerate(grid_p):
            for j, q in enumerate(qs):
                chan = _chain_channel(float(p), float(q))
                logical, leaked = dissipate_and_decode(chan, rho0)
                m_vals[i, j] = witness.magic_witness(logical)[0]
                k_vals[i, j] = witness.kcbs_value(logical)
                leak[i, j] = leaked

    if grid_q is None:
        return SweepResult(family, grid_p, None, m_vals[:, 0], k_vals[:, 0], leak[:, 0])
    return SweepResult(family, grid_p, qs, m_vals, k_vals, leak)
