import numpy as np
import pytest

from paraqutrit.braid import dense_braid_gates
from paraqutrit.noise import RESOURCE_STATE, flip_channel
from paraqutrit.tensor import OMEGA, clock_shift, dag
from paraqutrit.witness import (PENTAGON_NCHV_BOUND, SQRT5, displacement,
                                displacement_list, kcbs_optimal_settings,
                                kcbs_value, magic_witness, self_test_deficit,
                                witness_operator, witness_report,
                                witness_table, KcbsSettings)

I3 = np.eye(3, dtype=complex)
MIXED = I3 / 3


def pure(v):
    v = np.asarray(v, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def test_displacement_special_cases():
    tau, sigma = clock_shift(3)
    assert np.allclose(displacement(0, 1), sigma)
    assert np.allclose(displacement(1, 0), tau)


@pytest.mark.parametrize("x,z", [(0, 1), (1, 0), (1, 1), (1, 2), (2, 2)])
def test_displacement_spectrum(x, z):
    d = displacement(x, z)
    assert np.abs(d @ dag(d) - I3).max() < 1e-13
    assert np.abs(np.linalg.matrix_power(d, 3) - I3).max() < 1e-12
    eigs = np.linalg.eigvals(d)
    expected = np.array([1, OMEGA, OMEGA**2])
    for target in expected:
        assert np.abs(eigs - target).min() < 1e-10


def test_displacement_eigenbases_mutually_unbiased():
    def basis(d):
        evals, vecs = np.linalg.eig(d)
        return [vecs[:, int(np.argmin(np.abs(evals - OMEGA**k)))] for k in range(3)]

    bases = [basis(d) for d in displacement_list()]
    for i in range(4):
        for j in range(i + 1, 4):
            for a in bases[i]:
                for b in bases[j]:
                    ov = abs(np.vdot(a, b)) ** 2 / (np.vdot(a, a).real * np.vdot(b, b).real)
                    assert abs(ov - 1 / 3) < 1e-10


def test_witness_traces_are_minus_one():
    for x in range(3):
        for z in range(3):
            a = witness_operator(x, z)
            assert np.abs(a - dag(a)).max() < 1e-12
            assert abs(np.trace(a).real + 1) < 1e-12


def test_witnesses_are_distinct():
    ops = [witness_operator(x, z) for x in range(3) for z in range(3)]
    for i in range(9):
        for j in range(i + 1, 9):
            assert np.abs(ops[i] - ops[j]).max() > 1e-3


def test_witness_sum_identity():
    total = sum(witness_operator(x, z) for x in range(3) for z in range(3))
    assert np.abs(total + 3 * I3).max() < 1e-12
    rng = np.random.default_rng(2)
    for _ in range(5):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        rho = pure(v)
        assert abs(witness_table(rho).sum() + 3) < 1e-10


def test_maximally_mixed_state_values():
    table = witness_table(MIXED)
    assert np.abs(table + 1 / 3).max() < 1e-12
    m, _ = magic_witness(MIXED)
    assert abs(m + 1 / 3) < 1e-12


def test_computational_states_are_non_contextual():
    for k in range(3):
        rho = np.zeros((3, 3), dtype=complex)
        rho[k, k] = 1.0
        m, _ = magic_witness(rho)
        assert m <= 1e-12


def test_resource_state_strongly_contextual():
    m, argmax = magic_witness(pure(RESOURCE_STATE))
    assert abs(m - np.sqrt(3) / 2) < 1e-12
    assert m > 0.58
    assert argmax == (1, 0)


def test_magic_witness_invariant_under_braid_clifford():
    bs = dense_braid_gates().bs
    rng = np.random.default_rng(8)
    for _ in range(10):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        rho = pure(v)
        m0, _ = magic_witness(rho)
        m1, _ = magic_witness(bs @ rho @ dag(bs))
        assert abs(m0 - m1) < 1e-10


def test_witness_set_closed_under_braid_conjugation():
    bs = dense_braid_gates().bs
    ops = [witness_operator(x, z) for x in range(3) for z in range(3)]
    for a in ops:
        conj = dag(bs) @ a @ bs
        assert min(np.abs(conj - other).max() for other in ops) < 1e-10


def test_witness_table_multiset_invariant():
    bs = dense_braid_gates().bs
    rng = np.random.default_rng(77)
    for _ in range(20):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        rho = pure(v)
        before = np.sort(witness_table(rho).ravel())
        after = np.sort(witness_table(bs @ rho @ dag(bs)).ravel())
        assert np.abs(before - after).max() < 1e-10


def test_magic_witness_rejects_invalid_density():
    with pytest.raises(ValueError):
        magic_witness(np.diag([1.0, 1.0, 0.0]).astype(complex))  # trace 2
    with pytest.raises(ValueError):
        magic_witness(np.diag([1.5, 0.0, -0.5]).astype(complex))  # not PSD


def test_kcbs_settings_geometry():
    settings = kcbs_optimal_settings()
    vecs = settings.vectors
    assert vecs.shape == (5, 3)
    for v in vecs:
        assert abs(np.linalg.norm(v) - 1) < 1e-12
    for i in range(5):
        assert abs(np.vdot(vecs[i], vecs[(i + 1) % 5])) < 1e-12


def test_kcbs_settings_equal_overlap_with_pole():
    settings = kcbs_optimal_settings()
    pole = np.array([0, 0, 1], dtype=complex)
    overlaps = [abs(np.vdot(v, pole)) ** 2 for v in settings.vectors]
    assert np.abs(np.array(overlaps) - 1 / SQRT5).max() < 1e-12


def test_kcbs_maximum_on_pole_state():
    k = kcbs_value(pure([0, 0, 1]))
    assert abs(k - SQRT5) < 1e-12


def test_kcbs_mixed_state():
    assert abs(kcbs_value(MIXED) - 5 / 3) < 1e-12


def test_kcbs_closed_form_under_flip():
    rho0 = pure([0, 0, 1])
    for p in np.linspace(0, 1, 11):
        rho = flip_channel(float(p)).apply(rho0)
        expected = SQRT5 - (3 * SQRT5 - 5) / 2 * p
        assert abs(kcbs_value(rho) - expected) < 1e-12
    assert abs((SQRT5 - (3 * SQRT5 - 5) / 2) - (5 - SQRT5) / 2) < 1e-14


def test_kcbs_range_over_pure_states():
    rng = np.random.default_rng(31)
    lo = (5 - SQRT5) / 2
    for _ in range(300):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        k = kcbs_value(pure(v))
        assert lo - 1e-10 <= k <= SQRT5 + 1e-10
        assert k <= SQRT5 or k >= PENTAGON_NCHV_BOUND  # vacuous guard for readability


def test_kcbs_near_maximum_pins_the_state():
    rng = np.random.default_rng(14)
    for _ in range(2000):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        v /= np.linalg.norm(v)
        k = kcbs_value(pure(v))
        if k > SQRT5 - 1e-6:
            distance = np.sqrt(max(0.0, 1 - abs(v[2]) ** 2))
            assert distance <= 0.05


def test_kcbs_incompatible_settings_rejected():
    bad = KcbsSettings(vectors=np.tile([1.0 + 0j, 0, 0], (5, 1)))
    with pytest.raises(ValueError):
        kcbs_value(MIXED, settings=bad)


def test_self_test_deficit_values():
    assert self_test_deficit(SQRT5) == 0
    assert abs(self_test_deficit(2.199) - 0.0371) < 1e-4
    assert abs(self_test_deficit(2.0) - (SQRT5 - 2)) < 1e-12
    with pytest.raises(ValueError):
        self_test_deficit(2.5)


def test_witness_report_bundle():
    report = witness_report(pure(RESOURCE_STATE))
    assert report.table.shape == (3, 3)
    assert abs(report.m_value - np.sqrt(3) / 2) < 1e-12
    assert report.m_argmax == (1, 0)
    assert report.kcbs > 0
