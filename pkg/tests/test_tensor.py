import numpy as np
import pytest

from paraqutrit.tensor import (OMEGA, clock_shift, cyclic_eigenprojector, dag,
                               eigenbasis, embed_site, fourier_matrix,
                               gell_mann_basis, is_hermitian, is_unitary,
                               omega, trace_distance_pure)


def test_clock_shift_qutrit_matrices():
    tau, sigma = clock_shift(3)
    w = OMEGA
    assert np.allclose(tau, [[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    assert np.allclose(sigma, np.diag([1, w, w**2]))


def test_clock_shift_n2_is_pauli():
    tau, sigma = clock_shift(2)
    assert np.allclose(tau, [[0, 1], [1, 0]])
    assert np.allclose(sigma, np.diag([1, -1]))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weyl_commutation(n):
    tau, sigma = clock_shift(n)
    assert np.abs(sigma @ tau - omega(n) * tau @ sigma).max() < 1e-14


def test_invalid_order_rejected():
    with pytest.raises(ValueError):
        clock_shift(1)


@pytest.mark.parametrize("kind", ["sigma", "tau", "chi"])
@pytest.mark.parametrize("k", [0, 1, 2])
def test_eigenbasis_is_eigenvector(kind, k):
    tau, sigma = clock_shift(3)
    op = {"sigma": sigma, "tau": tau, "chi": sigma @ tau}[kind]
    v = eigenbasis(kind, k)
    assert abs(np.linalg.norm(v) - 1) < 1e-14
    assert np.abs(op @ v - OMEGA**k * v).max() < 1e-14


def test_eigenbasis_explicit_vectors():
    w = OMEGA
    assert np.allclose(eigenbasis("sigma", 0), [1, 0, 0])
    assert np.allclose(eigenbasis("tau", 1), np.array([1, w.conj(), w]) / np.sqrt(3))
    assert np.allclose(eigenbasis("chi", 2),
                       np.array([1, w.conj(), w.conj()]) / np.sqrt(3))


def test_eigenbases_mutually_unbiased():
    bases = [[eigenbasis(kind, k) for k in range(3)] for kind in ("sigma", "tau", "chi")]
    for i in range(3):
        for j in range(i + 1, 3):
            for a in bases[i]:
                for b in bases[j]:
                    assert abs(abs(np.vdot(a, b)) ** 2 - 1 / 3) < 1e-12


def test_embed_site_single_site_identity():
    _, sigma = clock_shift(3)
    assert np.allclose(embed_site(sigma, 1, 1), sigma)


def test_embed_site_disjoint_factors_commute():
    tau, sigma = clock_shift(3)
    a = embed_site(sigma, 1, 2)
    b = embed_site(tau, 2, 2)
    assert np.abs(a @ b - b @ a).max() < 1e-14


def test_embed_site_same_site_weyl_ratio():
    tau, sigma = clock_shift(3)
    s = embed_site(sigma, 1, 3)
    t = embed_site(tau, 1, 3)
    assert np.abs(s @ t - OMEGA * t @ s).max() < 1e-13
    prod = s @ t
    mask = np.abs(prod) > 1e-12
    assert np.allclose((prod / np.where(mask, t @ s, 1))[mask], OMEGA)


def test_embed_site_preserves_spectrum():
    tau, _ = clock_shift(3)
    big = embed_site(tau, 2, 3)
    small_eigs = np.sort_complex(np.linalg.eigvals(tau))
    big_eigs = np.sort_complex(np.linalg.eigvals(big))
    expected = np.sort_complex(np.repeat(small_eigs, 9))
    assert np.abs(big_eigs - expected).max() < 1e-10


def test_embed_site_dimension_guard():
    tau, _ = clock_shift(3)
    with pytest.raises(ValueError):
        embed_site(tau, 1, 14)  # 3**14 ~ 4.8e6 rows


def test_gell_mann_orthonormality():
    basis = gell_mann_basis()
    assert len(basis) == 9
    for j, ej in enumerate(basis):
        assert is_hermitian(ej)
        for k, ek in enumerate(basis):
            assert abs(np.trace(dag(ej) @ ek) - 2 * (j == k)) < 1e-13


def test_gell_mann_explicit_entries():
    basis = gell_mann_basis()
    assert np.allclose(basis[8], np.diag([1, 1, -2]) / np.sqrt(3))
    assert np.allclose(basis[0], np.sqrt(2 / 3) * np.eye(3))


def test_cyclic_eigenprojector_of_shift():
    tau, _ = clock_shift(3)
    for k in range(3):
        p = cyclic_eigenprojector(tau, k)
        assert np.abs(p @ p - p).max() < 1e-14
        assert np.abs(tau @ p - OMEGA**k * p).max() < 1e-14
    total = sum(cyclic_eigenprojector(tau, k) for k in range(3))
    assert np.allclose(total, np.eye(3))


def test_fourier_matrix_unitary_and_diagonalizes_shift():
    f = fourier_matrix(3)
    assert is_unitary(f)
    tau, sigma = clock_shift(3)
    # F swaps the roles of clock and shift
    assert np.abs(dag(f) @ sigma @ f - tau).max() < 1e-14


def test_trace_distance_pure_resolves_tiny_separations():
    rng = np.random.default_rng(5)
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    a /= np.linalg.norm(a)
    assert trace_distance_pure(a, a * np.exp(0.3j)) < 1e-15
    b = a + 1e-12 * np.array([1, 0, 0, 0])
    b /= np.linalg.norm(b)
    d = trace_distance_pure(a, b)
    assert 1e-14 < d < 1e-11
    # orthogonal states sit at distance 1
    e0 = np.eye(4)[0].astype(complex)
    e1 = np.eye(4)[1].astype(complex)
    assert abs(trace_distance_pure(e0, e1) - 1) < 1e-14
