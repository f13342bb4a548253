import numpy as np
import pytest

from elastocons import apply4, eig_general, eig_sym, identity4, outer
from elastocons.errors import NotSymmetric

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])


def test_outer_basis_dyad():
    D = outer(E1, E2)
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0
    assert np.array_equal(D, expected)


def test_outer_annihilates_zero():
    assert np.array_equal(outer(np.array([1.0, 2.0, 3.0]), np.zeros(3)), np.zeros((3, 3)))


def test_outer_componentwise_oracle():
    a = np.array([1.0, 2.0, 3.0])
    b = np.array([4.0, 5.0, 6.0])
    D = outer(a, b)
    for i in range(3):
        for j in range(3):
            assert D[i, j] == a[i] * b[j]


def test_apply4_identity_and_zero():
    rng = np.random.default_rng(0)
    Z = rng.normal(size=(3, 3))
    assert np.allclose(apply4(identity4(), Z), Z, atol=1e-15)
    assert np.array_equal(apply4(np.zeros((3, 3, 3, 3)), Z), np.zeros((3, 3)))


def test_apply4_quadruple_loop_oracle():
    rng = np.random.default_rng(1)
    S4 = rng.normal(size=(3, 3, 3, 3))
    u = rng.normal(size=3)
    w = rng.normal(size=3)
    # acoustic-style contraction (S4[u (x) w]) w against explicit loops
    via_apply = apply4(S4, outer(u, w)) @ w
    expected = np.zeros(3)
    for i in range(3):
        for j in range(3):
            for h in range(3):
                for k in range(3):
                    expected[i] += S4[i, j, h, k] * u[h] * w[k] * w[j]
    assert np.allclose(via_apply, expected, atol=1e-13)


def test_bilinearity():
    rng = np.random.default_rng(2)
    for _ in range(20):
        a, b1, b2 = rng.normal(size=(3, 3))
        al, be = rng.normal(size=2)
        assert np.allclose(outer(a, al * b1 + be * b2),
                           al * outer(a, b1) + be * outer(a, b2), atol=1e-13)
        S4 = rng.normal(size=(3, 3, 3, 3))
        Z1 = rng.normal(size=(3, 3))
        Z2 = rng.normal(size=(3, 3))
        assert np.allclose(apply4(S4, al * Z1 + be * Z2),
                           al * apply4(S4, Z1) + be * apply4(S4, Z2), atol=1e-12)


def test_eig_sym_identity():
    evals, evecs = eig_sym(np.eye(3))
    assert np.allclose(evals, [1.0, 1.0, 1.0])
    assert np.allclose(evecs.T @ evecs, np.eye(3), atol=1e-12)


def test_eig_sym_diagonal():
    evals, _ = eig_sym(np.diag([4.0, 1.0, 1.0]))
    assert np.allclose(evals, [4.0, 1.0, 1.0])


def test_eig_sym_reconstruction_1000():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        A = rng.uniform(-1.0, 1.0, size=(3, 3))
        M = 0.5 * (A + A.T)
        evals, evecs = eig_sym(M)
        recon = sum(evals[i] * outer(evecs[:, i], evecs[:, i]) for i in range(3))
        assert np.abs(recon - M).max() <= 1e-10
        assert np.abs(evecs.T @ evecs - np.eye(3)).max() <= 1e-9
        assert evals[0] >= evals[1] >= evals[2]


def test_eig_sym_rejects_asymmetric():
    M = np.eye(3)
    M[0, 1] = 1e-3
    with pytest.raises(NotSymmetric):
        eig_sym(M)


def test_eig_general_zero_and_diagonal():
    evals, _ = eig_general(np.zeros((5, 5)))
    assert np.allclose(evals, 0.0)
    d = np.array([3.0, -1.0, 0.5, 7.0])
    evals, _ = eig_general(np.diag(d))
    assert np.allclose(sorted(evals.real), sorted(d))
    assert np.allclose(evals.imag, 0.0)


def test_eig_general_symmetric_gives_real():
    rng = np.random.default_rng(4)
    for _ in range(50):
        A = rng.normal(size=(6, 6))
        M = A + A.T
        evals, _ = eig_general(M)
        assert np.abs(evals.imag).max() <= 1e-10 * np.linalg.norm(M)


def test_eig_general_residual():
    rng = np.random.default_rng(5)
    for _ in range(20):
        M = rng.normal(size=(12, 12))
        evals, evecs = eig_general(M)
        scale = np.linalg.norm(M)
        for i in range(12):
            res = np.linalg.norm(M @ evecs[:, i] - evals[i] * evecs[:, i])
            assert res <= 1e-9 * scale


def test_eig_general_rejects_large_and_nonsquare():
    with pytest.raises(ValueError):
        eig_general(np.zeros((17, 17)))
    with pytest.raises(ValueError):
        eig_general(np.zeros((3, 4)))
