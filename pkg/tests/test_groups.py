import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ddlocc.groups import (EulerAngles, SU3Angles, expm_antihermitian,
                           expm_antisymmetric, finite_diff_jacobian,
                           nearest_monomial, random_special_orthogonal,
                           random_special_unitary, s4_enumerate, so3_matrix,
                           so3_tangent_basis, su3_from_angles, su3_matrix,
                           su3_tangent_basis)
from ddlocc.linalg import is_monomial

angles = st.floats(min_value=-8.0, max_value=8.0)


def in_su3(U, tol=1e-12):
    return (np.max(np.abs(U.conj().T @ U - np.eye(3))) <= tol
            and abs(np.linalg.det(U) - 1) <= tol)


@given(t1=angles, t2=angles, t3=angles, p1=angles, p2=angles)
@settings(max_examples=100, deadline=None)
def test_su3_chart_stays_in_group_everywhere(t1, t2, t3, p1, p2):
    # the raw chart is group-valued for arbitrary real arguments
    assert in_su3(su3_matrix(t1, t2, t3, p1, p2, 0.4, 1.7, p1 - p2), tol=1e-10)


@given(a=angles, b=angles, g=angles)
@settings(max_examples=100, deadline=None)
def test_so3_chart_stays_in_group_everywhere(a, b, g):
    R = so3_matrix(a, b, g)
    assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-12
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_chart_boundary_points_are_monomial():
    for t1 in (0.0, np.pi / 2):
        for t2 in (0.0, np.pi / 2):
            for t3 in (0.0, np.pi / 2):
                flag, _ = is_monomial(su3_matrix(t1, t2, t3, 0.3, 1.2, 0.7, 2.1, 0.9))
                assert flag


def test_angle_validation():
    with pytest.raises(ValueError):
        su3_from_angles(SU3Angles(-0.1, 0.2, 0.3))
    with pytest.raises(ValueError):
        su3_from_angles(SU3Angles(0.1, 0.2, 0.3, phi2=7.0))
    with pytest.raises(ValueError):
        EulerAngles(0.0, 3.5, 0.0).validate()
    a = SU3Angles(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)
    assert a.psi == pytest.approx(0.4 + 0.5 - 0.6 + 0.7 + 0.8)
    assert len(a.as_tuple()) == 8


def test_haar_samplers_are_deterministic_and_in_group():
    U1 = random_special_unitary(3, 7)
    U2 = random_special_unitary(3, 7)
    assert np.array_equal(U1, U2)
    assert in_su3(U1, tol=1e-10)
    R = random_special_orthogonal(11)
    assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-12
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)
    # a Generator may be passed instead of an integer seed
    gen = np.random.default_rng(7)
    assert np.array_equal(random_special_unitary(3, gen), U1)


def test_s4_enumeration():
    mats = s4_enumerate()
    assert len(mats) == 24
    keys = set()
    for W in mats:
        assert np.linalg.det(W) == pytest.approx(1.0)
        assert np.array_equal(np.abs(W) > 0.5, np.abs(W).astype(bool))
        assert is_monomial(W)[0]
        keys.add(tuple(np.round(W.ravel()).astype(int)))
    assert len(keys) == 24
    # closed under multiplication
    prod = mats[3] @ mats[17]
    assert any(np.allclose(prod, W) for W in mats)


def test_nearest_monomial_fixes_monomials():
    mono = np.zeros((3, 3), dtype=complex)
    mono[2, 0] = np.exp(0.4j)
    mono[0, 1] = np.exp(-0.9j)
    mono[1, 2] = np.exp(0.5j)
    mono[1, 2] *= np.exp(-1j * np.angle(np.linalg.det(mono)))  # det back to 1
    found, dist = nearest_monomial(mono)
    assert dist <= 1e-6
    assert np.allclose(found, mono, atol=1e-6)


@given(seed=st.integers(min_value=0, max_value=5000))
@settings(max_examples=10, deadline=None)
def test_nearest_monomial_distance_is_left_invariant(seed):
    U = random_special_unitary(3, seed)
    _, d0 = nearest_monomial(U)
    for W in s4_enumerate()[:4]:
        _, d1 = nearest_monomial(W @ U)
        assert d1 == pytest.approx(d0, abs=1e-6)


def test_finite_diff_jacobian_exact_on_linear_map(rng):
    A = rng.normal(size=(5, 4))
    J, sv = finite_diff_jacobian(lambda x: A @ x, np.zeros(4), 1e-4)
    assert np.allclose(J, A, atol=1e-9)
    assert np.allclose(sv, np.linalg.svd(A, compute_uv=False), atol=1e-9)


def test_tangent_bases_and_retractions(rng):
    su = su3_tangent_basis()
    assert len(su) == 8
    for i, A in enumerate(su):
        assert np.allclose(A, -A.conj().T)
        assert np.trace(A) == pytest.approx(0, abs=1e-14)
        for k, B in enumerate(su):
            ip = np.trace(A.conj().T @ B).real
            assert ip == pytest.approx(1.0 if i == k else 0.0, abs=1e-12)
    so = so3_tangent_basis()
    assert len(so) == 3
    coeffs = rng.normal(size=8)
    X = sum(c * A for c, A in zip(coeffs, su))
    assert in_su3(expm_antihermitian(X), tol=1e-12)
    Y = sum(c * A for c, A in zip(rng.normal(size=3), so))
    R = expm_antisymmetric(Y)
    assert np.max(np.abs(R.T @ R - np.eye(3))) <= 1e-12
    assert np.allclose(expm_antisymmetric(np.zeros((3, 3))), np.eye(3))
