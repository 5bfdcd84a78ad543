import numpy as np
import pytest

from ddlocc.groups import so3_from_euler, su3_from_angles
from ddlocc.linalg import (BipartiteOperator, dd_residual, gram_operator,
                           marginals, min_eigenvalue)
from ddlocc.reference import (ANCHOR_EULER_ANGLES, ANCHOR_ROTATION,
                              ANCHOR_SU3_ANGLES, ANCHOR_UNITARY, DD_ANCHOR,
                              REAL_DD_ANCHOR, UNIQUE_BASIS_FRAME,
                              unique_basis_vectors)


def test_frame_gram_identity():
    G = UNIQUE_BASIS_FRAME
    target = DD_ANCHOR / 9 + np.eye(9) / 3
    assert np.max(np.abs(G.conj().T @ G - target)) <= 1e-14


def test_unique_basis_vectors_are_orthonormal():
    vecs = unique_basis_vectors()
    assert len(vecs) == 3 and all(v.size == 27 for v in vecs)
    G = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    assert np.max(np.abs(G - np.eye(3))) <= 1e-14


def test_gram_operator_reproduces_the_frame_identity():
    op = gram_operator(unique_basis_vectors())
    assert (op.dimA, op.dimB) == (3, 3)
    assert np.max(np.abs(op.matrix - UNIQUE_BASIS_FRAME.conj().T @ UNIQUE_BASIS_FRAME)) <= 1e-14
    # first diagonal block carries the squared column norms of the first group
    assert np.allclose(np.diag(op.block(0, 0)), [4 / 9, 1 / 3, 2 / 9], atol=1e-14)


def test_dd_anchor_is_a_dd_operator_with_zero_marginals():
    op = BipartiteOperator.from_matrix(DD_ANCHOR, 3, 3)
    assert np.max(np.abs(DD_ANCHOR - DD_ANCHOR.conj().T)) == 0
    assert dd_residual(DD_ANCHOR, 3) == 0
    m_a, m_b = marginals(op)
    assert np.max(np.abs(m_a)) == 0
    assert np.max(np.abs(m_b)) == 0
    assert np.array_equal(np.diag(op.block(0, 0)), [1, 0, -1])
    assert np.array_equal(np.diag(op.block(1, 1)), [0, -1, 1])
    assert np.array_equal(np.diag(op.block(2, 2)), [-1, 1, 0])


def test_dd_anchor_minimum_eigenvalue():
    # frozen from a dense eigensolve of the exact integer/i matrix
    assert min_eigenvalue(DD_ANCHOR) == pytest.approx(-2.8384692523971413, abs=1e-12)
    # the frame Gram operator itself is PSD with unit trace
    G = UNIQUE_BASIS_FRAME
    assert min_eigenvalue(G.conj().T @ G) >= -1e-14
    assert np.trace(G.conj().T @ G).real == pytest.approx(3.0, abs=1e-12)


def test_real_dd_anchor_structure():
    op = BipartiteOperator.from_matrix(REAL_DD_ANCHOR, 3, 3)
    assert np.array_equal(REAL_DD_ANCHOR, REAL_DD_ANCHOR.T)
    for i in range(3):
        for k in range(3):
            assert np.array_equal(op.block(i, k), op.block(i, k).T)
    m_a, m_b = marginals(op)
    assert np.max(np.abs(m_a)) == 0
    assert np.max(np.abs(m_b)) == 0
    assert dd_residual(REAL_DD_ANCHOR, 3) == 0


def test_anchor_unitary_is_the_chart_point():
    U = ANCHOR_UNITARY
    assert not np.iscomplexobj(U)
    assert np.max(np.abs(U.T @ U - np.eye(3))) <= 1e-15
    assert np.linalg.det(U) == pytest.approx(1.0, abs=1e-14)
    assert np.max(np.abs(su3_from_angles(ANCHOR_SU3_ANGLES) - U)) <= 1e-15


def test_anchor_rotation_is_the_chart_point():
    R = ANCHOR_ROTATION
    assert np.array_equal(R.T @ R, np.eye(3))
    assert np.linalg.det(R) == pytest.approx(1.0)
    assert np.max(np.abs(so3_from_euler(ANCHOR_EULER_ANGLES) - R)) <= 1e-15
