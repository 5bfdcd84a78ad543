import numpy as np
import pytest

from ddlocc.applications import (StinespringIsometry, entanglement_entropy,
                                 environment_assisted_protocol,
                                 environment_assisting_protocol,
                                 four_dim_counterexample, isometry_from_parts,
                                 qc_convert, random_isometry,
                                 span_min_entanglement)
from ddlocc.linalg import BipartiteOperator, marginals, min_eigenvalue
from ddlocc.protocol import simulate
from ddlocc.reference import unique_basis_vectors
from ddlocc.solver import SolverOptions


def test_isometry_validation(rng):
    with pytest.raises(ValueError):
        StinespringIsometry(3, 3, 3, np.ones((9, 3)))
    with pytest.raises(ValueError):
        StinespringIsometry(3, 3, 3, random_isometry(3, 12, rng))  # wrong dOut
    J = StinespringIsometry(3, 3, 4, random_isometry(3, 12, rng))
    assert np.max(np.abs(J.J.conj().T @ J.J - np.eye(3))) <= 1e-12


def test_random_isometry_is_seeded(rng):
    J1 = random_isometry(3, 12, np.random.default_rng(5))
    J2 = random_isometry(3, 12, np.random.default_rng(5))
    assert np.array_equal(J1, J2)
    assert np.max(np.abs(J1.conj().T @ J1 - np.eye(3))) <= 1e-12


def test_isometry_from_parts_reorders_axes():
    # a column that is (sys a) (x) (env b) in sys-major order must become
    # (env b) (x) (sys a) in the env-major convention
    a = np.array([1.0, 2.0, -1.0, 0.5])
    b = np.array([0.3, 1.0 + 0.2j])
    col = np.kron(a, b)  # sys-major
    Jraw = np.zeros((8, 1), dtype=complex)
    Jraw[:, 0] = col / np.linalg.norm(col)
    J = isometry_from_parts(1, 2, 4, Jraw, axisOrder=("sys", "env"))
    want = np.kron(b, a) / np.linalg.norm(col)
    assert np.allclose(J.J[:, 0], want)
    # env-major input passes through untouched
    J2 = isometry_from_parts(1, 2, 4, J.J, axisOrder=("env", "sys"))
    assert np.array_equal(J2.J, J.J)


def test_environment_assisted_on_a_trivial_embedding():
    # identity isometry: the environment index is perfectly readable, so the
    # three standard inputs are distinguished with certainty
    J = StinespringIsometry(9, 3, 3, np.eye(9, dtype=complex))
    rep = environment_assisted_protocol(J)
    assert rep.mode == "assisted"
    assert rep.bitsPerUse == pytest.approx(np.log2(3))
    assert rep.protocol.converged
    for s in rep.successes:
        assert s == pytest.approx(1.0, abs=1e-9)


def test_environment_assisted_random_isometry(rng):
    J = StinespringIsometry(3, 3, 4, random_isometry(3, 12, rng))
    rep = environment_assisted_protocol(J, opts=SolverOptions(maxStarts=50, seed=2))
    assert all(s == pytest.approx(1.0, abs=1e-9) for s in rep.successes)
    with pytest.raises(ValueError):
        environment_assisted_protocol(J, inputs=[np.eye(3)[0], np.eye(3)[0], np.eye(3)[1]])
    wrong = StinespringIsometry(3, 4, 3, random_isometry(3, 12, rng))
    with pytest.raises(ValueError):
        environment_assisted_protocol(wrong)


def test_environment_assisting_random_isometry(rng):
    J = StinespringIsometry(3, 5, 3, random_isometry(3, 15, rng))
    rep = environment_assisting_protocol(J, opts=SolverOptions(maxStarts=50, seed=2))
    assert rep.mode == "assisting"
    assert rep.bitsPerUse == pytest.approx(np.log2(3))
    assert all(s == pytest.approx(1.0, abs=1e-9) for s in rep.successes)
    wrong = StinespringIsometry(4, 3, 3, random_isometry(4, 9, rng))
    with pytest.raises(ValueError):
        environment_assisting_protocol(wrong)


def full_rank_state(seed):
    rng = np.random.default_rng(seed)
    W = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    rho = W @ W.conj().T
    return rho / np.trace(rho).real


def whiten_b_marginal(rho):
    """Rescale the B side so the B-marginal becomes exactly I/3."""
    op = BipartiteOperator.from_matrix(rho, 3, 3)
    _, mb = marginals(op)
    w, Q = np.linalg.eigh(mb)
    T = Q @ np.diag(1 / np.sqrt(3 * w)) @ Q.conj().T
    out = np.kron(np.eye(3), T) @ rho @ np.kron(np.eye(3), T).conj().T
    return (out + out.conj().T) / 2


def test_qc_convert_on_the_maximally_mixed_state():
    res = qc_convert(np.eye(9) / 9)
    assert res.classicalA
    assert res.generalizedClassicalB
    assert res.fullyClassical
    assert res.residual <= 1e-10
    assert not res.supportRestricted
    FF = res.F.conj().T @ res.F
    assert np.max(np.abs(FF - np.trace(FF) / 3 * np.eye(3))) <= 1e-8
    assert np.allclose(res.beta.matrix, np.eye(9) / 9, atol=1e-10)


def test_qc_convert_congruence_identity(rng):
    rho = full_rank_state(seed=8)
    res = qc_convert(rho)
    assert res.classicalA
    assert res.generalizedClassicalB
    assert res.residual <= 1e-8
    # each conditional block <a_j| rho |a_j> is F diag(D_j) F^+
    U = res.aliceBasis.conj()  # undo the stored orientation
    rot = np.kron(U, np.eye(3)) @ rho @ np.kron(U, np.eye(3)).conj().T
    for j in range(3):
        block = rot[3 * j:3 * j + 3, 3 * j:3 * j + 3]
        rebuilt = res.F @ np.diag(res.diagonals[j]) @ res.F.conj().T
        assert np.max(np.abs(block - rebuilt)) <= 1e-8
    # dephasing leaves a valid state that commutes with the pointer observable
    assert np.trace(res.beta.matrix).real == pytest.approx(1.0, abs=1e-10)
    assert min_eigenvalue(res.beta) >= -1e-10
    pointer = sum(j * np.kron(np.outer(res.aliceBasis[j], res.aliceBasis[j].conj()),
                              np.eye(3)) for j in range(3))
    comm = pointer @ res.beta.matrix - res.beta.matrix @ pointer
    assert np.max(np.abs(comm)) <= 1e-10


def test_qc_convert_flags_fully_classical_states():
    rho = whiten_b_marginal(full_rank_state(seed=21))
    res = qc_convert(rho)
    assert res.fullyClassical
    FF = res.F.conj().T @ res.F
    assert np.max(np.abs(FF - np.trace(FF) / 3 * np.eye(3))) <= 1e-8


def test_qc_convert_restricts_to_a_singular_support():
    psi = np.kron(np.eye(3)[0], np.eye(3)[0])
    rho = 0.9 * np.outer(psi, psi.conj()) + 0.1 * np.eye(9) / 9
    pure = np.outer(psi, psi.conj())
    with pytest.warns(UserWarning):
        res = qc_convert(pure)
    assert res.supportRestricted
    assert qc_convert(rho).supportRestricted is False


def test_qc_convert_rejects_non_states():
    with pytest.raises(ValueError):
        qc_convert(np.eye(9))  # trace 9
    bad = np.eye(9) / 9
    bad = bad.copy()
    bad[0, 0] = -0.1
    with pytest.raises(ValueError):
        qc_convert(bad)
    with pytest.raises(ValueError):
        qc_convert(np.eye(12) / 12)


def test_entanglement_entropy_extremes():
    prod = np.kron(np.eye(3)[1], np.eye(3)[2])
    assert entanglement_entropy(prod) == pytest.approx(0.0, abs=1e-12)
    bell3 = sum(np.kron(np.eye(3)[c], np.eye(3)[c]) for c in range(3)) / np.sqrt(3)
    assert entanglement_entropy(bell3) == pytest.approx(np.log2(3), abs=1e-12)
    bell2 = (np.kron(np.eye(2)[0], np.eye(2)[0]) + np.kron(np.eye(2)[1], np.eye(2)[1])) / np.sqrt(2)
    assert entanglement_entropy(bell2, dim_a=2) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        entanglement_entropy(2 * prod)
    with pytest.raises(ValueError):
        entanglement_entropy(np.ones(10) / np.sqrt(10))


def test_unique_basis_vectors_hold_about_1_53_ebits():
    ents = [entanglement_entropy(v) for v in unique_basis_vectors()]
    assert ents[0] == pytest.approx(1.530493057, abs=1e-8)
    for e in ents:
        assert 1.52 <= e <= 1.54


def test_span_min_finds_product_vectors_when_present(rng):
    gs = [rng.normal(size=4) + 1j * rng.normal(size=4) for _ in range(3)]
    basis = np.array([np.kron(np.eye(3)[c], g / np.linalg.norm(g))
                      for c, g in enumerate(gs)])
    val, coeff = span_min_entanglement(basis, budget=500, seed=0, refine=5)
    assert val <= 1e-6
    assert np.linalg.norm(coeff) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        span_min_entanglement(basis[:2])


def test_span_min_value_matches_its_witness():
    basis = np.array(unique_basis_vectors())
    val, coeff = span_min_entanglement(basis, budget=300, seed=1, refine=3)
    assert entanglement_entropy(coeff @ basis) == pytest.approx(val, abs=1e-9)
    assert 1.4 <= val <= 1.54


def test_four_dim_counterexample_shape():
    rep = four_dim_counterexample(seed=42, starts=2)
    assert (rep.dimDomain, rep.dimTarget) == (119, 120)
    assert rep.orthonormal
    assert not rep.certifying
    assert rep.residualFloor > 1e-3
    assert not rep.certificate.converged
    assert rep.epsilon == pytest.approx(0.6084, abs=2e-4)
    states = np.asarray(rep.states)
    assert states.shape == (4, 36)
    G = states @ states.conj().T
    assert np.max(np.abs(G - np.eye(4))) <= 1e-10
    K = rep.K
    assert (K.dimA, K.dimB) == (3, 4)
    assert min_eigenvalue(K) > 0.03
    _, mb = marginals(K)
    assert np.max(np.abs(mb - np.eye(4))) <= 1e-12
