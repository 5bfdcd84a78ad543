"""Downstream constructions built on the dd-solver.

Four families live here: classical-capacity protocols for qutrit channels
assisted by (or assisting) their environment, conversion of two-qutrit states
to the quantum-classical boundary by simultaneous congruence of the Alice
blocks, entanglement entropy of pure bipartite vectors together with a seeded
minimizer over a three-dimensional span, and the explicit four-dimensional
family where the dd reduction runs out of parameters (domain dimension 119
against 120 equations) so the solver is expected to stall at a positive
residual floor.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .linalg import BipartiteOperator, hermitize, lu_conjugate, marginals
from .protocol import DiscriminationProtocol, Subspace, build_protocol, simulate
from .solver import DDCertificate, SolverOptions, solve_dd
from .spaces import random_element, space_d00, space_m00

ISOMETRY_TOL = 1e-10


# ---------------------------------------------------------------------------
# channel capacity protocols

@dataclass
class StinespringIsometry:
    """Isometry J : C^dIn -> C^dEnv (x) C^dSys with the environment first."""

    dIn: int
    dEnv: int
    dSys: int
    J: np.ndarray

    def __post_init__(self):
        self.J = np.asarray(self.J, dtype=complex)
        if self.J.shape != (self.dEnv * self.dSys, self.dIn):
            raise ValueError(f"isometry shape {self.J.shape} does not match "
                             f"({self.dEnv * self.dSys}, {self.dIn})")
        gap = np.max(np.abs(self.J.conj().T @ self.J - np.eye(self.dIn)))
        if gap > ISOMETRY_TOL:
            raise ValueError(f"J is not an isometry (J^*J deviates by {gap:.2e})")


def isometry_from_parts(dIn, dEnv, dSys, J, axisOrder=("env", "sys")):
    """Build a StinespringIsometry, permuting a sys-first matrix if needed."""
    J = np.asarray(J, dtype=complex)
    order = tuple(axisOrder)
    if order == ("env", "sys"):
        pass
    elif order == ("sys", "env"):
        J = np.stack([col.reshape(dSys, dEnv).T.ravel() for col in J.T], axis=1)
    else:
        raise ValueError(f"unknown axis order {axisOrder!r}")
    return StinespringIsometry(dIn, dEnv, dSys, J)


def random_isometry(dIn, dOut, rng):
    """Haar-random isometry C^dIn -> C^dOut (columns of a random unitary)."""
    Z = rng.standard_normal((dOut, dIn)) + 1j * rng.standard_normal((dOut, dIn))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@dataclass
class CapacityReport:
    mode: str                       # "assisted" or "assisting"
    bitsPerUse: float               # classical bits witnessed per channel use
    successes: list                 # exact success probability per codeword
    protocol: DiscriminationProtocol


def environment_assisted_protocol(J, inputs=None, opts=None):
    """Capacity witness for a channel with a measuring, reporting environment.

    Three orthonormal inputs are pushed through the isometry; the images span
    a 3-dim subspace of environment (x) system and the environment (= Alice)
    announces a measurement that leaves the system with orthogonal leftovers.
    Perfect discrimination of 3 symbols witnesses log2(3) classical bits.
    """
    if J.dEnv != 3:
        raise ValueError("environment-assisted mode needs a 3-dimensional environment")
    if inputs is None:
        if J.dIn < 3:
            raise ValueError("need dIn >= 3 for the default computational inputs")
        inputs = [np.eye(J.dIn)[:, i] for i in range(3)]
    inputs = [np.asarray(v, dtype=complex).ravel() for v in inputs]
    G = np.array([[np.vdot(a, b) for b in inputs] for a in inputs])
    if np.max(np.abs(G - np.eye(3))) > 1e-8:
        raise ValueError("inputs are not orthonormal")
    vecs = np.array([J.J @ v for v in inputs])
    p = build_protocol(Subspace(3, J.dSys, vecs), opts)
    succ = [simulate(p, c) for c in range(3)]
    return CapacityReport("assisted", float(np.log2(3)), succ, p)


def environment_assisting_protocol(J, opts=None):
    """Capacity of a qutrit channel whose output is measured first.

    The image of the isometry is reordered so the 3-dimensional system comes
    first (it plays Alice); the environment of any dimension plays Bob.  All
    three computational codewords come through, giving log2(dIn) bits.
    """
    if J.dIn != 3 or J.dSys != 3:
        raise ValueError("environment-assisting mode needs dIn = dSys = 3")
    vecs = np.array([(J.J[:, c]).reshape(J.dEnv, 3).T.ravel() for c in range(3)])
    p = build_protocol(Subspace(3, J.dEnv, vecs), opts)
    succ = [simulate(p, c) for c in range(3)]
    return CapacityReport("assisting", float(np.log2(3)), succ, p)


# ---------------------------------------------------------------------------
# quantum-classical boundary

@dataclass
class QCConversionResult:
    aliceBasis: np.ndarray          # rows: the dephasing basis on A
    beta: BipartiteOperator         # the A-dephased state
    F: np.ndarray                   # 3x3 invertible congruence frame
    diagonals: list                 # D1, D2, D3 (real vectors)
    residual: float                 # worst off-diagonal weight of F^-1 B_j F^-+
    classicalA: bool
    generalizedClassicalB: bool
    fullyClassical: bool
    supportRestricted: bool = False
    certificate: DDCertificate = None


def qc_convert(alpha, opts=None, tol=1e-8):
    """Dephase a two-qutrit state into (generalized) classical form.

    Whitening the B-marginal turns alpha into an operator with identity
    B-marginal; a dd-certificate (U, V) for it yields an Alice basis a_j
    (columns of U^+) such that every conditional block

        <a_j| alpha |a_j>  =  F D_j F^+,    F = alpha_B^(1/2) V^+,

    is congruent to a diagonal D_j through one shared frame F.  Dephasing in
    {a_j} is then harmless on A (classical there by construction) and the
    state is generalized-classical on B when the D_j are genuinely diagonal,
    i.e. when the congruence residual vanishes.
    """
    if not isinstance(alpha, BipartiteOperator):
        alpha = BipartiteOperator.from_matrix(alpha, 3, 3)
    if alpha.dimA != 3 or alpha.dimB != 3:
        raise ValueError("expected a two-qutrit state")
    evs = np.linalg.eigvalsh(alpha.matrix)
    if evs[0] < -1e-10:
        raise ValueError(f"state is not positive semidefinite (min eig {evs[0]:.2e})")
    if abs(np.trace(alpha.matrix).real - 1.0) > 1e-8:
        raise ValueError("state does not have unit trace")

    _, aB = marginals(alpha)
    w, Q = np.linalg.eigh(aB)
    support = w > 1e-10 * max(w[-1], 1e-300)
    restricted = not np.all(support)
    if restricted:
        warnings.warn("B-marginal is singular; converting on its support only")
    w_inv_h = np.where(support, 1.0 / np.sqrt(np.where(support, w, 1.0)), 0.0)
    T = Q @ np.diag(w_inv_h) @ Q.conj().T
    root = Q @ np.diag(np.sqrt(np.clip(w, 0, None))) @ Q.conj().T

    Mp = hermitize(np.kron(np.eye(3), T) @ alpha.matrix @ np.kron(np.eye(3), T).conj().T)
    cert = solve_dd(Mp, opts or SolverOptions())
    U, V = cert.U, cert.V

    alice = U.conj()                      # row j = column j of U^+
    F = root @ V.conj().T
    Finv = np.linalg.pinv(F) if restricted else np.linalg.inv(F)

    rotated = lu_conjugate(U, np.eye(3, dtype=complex), alpha)
    diagonals, resid = [], 0.0
    blocks = []
    for j in range(3):
        Ej = Finv @ rotated.block(j, j) @ Finv.conj().T
        off = Ej - np.diag(np.diag(Ej))
        resid = max(resid, float(np.linalg.norm(off)))
        diagonals.append(np.diag(Ej).real)
        blocks.append(rotated.block(j, j))

    # dephasing in the a_j basis keeps exactly the conditional blocks
    beta_m = np.zeros((9, 9), dtype=complex)
    for j in range(3):
        P = np.kron(np.outer(alice[j], alice[j].conj()), np.eye(3))
        beta_m += P @ alpha.matrix @ P
    beta = BipartiteOperator(3, 3, hermitize(beta_m))

    gB = resid <= tol and cert.converged
    fully = bool(gB and np.linalg.norm(aB - np.eye(3) / 3) <= tol)
    return QCConversionResult(
        aliceBasis=alice, beta=beta, F=F, diagonals=diagonals,
        residual=resid, classicalA=True, generalizedClassicalB=bool(gB),
        fullyClassical=fully, supportRestricted=restricted, certificate=cert,
    )


# ---------------------------------------------------------------------------
# entanglement

def entanglement_entropy(psi, dim_a=3):
    """Entropy (base 2) of the reduced operator of a pure bipartite vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.size % dim_a != 0:
        raise ValueError(f"vector of size {psi.size} is not bipartite over dim_a={dim_a}")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"vector is not normalized (norm {nrm!r})")
    A = psi.reshape(dim_a, -1)
    lam = np.linalg.eigvalsh(A @ A.conj().T)
    lam = np.clip(lam, 0.0, 1.0)
    lam = lam[lam > 1e-300]
    return float(-np.sum(lam * np.log2(lam)))


def _span_entropy(coeff, basis):
    c = coeff / np.linalg.norm(coeff)
    return entanglement_entropy(c @ basis)


def span_min_entanglement(basis, budget=10_000, seed=0, refine=10):
    """Smallest entanglement entropy found on the unit sphere of a 3-dim span.

    Seeded uniform sampling of coefficient vectors (the basis elements are
    always included as candidates) followed by simplex refinement of the best
    few.  The result is an upper bound on the true minimum.
    """
    basis = np.asarray(basis, dtype=complex)
    if basis.shape[0] != 3:
        raise ValueError("expected three basis vectors")
    rng = np.random.default_rng(seed)
    cands = rng.standard_normal((int(budget), 3)) + 1j * rng.standard_normal((int(budget), 3))
    cands = np.vstack([np.eye(3, dtype=complex), cands])
    vals = np.array([_span_entropy(c, basis) for c in cands])
    order = np.argsort(vals)

    def objective(x):
        c = x[:3] + 1j * x[3:]
        n = np.linalg.norm(c)
        if n < 1e-12:
            return np.log2(3.0)
        return _span_entropy(c, basis)

    best_val, best_c = float(vals[order[0]]), cands[order[0]]
    for idx in order[:max(1, int(refine))]:
        c0 = cands[idx]
        res = minimize(objective, np.concatenate([c0.real, c0.imag]),
                       method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 4000})
        if res.fun < best_val:
            best_val = float(res.fun)
            best_c = res.x[:3] + 1j * res.x[3:]
    best_c = best_c / np.linalg.norm(best_c)
    return best_val, best_c


# ---------------------------------------------------------------------------
# the 3 (x) 4 wall

@dataclass
class FourDimReport:
    dimDomain: int
    dimTarget: int
    K: BipartiteOperator
    epsilon: float
    states: np.ndarray              # rows: four vectors of C^3 (x) C^12
    orthonormal: bool
    residualFloor: float
    certifying: bool = False        # a positive floor is evidence, not proof
    certificate: DDCertificate = None


def four_dim_counterexample(seed=42, starts=100, opts=None):
    """Build the 3 (x) 4 family where parameter counting blocks the dd form.

    The group action plus the trace-free dd cone supply 8 + 15 + 96 = 119
    parameters against a 120-dimensional space of targets, so a generic
    perturbation of the maximally mixed operator should admit no dd form at
    all.  We draw one such perturbation (kept PSD by an explicit margin),
    turn its factorization into four orthonormal states, and record the best
    residual a full multistart solve can reach.
    """
    d00 = len(space_d00(dim_b=4))
    m00 = len(space_m00(dim_b=4))
    dim_domain = 8 + 15 + d00
    dim_target = m00

    rng = np.random.default_rng(seed)
    K0 = random_element(space_m00(dim_b=4), rng)
    K0 = K0 / np.linalg.norm(K0)
    floor_eig = float(np.linalg.eigvalsh(K0)[0])
    eps = 0.9 * (1.0 / 3.0) / abs(floor_eig)
    K = hermitize(np.eye(12) / 3 + eps * K0)

    w, Q = np.linalg.eigh(K)
    P = np.diag(np.sqrt(np.clip(w, 0, None))) @ Q.conj().T
    states = np.zeros((4, 36), dtype=complex)
    for c in range(4):
        for j in range(3):
            states[c, 12 * j:12 * (j + 1)] = P[:, 4 * j + c]
    gram = states @ states.conj().T
    ortho = bool(np.max(np.abs(gram - np.eye(4))) <= 1e-10)

    opts = opts or SolverOptions(maxStarts=starts, seed=seed)
    cert = solve_dd(BipartiteOperator(3, 4, K), opts)
    return FourDimReport(
        dimDomain=int(dim_domain), dimTarget=int(dim_target),
        K=BipartiteOperator(3, 4, K), epsilon=float(eps), states=states,
        orthonormal=ortho, residualFloor=float(cert.residual),
        certificate=cert,
    )
