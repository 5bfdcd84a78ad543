"""Two-stage search for local factors (U, V) making an operator dd.

Stage one minimizes the pairwise commutator norm of the diagonal blocks of
(U (x) I) M (U (x) I)^+ over the Alice factor alone: multistart descent along
geodesics of SU(3) (or SO(3)) with an analytic gradient and a warm-started
Armijo line search, finished by a Gauss-Newton polish of the commutator
residual system.  Once the blocks commute, stage two computes the Bob-side
mixing V by Jacobi joint diagonalization.  The certificate's residual is the
dd-residual of the fully conjugated operator, recomputed from scratch.

The objective is invariant under left monomial multiplication of U (the
blocks get permuted and rephased), so monomial starting points collapse to
the identity start; the deterministic seeds are therefore the identity plus
a short fixed list of interior chart points, with Haar samples after that.
Per-block phase rotations of U never change the objective either, which
leaves two flat directions through every optimum — the Gauss-Newton step
removes them with a relative cutoff on the normal equations.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .groups import (
    expm_antihermitian,
    expm_antisymmetric,
    nearest_monomial,
    random_special_orthogonal,
    random_special_unitary,
    so3_matrix,
    so3_tangent_basis,
    su3_matrix,
    su3_tangent_basis,
)
from .linalg import BipartiteOperator, as_blocks, dd_residual, hermitize


@dataclass
class SolverOptions:
    maxStarts: int = 50
    maxIters: int = 250
    tolResidual: float = 1e-8
    tolGradient: float = 1e-10
    seed: int = 0
    realMode: bool = False

    def __post_init__(self):
        if self.tolResidual <= 0:
            raise ValueError("tolResidual must be positive")
        if self.maxStarts < 1:
            raise ValueError("maxStarts must be at least 1")


@dataclass
class DDCertificate:
    """Local factors with the dd-residual they achieve on the certified operator."""

    U: np.ndarray
    V: np.ndarray
    residual: float
    startsUsed: int
    objectiveTrace: list = field(default_factory=list)
    converged: bool = True


# ---------------------------------------------------------------------------
# stage one: commutator objective over the Alice factor

def _diag_blocks(Mb, U):
    """Diagonal blocks of (U (x) I) M (U (x) I)^+ from the block view Mb."""
    return np.einsum("pk,pl,klab->pab", U, U.conj(), Mb)


def _objective(Mb, U):
    D = _diag_blocks(Mb, U)
    m = D.shape[0]
    total = 0.0
    for p in range(m):
        for q in range(p + 1, m):
            C = D[p] @ D[q] - D[q] @ D[p]
            total += np.sum(np.abs(C) ** 2)
    return float(total)


def _objective_and_gradient(Mb, U):
    """Objective plus its Euclidean gradient in the ambient matrix space.

    Writing D_p for the diagonal blocks and C_pq for their commutators, the
    derivative collects W_p = -sum_q [D_q, C_pq] (Hermitian), and then
    E_pk = 2 sum_l U_pl tr(W_p M_lk).
    """
    D = _diag_blocks(Mb, U)
    m = D.shape[0]
    F = 0.0
    W = np.zeros_like(D)
    for p in range(m):
        for q in range(p + 1, m):
            C = D[p] @ D[q] - D[q] @ D[p]
            F += np.sum(np.abs(C) ** 2)
            W[p] -= D[q] @ C - C @ D[q]
            W[q] += D[p] @ C - C @ D[p]
    T = np.einsum("pab,klba->pkl", W, Mb)
    E = 2 * np.einsum("pl,plk->pk", U, T)
    return float(F), E


def commutator_objective(U, M):
    """Sum of squared Frobenius norms of all pairwise diagonal-block commutators."""
    if isinstance(M, BipartiteOperator):
        Mb = as_blocks(M.matrix.astype(complex), M.dimA, M.dimB)
    else:
        M = np.asarray(M)
        Mb = as_blocks(M.astype(complex), 3, M.shape[0] // 3)
    return _objective(Mb, np.asarray(U, dtype=complex))


def _tangent_step(U, E, real):
    """Project the Euclidean gradient onto the tangent space at U."""
    if real:
        X = U.T @ E.real
        return 0.5 * (X - X.T)
    X = U.conj().T @ E
    K = 0.5 * (X - X.conj().T)
    return K - np.trace(K) / 3 * np.eye(3)


def _retract(U, A, real):
    return U @ (expm_antisymmetric(A) if real else expm_antihermitian(A))


def _descend(Mb, U, opts, real, f_switch=1e-9):
    """Armijo descent along geodesics with a warm-started, uncapped step."""
    F, E = _objective_and_gradient(Mb, U)
    trace = [F]
    t = 1.0
    for _ in range(opts.maxIters):
        K = _tangent_step(U, E, real)
        g2 = float(np.sum(np.abs(K) ** 2))
        if F < f_switch or g2 < opts.tolGradient ** 2:
            break
        t *= 2.5  # warm start: grow until the sufficient-decrease test bites
        accepted = False
        for _ in range(60):
            Unew = _retract(U, -t * K, real)
            Fnew = _objective(Mb, Unew)
            if Fnew <= F - 1e-4 * t * 2 * g2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        U = Unew
        F, E = _objective_and_gradient(Mb, U)
        trace.append(F)
    return U, F, trace


def _commutator_residual_vector(Mb, U):
    """All pairwise commutators flattened to a real vector (the GN system)."""
    D = _diag_blocks(Mb, U)
    m = D.shape[0]
    parts = []
    for p in range(m):
        for q in range(p + 1, m):
            C = D[p] @ D[q] - D[q] @ D[p]
            parts += [C.real.ravel(), C.imag.ravel()]
    return np.concatenate(parts)


def _polish(Mb, U, real, iters=8, h=1e-6, rcond=1e-6):
    """Gauss-Newton on the commutator system in tangent coordinates.

    rcond cuts the two singular directions coming from the per-block phase
    symmetry of the objective; anything much tighter lets those noise modes
    blow up the step.
    """
    basis = so3_tangent_basis() if real else su3_tangent_basis()
    for _ in range(iters):
        r0 = _commutator_residual_vector(Mb, U)
        f0 = r0 @ r0
        if f0 < 1e-28:
            break
        J = np.empty((r0.size, len(basis)))
        for k, A in enumerate(basis):
            rp = _commutator_residual_vector(Mb, _retract(U, h * A, real))
            rm = _commutator_residual_vector(Mb, _retract(U, -h * A, real))
            J[:, k] = (rp - rm) / (2 * h)
        d, *_ = np.linalg.lstsq(J, -r0, rcond=rcond)
        Unew = _retract(U, sum(di * Ai for di, Ai in zip(d, basis)), real)
        r1 = _commutator_residual_vector(Mb, Unew)
        if r1 @ r1 < f0:
            U = Unew
        else:
            break
    return U


# ---------------------------------------------------------------------------
# stage two: joint diagonalization of the (near-)commuting blocks

def _jacobi_sweeps(mats, tol=1e-14, max_sweeps=60):
    """Jacobi joint diagonalization; returns V with V^+ A V jointly diagonal."""
    A = [np.array(m, dtype=complex) for m in mats]
    n = A[0].shape[0]
    V = np.eye(n, dtype=complex)
    for _ in range(max_sweeps):
        moved = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                # closed-form best rotation for the (i, j) plane
                Gq = np.zeros((3, 3))
                for M in A:
                    u = np.array([(M[i, i] - M[j, j]).real,
                                  2 * M[i, j].real, 2 * M[i, j].imag])
                    Gq += np.outer(u, u)
                w, Q = np.linalg.eigh(Gq)
                v = Q[:, -1]
                if v[0] < 0:
                    v = -v
                c = np.sqrt((v[0] + 1) / 2)
                s = (v[1] - 1j * v[2]) / (2 * c)
                if abs(s) < tol:
                    continue
                moved = max(moved, abs(s))
                R = np.eye(n, dtype=complex)
                R[i, i] = c
                R[i, j] = np.conj(s)
                R[j, i] = -s
                R[j, j] = c
                A = [R @ M @ R.conj().T for M in A]
                V = V @ R.conj().T
        if moved < tol:
            break
    return V, A


def _canonicalize(V, A):
    """Deterministic column order and phases for the diagonalizer.

    Columns are sorted by the diagonal of the first matrix, then the second;
    each column's first sizable entry is made real positive, and the last
    column absorbs the leftover determinant phase so det V stays 1.
    """
    d1 = np.diag(A[0]).real
    d2 = np.diag(A[1]).real if len(A) > 1 else np.zeros_like(d1)
    order = np.lexsort((d2, d1))
    V = V[:, order]
    for c in range(V.shape[1]):
        k = np.argmax(np.abs(V[:, c]))
        ph = V[k, c] / abs(V[k, c])
        V[:, c] = V[:, c] * np.conj(ph)
    det = np.linalg.det(V)
    V[:, -1] = V[:, -1] * np.conj(det)
    return V


def joint_diagonalize(A1, A2, A3, tol=1e-14):
    """Unitary V minimizing the joint off-diagonal weight of V^+ Ai V.

    Exact when the inputs commute; on commuting inputs with distinct spectra
    the result is unique up to monomial factors, which the canonical ordering
    pins down.
    """
    V, A = _jacobi_sweeps([A1, A2, A3], tol=tol)
    return _canonicalize(V, [V.conj().T @ np.asarray(M, complex) @ V for M in (A1, A2, A3)])


def _offdiag_weight(mats):
    total = 0.0
    for M in mats:
        total += np.sum(np.abs(M - np.diag(np.diag(M))) ** 2)
    return float(np.sqrt(total))


# ---------------------------------------------------------------------------
# multistart driver

_GRID_SU3 = (
    (np.pi / 4, np.pi / 4, np.pi / 4, 0, 0, 0, 0, 0),
    (np.pi / 8, np.pi / 4, 3 * np.pi / 8, 0, 0, 0, 0, 0),
    (3 * np.pi / 8, np.pi / 8, np.pi / 4, np.pi / 4, np.pi / 4, np.pi / 4, np.pi / 4, np.pi / 4),
)

_GRID_EULER = (
    (np.pi / 4, np.pi / 4, np.pi / 4),
    (np.pi / 3, 2 * np.pi / 3, np.pi / 6),
    (3 * np.pi / 2, np.pi / 3, np.pi / 4),
)


def _start_point(s, opts, real):
    if s == 0:
        return np.eye(3) if real else np.eye(3, dtype=complex)
    if s <= len(_GRID_SU3):
        if real:
            return so3_matrix(*_GRID_EULER[s - 1])
        return su3_matrix(*_GRID_SU3[s - 1])
    rng = np.random.default_rng([opts.seed, s])
    return random_special_orthogonal(rng) if real else random_special_unitary(3, rng)


def _run_start(Mb, s, opts, real):
    return _run_from(Mb, _start_point(s, opts, real), opts, real)


def _run_from(Mb, U, opts, real):
    U, _, trace = _descend(Mb, U if real else U.astype(complex), opts, real)
    U = _polish(Mb, U, real)
    D = _diag_blocks(Mb, U)
    Vd, Ad = _jacobi_sweeps(list(D))
    Vd = _canonicalize(Vd, Ad)
    resid = _offdiag_weight([Vd.conj().T @ Dp @ Vd for Dp in D])
    return resid, U, Vd.conj().T, trace


def _solve(M, dim_a, dim_b, opts, real, threads=1):
    sc = float(np.linalg.norm(M)) or 1.0
    Mb = as_blocks((M if real else M.astype(complex)) / sc, dim_a, dim_b)

    results = {}

    def winner():
        converged = [s for s, r in results.items() if r[0] * sc <= opts.tolResidual]
        return min(converged) if converged else None

    if threads > 1:
        pending = list(range(opts.maxStarts))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            while pending and winner() is None:
                batch, pending = pending[:threads], pending[threads:]
                for s, out in zip(batch, pool.map(
                        lambda s: _run_start(Mb, s, opts, real), batch)):
                    results[s] = out
    else:
        for s in range(opts.maxStarts):
            results[s] = _run_start(Mb, s, opts, real)
            if winner() is not None:
                break

    sel = winner()
    if sel is None:
        sel = min(results, key=lambda s: (results[s][0], s))
    _, U, V, trace = results[sel]

    if real:
        U, V = U.real, V.real
    final = np.kron(U, V) @ M @ np.kron(U, V).conj().T
    residual = dd_residual(final, dim_a)
    return DDCertificate(
        U=U,
        V=V,
        residual=residual,
        startsUsed=sel + 1,
        objectiveTrace=[f * sc * sc for f in trace],
        converged=residual <= opts.tolResidual,
    )


def solve_dd(M, opts=None, threads=1):
    """Find (U, V) making M a dd-matrix; returns the best certificate found.

    M is a BipartiteOperator (any Bob dimension with three Alice blocks) or a
    plain Hermitian 9x9 array.  An unconverged search is reported in the
    certificate, not raised: some operators outside the guaranteed regime
    genuinely have no dd form.
    """
    opts = opts or SolverOptions()
    if isinstance(M, BipartiteOperator):
        dim_a, dim_b, mat = M.dimA, M.dimB, M.matrix
    else:
        mat = hermitize(np.asarray(M))
        dim_a, dim_b = 3, mat.shape[0] // 3
    return _solve(mat, dim_a, dim_b, opts, real=False, threads=threads)


def solve_dd_real(M, opts=None, threads=1):
    """Real variant over SO(3) x SO(3) for symmetric operators with symmetric blocks."""
    opts = opts or SolverOptions(realMode=True)
    if isinstance(M, BipartiteOperator):
        mat = M.matrix.real if np.iscomplexobj(M.matrix) else M.matrix
    else:
        mat = np.asarray(M)
        mat = mat.real if np.iscomplexobj(mat) else mat
        mat = (mat + mat.T) / 2.0
    return _solve(mat, 3, mat.shape[0] // 3, opts, real=True, threads=threads)


def solve_from(M, U_init, opts=None, realMode=False):
    """Single-start variant: run both stages from a caller-chosen initial U."""
    opts = opts or SolverOptions(maxStarts=1, realMode=realMode)
    if isinstance(M, BipartiteOperator):
        dim_a, dim_b, mat = M.dimA, M.dimB, M.matrix
    else:
        mat = np.asarray(M)
        dim_a, dim_b = 3, mat.shape[0] // 3
    if realMode:
        mat = mat.real if np.iscomplexobj(mat) else mat
    sc = float(np.linalg.norm(mat)) or 1.0
    Mb = as_blocks((mat if realMode else mat.astype(complex)) / sc, dim_a, dim_b)
    _, U, V, trace = _run_from(Mb, np.asarray(U_init), opts, realMode)
    if realMode:
        U, V = U.real, V.real
    W = np.kron(U, V)
    residual = dd_residual(W @ mat @ W.conj().T, dim_a)
    return DDCertificate(U=U, V=V, residual=residual, startsUsed=1,
                         objectiveTrace=[f * sc * sc for f in trace],
                         converged=residual <= opts.tolResidual)


def orbit_equivalent(c1, c2, tol=1e-6):
    """Whether two certificates of the same operator differ by monomial factors.

    Certificates of a fixed operator form left monomial cosets, so the test
    is that c2.U c1.U^+ and c2.V c1.V^+ are both within tol of a monomial.
    """
    _, du = nearest_monomial(np.asarray(c2.U) @ np.asarray(c1.U).conj().T)
    if du > tol:
        return False
    _, dv = nearest_monomial(np.asarray(c2.V) @ np.asarray(c1.V).conj().T)
    return dv <= tol
