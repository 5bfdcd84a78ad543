"""Dense linear algebra for block-partitioned Hermitian operators.

An operator on C^dimA (x) C^dimB is kept as its full square matrix together
with the block convention: block (i, k) is the dimB-square submatrix at rows
i*dimB:(i+1)*dimB, columns k*dimB:(k+1)*dimB (indices 0-based throughout).
"dd" means every diagonal block is itself a diagonal matrix; the dd-residual
is the Frobenius norm of everything in the diagonal blocks that violates it.
"""

import warnings
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
HERMITICITY_WARN = 1e-8


def as_blocks(M, dim_a, dim_b):
    """View a (dim_a*dim_b)-square matrix as a dim_a x dim_a grid of blocks.

    Returns an array of shape (dim_a, dim_a, dim_b, dim_b) with B[i, k] the
    (i, k) block.
    """
    return np.asarray(M).reshape(dim_a, dim_b, dim_a, dim_b).transpose(0, 2, 1, 3)


def from_blocks(B):
    """Inverse of as_blocks."""
    dim_a, _, dim_b, _ = B.shape
    return B.transpose(0, 2, 1, 3).reshape(dim_a * dim_b, dim_a * dim_b)


def hermitize(M):
    """Return (M + M^+)/2, warning if the asymmetry is large."""
    M = np.asarray(M)
    dev = np.max(np.abs(M - M.conj().T))
    if dev > HERMITICITY_WARN:
        warnings.warn(f"input symmetrized; Hermiticity deviation {dev:.3e}")
    return (M + M.conj().T) / 2


@dataclass
class BipartiteOperator:
    """Hermitian operator on a dimA x dimB system with block accessors."""

    dimA: int
    dimB: int
    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, M, dimA, dimB):
        M = np.asarray(M)
        if M.shape != (dimA * dimB, dimA * dimB):
            raise ValueError(f"matrix of order {M.shape} does not match {dimA}x{dimB}")
        if not np.all(np.isfinite(M)):
            raise ValueError("matrix entries must be finite")
        return cls(dimA, dimB, hermitize(M))

    def block(self, i, k):
        """The (i, k) block, 0-based."""
        b = self.dimB
        return self.matrix[i * b:(i + 1) * b, k * b:(k + 1) * b]

    def blocks(self):
        return as_blocks(self.matrix, self.dimA, self.dimB)

    @property
    def is_real(self):
        return np.max(np.abs(self.matrix.imag)) == 0 if np.iscomplexobj(self.matrix) else True


def marginals(op):
    """Both partial traces: (M_A)_ik = tr block(i,k); M_B = sum of diagonal blocks."""
    B = op.blocks() if isinstance(op, BipartiteOperator) else op
    m_a = np.einsum("ikaa->ik", B)
    m_b = np.einsum("iiab->ab", B)
    return m_a, m_b


def partial_transpose_B(op):
    """Transpose every block in place; an involution."""
    B = op.blocks().transpose(0, 1, 3, 2)
    return BipartiteOperator(op.dimA, op.dimB, from_blocks(B))


def _check_unitary(U, tol=HERMITICITY_TOL):
    U = np.asarray(U)
    dev = np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])))
    if dev > tol:
        raise ValueError(f"factor is not unitary (deviation {dev:.3e})")
    return U


def lu_conjugate(U, V, op):
    """(U (x) V) M (U (x) V)^+ for unitary local factors."""
    U = _check_unitary(U)
    V = _check_unitary(V)
    W = np.kron(U, V)
    out = W @ op.matrix @ W.conj().T
    return BipartiteOperator(op.dimA, op.dimB, out)


def dd_residual(M, dim_a):
    """Frobenius norm of the off-diagonal parts of all diagonal blocks."""
    B = as_blocks(M, dim_a, M.shape[0] // dim_a)
    total = 0.0
    for i in range(dim_a):
        D = B[i, i]
        total += np.sum(np.abs(D - np.diag(np.diag(D))) ** 2)
    return float(np.sqrt(total))


def is_dd(op, tol=1e-10):
    """Whether all diagonal blocks are diagonal, plus the residual."""
    r = dd_residual(op.matrix, op.dimA)
    return r <= tol, r


def is_monomial(U, tol=1e-8):
    """Detect a matrix with exactly one modulus-one entry per row and column.

    Returns (flag, permutation) where permutation[c] is the row carrying the
    big entry of column c (None when not monomial).
    """
    U = _check_unitary(U, tol=max(tol, HERMITICITY_TOL))
    A = np.abs(U)
    perm = np.argmax(A, axis=0)
    if len(set(perm.tolist())) != U.shape[0]:
        return False, None
    for c, r in enumerate(perm):
        if A[r, c] < 1 - tol:
            return False, None
        if np.sum(A[:, c]) - A[r, c] > U.shape[0] * tol:
            return False, None
        if np.sum(A[r, :]) - A[r, c] > U.shape[0] * tol:
            return False, None
    return True, perm


def gram_operator(vectors):
    """Gram operator of three vectors of C^3 (x) C^n, organised block-wise.

    With g_{j,b} the j-th Bob-block of input vector b, the output operator has
    (M_jk)_{ab} = <g_{j,a}|g_{k,b}>.  It is positive semidefinite, and its
    B-marginal equals I3 exactly when the inputs are orthonormal.
    """
    vectors = [np.asarray(v, dtype=complex).ravel() for v in vectors]
    m = len(vectors)
    if len({v.size for v in vectors}) != 1 or vectors[0].size % 3 != 0:
        raise ValueError("expected equally sized vectors on a 3 x n system")
    n = vectors[0].size // 3
    # frame with column m*j + b holding the Bob-block j of vector b
    F = np.empty((n, 3 * m), dtype=complex)
    for b, v in enumerate(vectors):
        for j in range(3):
            F[:, m * j + b] = v[n * j:n * (j + 1)]
    M = F.conj().T @ F
    return BipartiteOperator(3, m, hermitize(M))


def min_eigenvalue(op):
    """Smallest eigenvalue by a dense Hermitian eigensolver."""
    M = op.matrix if isinstance(op, BipartiteOperator) else np.asarray(op)
    return float(np.linalg.eigvalsh(M)[0])
