"""Structured operator subspaces, built from explicit linear constraints.

Every space here is the kernel of a small set of linear functionals on the
Hermitian (or real symmetric) operators of order 3n: vanishing A/B marginals,
diagonal diagonal-blocks, per-block symmetry.  Orthonormal bases come from an
SVD nullspace of the stacked constraint matrix, so the dimensions are genuine
computations rather than hard-coded numbers.
"""

import numpy as np

from .linalg import as_blocks


def hermitian_basis(n):
    """Orthonormal basis (n^2 elements) of Hermitian n x n matrices."""
    out = []
    for i in range(n):
        E = np.zeros((n, n), dtype=complex)
        E[i, i] = 1
        out.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n), dtype=complex)
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            out.append(E)
            F = np.zeros((n, n), dtype=complex)
            F[i, j] = 1j / np.sqrt(2)
            F[j, i] = -1j / np.sqrt(2)
            out.append(F)
    return out


def symmetric_basis(n):
    """Orthonormal basis (n(n+1)/2 elements) of real symmetric matrices."""
    out = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1
        out.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            out.append(E)
    return out


def _real_parts(z):
    return [z.real, z.imag] if np.iscomplexobj(z) else [z]


def _constraint_rows(B, dim_a, dim_b, zero_a, zero_b, dd, blocks_symmetric):
    """Evaluate the selected linear functionals on one basis element."""
    rows = []
    if zero_b:
        MB = np.einsum("iiab->ab", B)
        for a in range(dim_b):
            for b in range(a, dim_b):
                rows += _real_parts(MB[a, b]) if b > a else [MB[a, b].real]
    if zero_a:
        MA = np.einsum("ikaa->ik", B)
        for a in range(dim_a):
            for b in range(a, dim_a):
                rows += _real_parts(MA[a, b]) if b > a else [MA[a, b].real]
    if dd:
        for i in range(dim_a):
            for a in range(dim_b):
                for b in range(a + 1, dim_b):
                    rows += _real_parts(B[i, i][a, b])
    if blocks_symmetric:
        for i in range(dim_a):
            for k in range(i, dim_a):
                D = B[i, k] - B[i, k].T
                for a in range(dim_b):
                    for b in range(a + 1, dim_b):
                        rows += _real_parts(D[a, b])
    return rows


def _nullspace_space(basis, dim_a, dim_b, **flags):
    C = np.array([
        _constraint_rows(as_blocks(B, dim_a, dim_b), dim_a, dim_b, **flags)
        for B in basis
    ]).T
    if C.size == 0:
        return list(basis)
    _, sv, Vt = np.linalg.svd(C)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0] if sv.size else 1.0)))
    null = Vt[rank:]
    return [sum(c * B for c, B in zip(row, basis)) for row in null]


def space_m0(dim_b=3):
    """Hermitian 3 (x) dim_b operators with vanishing B-marginal."""
    return _nullspace_space(hermitian_basis(3 * dim_b), 3, dim_b,
                            zero_a=False, zero_b=True, dd=False, blocks_symmetric=False)


def space_m00(dim_b=3):
    """Hermitian operators with both marginals vanishing."""
    return _nullspace_space(hermitian_basis(3 * dim_b), 3, dim_b,
                            zero_a=True, zero_b=True, dd=False, blocks_symmetric=False)


def space_d00(dim_b=3):
    """The dd part of space_m00: diagonal blocks additionally diagonal."""
    return _nullspace_space(hermitian_basis(3 * dim_b), 3, dim_b,
                            zero_a=True, zero_b=True, dd=True, blocks_symmetric=False)


def space_m2():
    """Real symmetric 3 (x) 3 operators, all blocks symmetric, marginals zero."""
    return _nullspace_space(symmetric_basis(9), 3, 3,
                            zero_a=True, zero_b=True, dd=False, blocks_symmetric=True)


def space_d2():
    """The dd part of space_m2."""
    return _nullspace_space(symmetric_basis(9), 3, 3,
                            zero_a=True, zero_b=True, dd=True, blocks_symmetric=True)


def dimension_counts():
    """All the dimension bookkeeping in one place (computed, then summarized)."""
    d = {
        "m0": len(space_m0()),
        "m00": len(space_m00()),
        "d00": len(space_d00()),
        "m2": len(space_m2()),
        "d2": len(space_d2()),
        "m00_3x4": len(space_m00(4)),
        "d00_3x4": len(space_d00(4)),
    }
    d["domain_3x3"] = 8 + 8 + d["d00"]
    d["domain_3x4"] = 8 + 15 + d["d00_3x4"]
    d["target_3x4"] = d["m00_3x4"]
    # quotienting the free monomial-pair action costs one global scale on the
    # operator side: projective domain/target for the 3x3 regularity argument
    d["projective_domain_3x3"] = d["domain_3x3"] - 1
    d["projective_target_3x3"] = d["m00"] - 1
    return d


def random_element(basis, rng):
    """Gaussian combination of a basis (a generic element of the span)."""
    c = rng.normal(size=len(basis))
    return sum(ci * Bi for ci, Bi in zip(c, basis))


def random_psd_identity_marginal(rng, dim_b=3):
    """Random PSD operator on C^3 (x) C^dim_b whose B-marginal is the identity.

    Draws K = P^+ P from a complex Gaussian P and whitens the B side, which
    keeps positivity and pins the sum of diagonal blocks to I exactly.
    """
    d = 3 * dim_b
    P = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    K = P.conj().T @ P
    KB = np.einsum("iiab->ab", as_blocks(K, 3, dim_b))
    w, Q = np.linalg.eigh(KB)
    T = (Q * (1 / np.sqrt(w))) @ Q.conj().T
    W = np.kron(np.eye(3), T)
    M = W @ K @ W.conj().T
    return (M + M.conj().T) / 2
