"""One-way discrimination protocols for three-dimensional subspaces of C^3 (x) C^n.

Given an orthonormal subspace basis, the Gram operator of its Bob-blocks is a
PSD 3 (x) 3 operator with identity B-marginal; a dd-certificate (U, V) for it
converts the basis into an executable protocol.  Alice measures in the basis
formed by the rows of U and announces her outcome j; the mixed codewords
(rows of conj(V) applied to the original basis) then leave Bob holding one of
three mutually orthogonal conditional vectors h_{j,c}, so a projective
measurement finishes the job.  Codeword c decomposes exactly as

    codeword_c = sum_j aliceBasis_j (x) h_{j,c},

which is the invariant everything else is audited against.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .linalg import gram_operator
from .solver import SolverOptions, solve_dd

EXACT_TOL = 1e-10
REORTH_TOL = 1e-6


@dataclass
class Subspace:
    """Orthonormal basis (rows) of a 3-dimensional subspace of C^3 (x) C^dimB."""

    dimA: int
    dimB: int
    basis: np.ndarray


def subspace_from_vectors(raw):
    """Gram-Schmidt the given three vectors (in order) into a Subspace."""
    raw = [np.asarray(v, dtype=complex).ravel() for v in raw]
    if len(raw) != 3 or raw[0].size % 3 != 0:
        raise ValueError("expected three vectors on a 3 x n system")
    n = raw[0].size // 3
    basis = []
    for v in raw:
        for b in basis:
            v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv < 1e-8:
            raise ValueError("vectors do not span a 3-dimensional subspace")
        basis.append(v / nv)
    return Subspace(3, n, np.array(basis))


@dataclass
class DiscriminationProtocol:
    aliceBasis: np.ndarray          # 3 orthonormal vectors (rows)
    codewords: np.ndarray           # 3 orthonormal subspace vectors (rows)
    bobConditional: list            # per Alice outcome: {"vectors": 3 x n, "completion": k x n}
    residual: float
    converged: bool = True
    certificate: object = None


def _completion(H):
    """Orthonormal basis (rows) of the orthogonal complement of the rows of H."""
    n = H.shape[1]
    rows = [h for h in H if np.linalg.norm(h) > EXACT_TOL]
    if not rows:
        return np.eye(n, dtype=complex)
    _, s, Vh = np.linalg.svd(np.array(rows))
    rank = int(np.sum(s > 1e-10 * s[0]))
    return Vh[rank:]


def build_protocol(S, opts=None):
    """Solve the Gram operator of the subspace and assemble the protocol."""
    opts = opts or SolverOptions()
    M = gram_operator(list(S.basis))
    cert = solve_dd(M, opts)
    U, V = cert.U, cert.V

    n = S.dimB
    frame = np.empty((n, 9), dtype=complex)
    for b in range(3):
        for j in range(3):
            frame[:, 3 * j + b] = S.basis[b][n * j:n * (j + 1)]
    transformed = frame @ np.kron(U, V).conj().T

    alice = np.array([U[j, :] for j in range(3)])
    codewords = np.array([
        np.sum([np.conj(V[c, b]) * S.basis[b] for b in range(3)], axis=0)
        for c in range(3)
    ])
    conditional = []
    for j in range(3):
        H = np.array([transformed[:, 3 * j + c] for c in range(3)])
        if EXACT_TOL < cert.residual <= REORTH_TOL:
            H = _reorthogonalize(H, cert.residual)
        conditional.append({"vectors": H, "completion": _completion(H)})
    return DiscriminationProtocol(
        aliceBasis=alice,
        codewords=codewords,
        bobConditional=conditional,
        residual=cert.residual,
        converged=cert.converged,
        certificate=cert,
    )


def _reorthogonalize(H, residual):
    """Nudge nearly orthogonal conditional vectors onto exact orthogonality."""
    norms = np.linalg.norm(H, axis=1)
    keep = norms > EXACT_TOL
    if keep.sum() < 2:
        return H
    A = H[keep]
    Q, R = np.linalg.qr(A.T)
    fixed = (Q * np.diag(R)).T  # keep lengths, drop cross terms
    pert = np.max(np.linalg.norm(fixed - A, axis=1))
    warnings.warn(f"conditional vectors re-orthogonalized (perturbation {pert:.2e}, "
                  f"protocol residual {residual:.2e})")
    out = H.copy()
    out[keep] = fixed
    return out


# ---------------------------------------------------------------------------
# simulation

def _decoder(p):
    """Per-outcome orthonormal measurement vectors with codeword clusters.

    Conditional vectors that are numerically parallel share a cluster and a
    single measurement vector; a click on it is decoded uniformly at random
    among the cluster's codewords.  Zero conditional vectors never occur as
    outcomes for their codeword and are excluded.
    """
    decoders = []
    for j in range(3):
        H = p.bobConditional[j]["vectors"]
        norms = np.linalg.norm(H, axis=1)
        clusters = []  # [(unit vector, [codewords])]
        for c in range(3):
            if norms[c] <= EXACT_TOL:
                continue
            u = H[c] / norms[c]
            for vec, members in clusters:
                if abs(np.vdot(vec, u)) >= 1 - 1e-8:
                    members.append(c)
                    break
            else:
                clusters.append((u, [c]))
        decoders.append(clusters)
    return decoders


def simulate(p, codeword, shots=None, seed=0):
    """Success probability of the protocol on one codeword.

    Exact mode (shots=None) propagates amplitudes through Alice's outcome
    distribution and Bob's projective decoder; shots mode samples the whole
    cascade with a generator derived from (seed, codeword).
    """
    c = int(codeword)
    decoders = _decoder(p)
    H = [p.bobConditional[j]["vectors"] for j in range(3)]
    qs = np.array([np.linalg.norm(H[j][c]) ** 2 for j in range(3)])
    qs = qs / qs.sum()

    if shots is None:
        success = 0.0
        for j in range(3):
            if qs[j] <= 0:
                continue
            state = H[j][c] / np.linalg.norm(H[j][c])
            for vec, members in decoders[j]:
                if c in members:
                    success += qs[j] * abs(np.vdot(vec, state)) ** 2 / len(members)
        return float(success)

    rng = np.random.default_rng([seed, c])
    hits = 0
    for _ in range(int(shots)):
        j = rng.choice(3, p=qs)
        state = H[j][c] / np.linalg.norm(H[j][c])
        probs = np.array([abs(np.vdot(vec, state)) ** 2 for vec, _ in decoders[j]])
        rest = max(0.0, 1.0 - probs.sum())
        outcome = rng.choice(len(probs) + 1, p=np.append(probs, rest) / (probs.sum() + rest))
        if outcome == len(probs):
            continue  # landed in the completion: no codeword decoded
        members = decoders[j][outcome][1]
        decoded = members[rng.integers(len(members))] if len(members) > 1 else members[0]
        hits += decoded == c
    return hits / int(shots)


# ---------------------------------------------------------------------------
# multipartite accounting

@dataclass
class MultipartiteReport:
    dims: list
    ebitsCost: float
    protocol: DiscriminationProtocol


def multipartite_reduce(dims, S, opts=None):
    """Regroup parties 2..n into one Bob and account the relocation cost.

    All but the last of the extra parties teleport their particles to the
    last one, which costs log2 of the product of their dimensions in ebits;
    the discrimination itself then runs on the induced bipartition.
    """
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != S.dimB:
        raise ValueError(f"party dimensions {dims} do not multiply to {S.dimB}")
    cost = float(np.sum([np.log2(d) for d in dims[:-1]])) if len(dims) > 1 else 0.0
    return MultipartiteReport(dims=dims, ebitsCost=cost, protocol=build_protocol(S, opts))
