"""Numeric audit suite for every computational fact the toolkit relies on.

Each check re-derives one ingredient independently of the code paths it backs:
the frame/anchor algebraic identity, finite-difference Jacobian certificates
at the two anchor points (numerical rank 64 for the complex chart, a robustly
nonzero 25x25 determinant for the real chart), the closed-form commutator
formulas in both charts against dense matrix arithmetic, the single-orbit
structure of the anchor target's solution set, and the dimension bookkeeping
of all the constrained operator spaces.  Reports carry the observed payloads
so failures are diagnosable from the artifact alone.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import matrix_balance

from .groups import (random_special_unitary, s4_enumerate, so3_matrix,
                     su3_matrix)
from .linalg import BipartiteOperator, dd_residual, lu_conjugate, marginals
from .reference import (ANCHOR_EULER_ANGLES, ANCHOR_SU3_ANGLES,
                        ANCHOR_UNITARY, DD_ANCHOR, REAL_DD_ANCHOR,
                        UNIQUE_BASIS_FRAME)
from .solver import orbit_equivalent, solve_from, DDCertificate
from .spaces import (dimension_counts, hermitian_basis, space_d00, space_d2,
                     space_m2)

CHECK_NAMES = (
    "frame-identity",
    "jacobian-rank-complex",
    "jacobian-det-real",
    "commutator-closed-forms",
    "real-commutator-closed-forms",
    "unique-orbit",
    "dimension-counts",
)


@dataclass
class VerificationReport:
    checkName: str
    passed: bool
    observed: dict
    expected: dict
    tolerance: float
    runtimeSeconds: float


def _report(name, passed, observed, expected, tol, t0):
    return VerificationReport(
        checkName=name, passed=bool(passed), observed=observed,
        expected=expected, tolerance=tol,
        runtimeSeconds=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# frame identity

def verify_frame_identity(tol=1e-12):
    """The unique-basis frame squares to anchor/9 + I/3, exactly."""
    t0 = time.perf_counter()
    G = UNIQUE_BASIS_FRAME
    gram = G.conj().T @ G
    dev = float(np.max(np.abs(gram - DD_ANCHOR / 9 - np.eye(9) / 3)))
    first_block = np.diag(gram[:3, :3]).real
    block_dev = float(np.max(np.abs(first_block - np.array([4, 3, 2]) / 9)))
    _, mB = marginals(BipartiteOperator(3, 3, gram))
    marg_dev = float(np.max(np.abs(mB - np.eye(3))))
    passed = dev <= tol and block_dev <= tol and marg_dev <= tol
    return _report(
        "frame-identity", passed,
        {"identityDeviation": dev, "firstBlockDiagDeviation": block_dev,
         "bMarginalDeviation": marg_dev},
        {"identityDeviation": 0.0}, tol, t0)


# ---------------------------------------------------------------------------
# Jacobian certificates

def _coords_hermitian(M, basis):
    return np.array([np.real(np.sum(np.conj(B) * M)) for B in basis])


def _central_jacobian(f, dim, step):
    cols = []
    for i in range(dim):
        e = np.zeros(dim)
        e[i] = step
        cols.append((f(e) - f(-e)) / (2 * step))
    return np.stack(cols, axis=1)


def verify_jacobian_rank_complex(step=1e-5):
    """Numerical rank of the local-conjugation map at the complex anchor.

    Coordinates: 8 + 8 chart angles centered on the anchor pair plus the 52
    directions of the trace-free dd cone; outputs in an orthonormal Hermitian
    basis of the 9x9 target.  Rank must be exactly 64 with a clean spectral
    gap, at the given step and at half the step.
    """
    t0 = time.perf_counter()
    a0 = np.array(ANCHOR_SU3_ANGLES.as_tuple())
    d00 = space_d00()
    basis9 = hermitian_basis(9)

    def f(x):
        U = su3_matrix(*(a0 + x[:8]))
        V = su3_matrix(*(a0 + x[8:16]))
        H = DD_ANCHOR + sum(c * B for c, B in zip(x[16:], d00))
        out = lu_conjugate(U, V, BipartiteOperator(3, 3, H))
        return _coords_hermitian(out.matrix, basis9)

    dim = 16 + len(d00)
    ranks, gaps = [], []
    for h in (step, step / 2):
        sv = np.linalg.svd(_central_jacobian(f, dim, h), compute_uv=False)
        svn = sv / sv[0]
        ranks.append(int(np.sum(svn > 1e-6)))
        gaps.append((float(svn[63]), float(svn[64])))
    passed = ranks[0] == 64 and ranks[1] == 64 and gaps[0][1] < 1e-8
    return _report(
        "jacobian-rank-complex", passed,
        {"rank": ranks[0], "rankHalfStep": ranks[1],
         "sv64": gaps[0][0], "sv65": gaps[0][1],
         "domainDim": dim, "step": step},
        {"rank": 64, "sv65Below": 1e-8}, 1e-6, t0)


def verify_jacobian_real(step=1e-5):
    """Determinant certificate for the 25x25 real-chart Jacobian.

    Domain: two Euler triples centered on the rotation anchor plus the 19
    directions of the real trace-free dd cone; outputs in coordinates of the
    25-dimensional block-symmetric space (conjugation stays inside it).  The
    determinant is evaluated after a similarity balancing pass and must clear
    1e-6 with a sign and order of magnitude stable under step halving.
    """
    t0 = time.perf_counter()
    e0 = np.array(ANCHOR_EULER_ANGLES.as_tuple())
    d2 = space_d2()
    m2 = space_m2()

    def f(x):
        X = so3_matrix(*(e0 + x[:3]))
        Y = so3_matrix(*(e0 + x[3:6]))
        H = REAL_DD_ANCHOR + sum(c * B for c, B in zip(x[6:], d2))
        out = lu_conjugate(X, Y, BipartiteOperator(3, 3, H)).matrix.real
        return np.array([np.sum(B * out) for B in m2])

    dets, signs = [], []
    small_sv = None
    for h in (step, step / 2):
        J = _central_jacobian(f, 25, h)
        balanced, _ = matrix_balance(J)
        sign, logdet = np.linalg.slogdet(balanced)
        dets.append(float(np.exp(logdet)))
        signs.append(float(sign))
        if small_sv is None:
            small_sv = float(np.linalg.svd(J, compute_uv=False)[-1])
    passed = (dets[0] > 1e-6 and dets[1] > 1e-6 and signs[0] == signs[1]
              and abs(np.log10(dets[0] / dets[1])) < 0.5)
    return _report(
        "jacobian-det-real", passed,
        {"absDet": dets[0], "absDetHalfStep": dets[1], "sign": signs[0],
         "smallestSingularValue": small_sv, "step": step},
        {"absDetAbove": 1e-6}, 1e-6, t0)


# ---------------------------------------------------------------------------
# commutator closed forms, complex chart

def _first_two_diag_blocks(U, anchor):
    rot = lu_conjugate(U, np.eye(anchor.shape[0] // 3, dtype=complex),
                       BipartiteOperator(3, anchor.shape[0] // 3, anchor))
    return rot.block(0, 0), rot.block(1, 1)


def verify_commutator_forms(samples=200, seed=0, tol=1e-9, identity_tol=1e-12):
    """Dense commutators of the first two conditional blocks vs closed forms.

    With D1, D2 the first two diagonal blocks of the one-sided conjugation of
    the dd anchor and S = [D1, D2]: the trace structure (s33 = 0, s22 = -s11)
    holds identically; s11 and several boundary specializations of s12, s13,
    s23 match explicit trigonometric formulas; and a phase-weighted
    combination of the entries of D1 D2 matches a closed form at all angles.
    Monomial chart points must commute exactly, and the anchor's diagonal
    blocks must each have the three distinct eigenvalues {-1, 0, 1}.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    w = {k: 0.0 for k in ("s33", "s22", "s11", "phaseCombo", "s13Special",
                          "s12Special", "s23Special", "s12Wall", "monomial")}

    def S_of(angles):
        D1, D2 = _first_two_diag_blocks(su3_matrix(*angles), DD_ANCHOR)
        return D1 @ D2 - D2 @ D1, D1 @ D2

    for _ in range(samples):
        t = rng.uniform(0, np.pi / 2, size=3)
        p = rng.uniform(0, 2 * np.pi, size=5)
        t1, t2, t3 = t
        p1, p2, p3, p4, p5 = p
        psi = p1 + p2 - p3 + p4 + p5
        S, R = S_of((*t, *p))
        w["s33"] = max(w["s33"], abs(S[2, 2]))
        w["s22"] = max(w["s22"], abs(S[1, 1] + S[0, 0]))
        form = 1.5j * np.cos(t1) ** 2 * np.sin(t1) * np.sin(2 * t2) * np.sin(2 * t3) * np.sin(psi)
        w["s11"] = max(w["s11"], abs(S[0, 0] - form))
        lhs = (np.sin(p1 - p4) * np.real(R[0, 1] - R[1, 0])
               + np.cos(p1 - p4) * np.imag(R[0, 1] + R[1, 0]))
        rhs = (-0.25 * np.cos(t1) * np.sin(2 * t1) * np.sin(2 * t3) * np.cos(psi)
               - np.sin(t1) * np.sin(2 * t3)
               * (1 - 3 * np.cos(t1) ** 2 * np.sin(t2) ** 2) * np.sin(psi))
        w["phaseCombo"] = max(w["phaseCombo"], abs(lhs - rhs))

        # boundary specializations reuse the same random phases
        S0, _ = S_of((0.0, 0.0, t3, *p))
        w["s13Special"] = max(w["s13Special"], abs(
            S0[0, 2] + np.sin(2 * t3) * np.exp(-1j * (p1 + p2 + p5))))
        S1, _ = S_of((0.0, t2, t3, *p))
        w["s12Special"] = max(w["s12Special"], abs(
            S1[0, 1] + np.sin(2 * t2) * np.cos(2 * t3) * np.exp(1j * (p4 - p1))))
        S2, _ = S_of((0.0, t2, np.pi / 4, *p))
        w["s23Special"] = max(w["s23Special"], abs(
            S2[1, 2] - 0.5 * np.sin(t2) * (1j - 2 * np.cos(t2) ** 2)
            * np.exp(-1j * (p2 + p4 + p5))))
        S3, _ = S_of((np.pi / 2, t2, t3, *p))
        wall = (np.sin(2 * t2) * np.cos(2 * t3) * np.exp(1j * (p4 - p1))
                + np.cos(t2) ** 2 * np.sin(2 * t3) * np.exp(-1j * (2 * p1 + p2 - p3 + p5))
                - np.sin(t2) ** 2 * np.sin(2 * t3) * np.exp(1j * (p2 - p3 + 2 * p4 + p5)))
        w["s12Wall"] = max(w["s12Wall"], abs(S3[0, 1] - wall))

    for t1 in (0.0, np.pi / 2):
        for t2 in (0.0, np.pi / 2):
            for t3 in (0.0, np.pi / 2):
                S, _ = S_of((t1, t2, t3, *rng.uniform(0, 2 * np.pi, size=5)))
                w["monomial"] = max(w["monomial"], float(np.max(np.abs(S))))

    anchor_eigs = [sorted(np.diag(DD_ANCHOR[3 * j:3 * j + 3, 3 * j:3 * j + 3]).real)
                   for j in range(3)]
    eig_dev = float(np.max(np.abs(np.array(anchor_eigs) - [-1.0, 0.0, 1.0])))

    identities = max(w["s33"], w["s22"], w["monomial"])
    forms = max(w["s11"], w["phaseCombo"], w["s13Special"], w["s12Special"],
                w["s23Special"], w["s12Wall"])
    passed = identities <= identity_tol and forms <= tol and eig_dev == 0.0
    obs = {k: float(v) for k, v in w.items()}
    obs["anchorEigDeviation"] = eig_dev
    obs["samples"] = samples
    return _report("commutator-closed-forms", passed, obs,
                   {"identitiesBelow": identity_tol, "formsBelow": tol}, tol, t0)


# ---------------------------------------------------------------------------
# commutator closed forms, real chart

def _real_coeff_matrix(b, g):
    cb, sb = np.cos(b), np.sin(b)
    cg, sg = np.cos(g), np.sin(g)
    return np.array([
        [2 * cb * cg * (3 - 2 * cg ** 2), sg * (2 * cb ** 2 * cg ** 2 - 5 * cb ** 2 + 2 * cg ** 2 + 1)],
        [2 * np.cos(2 * b) * np.sin(2 * g), cb * (6 * cb ** 2 * cg ** 2 - 5 * cb ** 2 - 2 * cg ** 2 + 3)],
        [2 * cb * sg * (1 + cg ** 2), cg * (cb ** 2 * cg ** 2 + 3 * cb ** 2 + cg ** 2 - 2)],
    ])


def verify_real_commutator_forms(samples=200, seed=0, tol=1e-9, grid=10_000):
    """Real-chart commutator equations, their rank-1 collapse, and positivity.

    The three independent entries of S = [D1, D2] for a rotated real anchor
    are linear in (cos 2a, sin 2a) with an explicit 3x2 coefficient matrix
    (after factoring sin(b) out of two of them).  Vanishing of S forces that
    matrix to have rank <= 1; eliminating the (1,3) minor gives a closed-form
    cos^2(b), the remaining (2,3) minor is a nonvanishing multiple of an even
    polynomial in cos(g), and that polynomial stays >= 1 because it rewrites
    as an explicitly positive expression.  Finally the chart boundary sweep
    must reproduce exactly the 24 signed permutations of determinant one.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    Z = REAL_DD_ANCHOR

    def S_of(a, b, g):
        D1, D2 = _first_two_diag_blocks(so3_matrix(a, b, g).astype(complex), Z)
        return (D1 @ D2 - D2 @ D1).real

    w_lin = 0.0
    for _ in range(samples):
        a, g = rng.uniform(0, 2 * np.pi, size=2)
        b = rng.uniform(0.1, np.pi - 0.1)
        S = S_of(a, b, g)
        sb = np.sin(b)
        lhs = np.array([S[0, 1] / sb, S[0, 2], -S[1, 2] / (2 * sb)])
        rhs = _real_coeff_matrix(b, g) @ np.array([np.cos(2 * a), np.sin(2 * a)])
        w_lin = max(w_lin, float(np.max(np.abs(lhs - rhs))))

    w_minor13, min_ratio = 0.0, np.inf
    for g in np.linspace(0.05, np.pi - 0.05, 400):
        c2b = (1 + 2 * np.sin(2 * g) ** 2) / (4 + np.sin(g) ** 2 + 2 * np.sin(2 * g) ** 2)
        b = np.arccos(np.sqrt(c2b))
        C = _real_coeff_matrix(b, g)
        w_minor13 = max(w_minor13, abs(C[0, 0] * C[2, 1] - C[0, 1] * C[2, 0]))
        minor23 = C[1, 0] * C[2, 1] - C[1, 1] * C[2, 0]
        poly = 2 + 3 * np.cos(g) ** 2 + 10 * np.cos(g) ** 4 - 14 * np.cos(g) ** 6
        min_ratio = min(min_ratio, abs(minor23 / poly))

    gg = np.linspace(0, 2 * np.pi, grid)
    c, s = np.cos(gg), np.sin(gg)
    lhs_poly = 2 + 3 * c ** 2 + 10 * c ** 4 - 14 * c ** 6
    rhs_poly = 1 + s ** 2 + np.sin(2 * gg) ** 2 + 14 * s ** 2 * c ** 4
    w_rewrite = float(np.max(np.abs(lhs_poly - rhs_poly)))
    grid_min = float(lhs_poly.min())

    sweep = set()
    for b in (0.0, np.pi / 2, np.pi):
        for a in np.arange(4) * np.pi / 2:
            for g in np.arange(4) * np.pi / 2:
                sweep.add(tuple(np.round(so3_matrix(a, b, g), 9).ravel()))
    ref = set(tuple(np.round(W, 9).ravel()) for W in s4_enumerate())
    sweep_ok = sweep == ref
    w_mono = max(float(np.max(np.abs(S_of(*abg)))) for abg in
                 [(a, b, g) for b in (0.0, np.pi / 2, np.pi)
                  for a in (0.0, np.pi / 2) for g in (0.0, np.pi / 2)])

    # the minor ratio legitimately decays toward the chart boundary (where
    # the monomial sweep takes over), so the bound is loose but nonzero
    passed = (w_lin <= tol and w_minor13 <= tol and min_ratio > 0.01
              and w_rewrite <= 1e-12 and grid_min >= 1.0 and sweep_ok
              and w_mono <= 1e-12)
    return _report(
        "real-commutator-closed-forms", passed,
        {"equationDeviation": w_lin, "minor13OnCurve": w_minor13,
         "minMinor23Ratio": float(min_ratio), "rewriteDeviation": w_rewrite,
         "polyGridMin": grid_min, "boundarySweepMatches": sweep_ok,
         "monomialCommutator": w_mono, "samples": samples},
        {"equationsBelow": tol, "polyGridMinAtLeast": 1.0,
         "boundarySweepMatches": True}, tol, t0)


# ---------------------------------------------------------------------------
# single-orbit solution set

def reference_anchor_certificate():
    """The hand-built certificate undoing the anchor pair on the anchor target."""
    U = ANCHOR_UNITARY.conj().T.astype(complex)
    return DDCertificate(U=U, V=U.copy(), residual=0.0, startsUsed=0,
                         objectiveTrace=[], converged=True)


def anchor_target():
    """The solved instance whose certificate set is one monomial-pair orbit."""
    return lu_conjugate(ANCHOR_UNITARY.astype(complex),
                        ANCHOR_UNITARY.astype(complex),
                        BipartiteOperator(3, 3, DD_ANCHOR))


def verify_unique_orbit(n_starts=100, seed=0, tol=1e-6, attempts=40):
    """All converged solves of the anchor target land in one certificate orbit.

    Each trial polishes fresh Haar-random starts until one converges (the
    anchor target has a competing critical basin at objective ~8.3e-2 that
    captures roughly two thirds of random starts, hence the retry budget) and
    compares the winner against the hand-built reference certificate up to
    monomial pairs.  Any inequivalent converged certificate fails the check;
    stalled starts are excluded from the comparison but counted.
    """
    t0 = time.perf_counter()
    target = anchor_target()
    ref = reference_anchor_certificate()
    ref_resid = dd_residual(lu_conjugate(ref.U, ref.V, target).matrix, 3)

    converged = equivalent = unconverged = stalled = 0
    for i in range(n_starts):
        cert = None
        for k in range(attempts):
            U0 = random_special_unitary(3, np.random.default_rng([seed, i, k]))
            trial = solve_from(target, U0)
            if trial.converged:
                cert = trial
                break
            stalled += 1
        if cert is None:
            unconverged += 1
            continue
        converged += 1
        equivalent += bool(orbit_equivalent(ref, cert, tol))
    passed = unconverged == 0 and equivalent == converged == n_starts
    return _report(
        "unique-orbit", passed,
        {"converged": converged, "equivalent": equivalent,
         "unconverged": unconverged, "stalledStarts": stalled,
         "referenceResidual": float(ref_resid)},
        {"equivalent": n_starts, "unconverged": 0}, tol, t0)


# ---------------------------------------------------------------------------
# dimensions

def verify_dimensions():
    """Nullspace dimensions of all the constraint systems, as exact integers."""
    t0 = time.perf_counter()
    d = dimension_counts()
    expected = {
        "m0": 72, "m00": 64, "d00": 52, "m2": 25, "d2": 19,
        "m00_3x4": 120, "d00_3x4": 96, "domain_3x3": 68, "domain_3x4": 119,
        "projective_domain_3x3": 67, "projective_target_3x3": 63,
    }
    closed_form = {n: (3 * n) ** 2 - n ** 2 - 9 + 1 for n in (3, 4)}
    obs = {k: int(d[k]) for k in expected}
    obs["closedFormM00"] = {str(n): closed_form[n] for n in closed_form}
    passed = (all(obs[k] == expected[k] for k in expected)
              and closed_form[3] == d["m00"] and closed_form[4] == d["m00_3x4"])
    return _report("dimension-counts", passed, obs, expected, 0.0, t0)


# ---------------------------------------------------------------------------
# suite

def run_check(name, seed=0, samples=200, n_starts=100):
    """Run one check by its registry name."""
    jobs = {
        "frame-identity": verify_frame_identity,
        "jacobian-rank-complex": verify_jacobian_rank_complex,
        "jacobian-det-real": verify_jacobian_real,
        "commutator-closed-forms": lambda: verify_commutator_forms(samples, seed),
        "real-commutator-closed-forms": lambda: verify_real_commutator_forms(samples, seed),
        "unique-orbit": lambda: verify_unique_orbit(n_starts, seed),
        "dimension-counts": verify_dimensions,
    }
    if name not in jobs:
        raise ValueError(f"unknown check {name!r}; choose from {CHECK_NAMES}")
    return jobs[name]()


def all_checks(seed=0, samples=200, n_starts=100, threads=1):
    """Run every check; order (and content, given the seed) is deterministic."""
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {name: pool.submit(run_check, name, seed, samples, n_starts)
                       for name in CHECK_NAMES}
            return [futures[name].result() for name in CHECK_NAMES]
    return [run_check(name, seed, samples, n_starts) for name in CHECK_NAMES]
