"""Charts, Haar sampling and monomial machinery for SU(3) and SO(3).

The SU(3) chart uses three polar angles and five phases; the SO(3) chart uses
z-x-z style Euler angles.  Both chart formulas stay in the group for *any*
real arguments, so the raw functions double as local charts for
finite-difference work; the dataclass wrappers enforce the nominal ranges.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize


@dataclass
class SU3Angles:
    theta1: float
    theta2: float
    theta3: float
    phi1: float = 0.0
    phi2: float = 0.0
    phi3: float = 0.0
    phi4: float = 0.0
    phi5: float = 0.0

    def validate(self):
        for t in (self.theta1, self.theta2, self.theta3):
            if not 0 <= t <= np.pi / 2:
                raise ValueError(f"polar angle {t} outside [0, pi/2]")
        for p in (self.phi1, self.phi2, self.phi3, self.phi4, self.phi5):
            if not 0 <= p <= 2 * np.pi:
                raise ValueError(f"phase {p} outside [0, 2*pi]")

    @property
    def psi(self):
        # combined phase governing when the anchor's diagonal blocks commute
        return self.phi1 + self.phi2 - self.phi3 + self.phi4 + self.phi5

    def as_tuple(self):
        return (self.theta1, self.theta2, self.theta3,
                self.phi1, self.phi2, self.phi3, self.phi4, self.phi5)


@dataclass
class EulerAngles:
    alpha: float
    beta: float
    gamma: float

    def validate(self):
        if not 0 <= self.beta <= np.pi:
            raise ValueError(f"beta {self.beta} outside [0, pi]")
        for p in (self.alpha, self.gamma):
            if not 0 <= p <= 2 * np.pi:
                raise ValueError(f"angle {p} outside [0, 2*pi]")

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma)


def su3_matrix(t1, t2, t3, p1=0.0, p2=0.0, p3=0.0, p4=0.0, p5=0.0):
    """Raw eight-angle chart of SU(3); smooth and group-valued on all of R^8."""
    c1, s1 = np.cos(t1), np.sin(t1)
    c2, s2 = np.cos(t2), np.sin(t2)
    c3, s3 = np.cos(t3), np.sin(t3)
    e = lambda x: np.exp(1j * x)
    u = np.empty((3, 3), dtype=complex)
    u[0, 0] = c1 * c2 * e(p1)
    u[0, 1] = s1 * e(p3)
    u[0, 2] = c1 * s2 * e(p4)
    u[1, 0] = s2 * s3 * e(-p4 - p5) - s1 * c2 * c3 * e(p1 + p2 - p3)
    u[1, 1] = c1 * c3 * e(p2)
    u[1, 2] = -c2 * s3 * e(-p1 - p5) - s1 * s2 * c3 * e(p2 - p3 + p4)
    u[2, 0] = -s1 * c2 * s3 * e(p1 - p3 + p5) - s2 * c3 * e(-p2 - p4)
    u[2, 1] = c1 * s3 * e(p5)
    u[2, 2] = c2 * c3 * e(-p1 - p2) - s1 * s2 * s3 * e(-p3 + p4 + p5)
    return u


def su3_from_angles(angles):
    """Chart evaluation with range validation."""
    angles.validate()
    return su3_matrix(*angles.as_tuple())


def so3_matrix(a, b, g):
    """Raw Euler-angle chart of SO(3)."""
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    cg, sg = np.cos(g), np.sin(g)
    return np.array([
        [ca * cg - sa * cb * sg, -ca * sg - sa * cb * cg, sa * sb],
        [sa * cg + ca * cb * sg, -sa * sg + ca * cb * cg, -ca * sb],
        [sb * sg, sb * cg, cb],
    ])


def so3_from_euler(angles):
    angles.validate()
    return so3_matrix(*angles.as_tuple())


def _as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_special_unitary(k, seed):
    """Haar sample: orthonormalize a complex Gaussian matrix, correct to det 1."""
    rng = _as_rng(seed)
    Z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R))).conj()
    return Q * np.linalg.det(Q) ** (-1.0 / k)


def random_special_orthogonal(seed):
    rng = _as_rng(seed)
    Z = rng.normal(size=(3, 3))
    Q, R = np.linalg.qr(Z)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 2] = -Q[:, 2]
    return Q


def s4_enumerate():
    """The 24 signed permutation matrices of order 3 with determinant one."""
    out = []
    for perm in itertools.permutations(range(3)):
        P = np.zeros((3, 3))
        for c, r in enumerate(perm):
            P[r, c] = 1.0
        for signs in itertools.product((1.0, -1.0), repeat=3):
            W = P @ np.diag(signs)
            if np.linalg.det(W) > 0.5:
                out.append(W)
    return out


def _pattern_distance(U, perm):
    """Best Frobenius distance from U to det-1 monomials on a fixed pattern.

    The free parameters are the three phases of the nonzero entries; the
    determinant constraint ties their sum to 0 or pi depending on the parity
    of the pattern.  We solve the two-variable phase fit numerically from the
    projected unconstrained optimum (trying the three branch offsets of the
    total-phase correction).
    """
    u = np.array([U[perm[c], c] for c in range(3)])
    w = np.abs(u)
    alpha = np.angle(u)
    parity = np.linalg.det(_perm_matrix(perm))
    target = 0.0 if parity > 0 else np.pi

    def cost(x):
        th = np.array([x[0], x[1], target - x[0] - x[1]])
        return -2.0 * np.sum(w * np.cos(th - alpha))

    best = None
    for m in (-1, 0, 1):
        delta = (target - alpha.sum() + 2 * np.pi * m) / 3.0
        x0 = alpha[:2] + delta
        res = minimize(cost, x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 500})
        if best is None or res.fun < best.fun:
            best = res
    th = np.array([best.x[0], best.x[1], target - best.x[0] - best.x[1]])
    dist2 = max(np.sum(np.abs(U) ** 2) + 3.0 + best.fun, 0.0)
    mono = np.zeros((3, 3), dtype=complex)
    for c in range(3):
        mono[perm[c], c] = np.exp(1j * th[c])
    return mono, np.sqrt(dist2)


def _perm_matrix(perm):
    P = np.zeros((3, 3))
    for c, r in enumerate(perm):
        P[r, c] = 1.0
    return P


def nearest_monomial(U):
    """Closest det-1 monomial matrix in Frobenius distance, over all patterns."""
    U = np.asarray(U, dtype=complex)
    best = None
    for perm in itertools.permutations(range(3)):
        mono, dist = _pattern_distance(U, perm)
        if best is None or dist < best[1]:
            best = (mono, dist)
    return best


def finite_diff_jacobian(f, point, step):
    """Central-difference Jacobian of a vector map plus its singular values."""
    point = np.asarray(point, dtype=float)
    cols = []
    for i in range(point.size):
        e = np.zeros_like(point)
        e[i] = step
        cols.append((np.asarray(f(point + e)) - np.asarray(f(point - e))) / (2 * step))
    J = np.stack(cols, axis=1)
    return J, np.linalg.svd(J, compute_uv=False)


# ---------------------------------------------------------------------------
# tangent spaces and retractions used by the optimizer

def su3_tangent_basis():
    """Orthonormal (Frobenius) basis of traceless anti-Hermitian 3x3 matrices."""
    out = []
    for i in range(3):
        for j in range(i + 1, 3):
            A = np.zeros((3, 3), dtype=complex)
            A[i, j] = 1 / np.sqrt(2)
            A[j, i] = -1 / np.sqrt(2)
            out.append(A)
            B = np.zeros((3, 3), dtype=complex)
            B[i, j] = 1j / np.sqrt(2)
            B[j, i] = 1j / np.sqrt(2)
            out.append(B)
    out.append(np.diag([1j, -1j, 0]) / np.sqrt(2))
    out.append(np.diag([1j, 1j, -2j]) / np.sqrt(6))
    return out


def so3_tangent_basis():
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        A = np.zeros((3, 3))
        A[i, j] = 1 / np.sqrt(2)
        A[j, i] = -1 / np.sqrt(2)
        out.append(A)
    return out


def expm_antihermitian(A):
    """exp(A) for anti-Hermitian A via the eigendecomposition of -iA."""
    w, Q = np.linalg.eigh(-1j * A)
    return (Q * np.exp(1j * w)) @ Q.conj().T


def expm_antisymmetric(A):
    """Rodrigues formula for real antisymmetric 3x3 A."""
    v = np.array([A[2, 1], A[0, 2], A[1, 0]])
    th = np.linalg.norm(v)
    if th < 1e-12:
        return np.eye(3) + A + 0.5 * A @ A
    return np.eye(3) + np.sin(th) / th * A + (1 - np.cos(th)) / th ** 2 * (A @ A)
