"""Reference anchors: the unique-basis frame and the regularity base points.

UNIQUE_BASIS_FRAME stores nine Bob-side frame vectors as columns (grouped in
threes by Alice outcome); unique_basis_vectors() assembles them into the three
orthonormal vectors of C^3 (x) C^9 whose span admits exactly one locally
distinguishable basis.  Its Gram operator equals DD_ANCHOR/9 + I/3.

DD_ANCHOR (Hermitian) and REAL_DD_ANCHOR (symmetric with symmetric blocks)
are dd operators with both marginals zero; ANCHOR_UNITARY / ANCHOR_ROTATION
are the group factors at which the complex/real regularity certificates are
evaluated.  Both anchors sit at explicit chart points (ANCHOR_SU3_ANGLES,
ANCHOR_EULER_ANGLES), which the finite-difference Jacobians are centered on.
"""

import numpy as np

from .groups import EulerAngles, SU3Angles

_S3 = np.sqrt(3.0)
_S2 = np.sqrt(2.0)
_S11 = np.sqrt(11.0)
_S33 = np.sqrt(33.0)

UNIQUE_BASIS_FRAME = np.zeros((9, 9), dtype=complex)
UNIQUE_BASIS_FRAME[0, 0] = 2 / 3
UNIQUE_BASIS_FRAME[1, 1] = 1 / _S3
UNIQUE_BASIS_FRAME[1, 5] = 1j / (3 * _S3)
UNIQUE_BASIS_FRAME[1, 6] = 2 / (3 * _S3)
UNIQUE_BASIS_FRAME[2, 2] = _S2 / 3
UNIQUE_BASIS_FRAME[3, 3] = 1 / _S3
UNIQUE_BASIS_FRAME[4, 4] = _S2 / 3
UNIQUE_BASIS_FRAME[5, 5] = _S11 / (3 * _S3)
UNIQUE_BASIS_FRAME[5, 6] = (3 + 2j) / (3 * _S33)
UNIQUE_BASIS_FRAME[6, 6] = 1 / _S33
UNIQUE_BASIS_FRAME[7, 7] = 2 / 3
UNIQUE_BASIS_FRAME[8, 8] = 1 / _S3

DD_ANCHOR = np.array([
    [1, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1j, 2, 0, 0],
    [0, 0, -1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, -1, 0, 0, 0, 0],
    [0, -1j, 0, 0, 0, 1, 1, 0, 0],
    [0, 2, 0, 0, 0, 1, -1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
], dtype=complex)

# both local factors of the complex base point coincide
ANCHOR_UNITARY = np.array([
    [6, 4, 2 * _S3],
    [-1, 6, -3 * _S3],
    [-3 * _S3, 2 * _S3, 5],
]) / 8.0

ANCHOR_SU3_ANGLES = SU3Angles(np.pi / 6, np.pi / 6, np.pi / 6)

ANCHOR_ROTATION = np.array([
    [1.0, 0.0, 0.0],
    [0.0, 0.0, -1.0],
    [0.0, 1.0, 0.0],
])

ANCHOR_EULER_ANGLES = EulerAngles(0.0, np.pi / 2, 0.0)

REAL_DD_ANCHOR = np.array([
    [0, 0, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, -1, 1, 0, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, -2, 0],
    [0, 1, 0, 0, 0, 0, 0, 0, 2],
], dtype=float)


def unique_basis_vectors():
    """The three orthonormal vectors of C^3 (x) C^9 built from the frame columns.

    Vector c has Bob-block j equal to frame column 3*j + c.
    """
    out = []
    for c in range(3):
        v = np.zeros(27, dtype=complex)
        for j in range(3):
            v[9 * j:9 * j + 9] = UNIQUE_BASIS_FRAME[:, 3 * j + c]
        out.append(v)
    return out
