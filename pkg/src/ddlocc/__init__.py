"""Local-unitary dd forms for qutrit-side bipartite operators, and what they buy.

The core object is a PSD operator on C^3 (x) C^n with identity B-marginal;
`solve_dd` searches SU(3) x SU(n) (or SO(3) x SO(n)) for local rotations that
make all three diagonal blocks diagonal.  On top of that sit one-way
discrimination protocols for 3-dimensional subspaces, channel-capacity
constructions, a quantum-classical boundary converter, entanglement
measurements, and a numeric audit suite for every computational fact the
package relies on.
"""

from .linalg import (BipartiteOperator, as_blocks, dd_residual, from_blocks,
                     gram_operator, is_dd, is_monomial, lu_conjugate,
                     marginals, min_eigenvalue, partial_transpose_B)
from .groups import (EulerAngles, SU3Angles, finite_diff_jacobian,
                     nearest_monomial, random_special_orthogonal,
                     random_special_unitary, s4_enumerate, so3_from_euler,
                     so3_matrix, su3_from_angles, su3_matrix)
from .spaces import (dimension_counts, hermitian_basis, random_element,
                     random_psd_identity_marginal, space_d00, space_d2,
                     space_m0, space_m00, space_m2, symmetric_basis)
from .reference import (ANCHOR_EULER_ANGLES, ANCHOR_ROTATION,
                        ANCHOR_SU3_ANGLES, ANCHOR_UNITARY, DD_ANCHOR,
                        REAL_DD_ANCHOR, UNIQUE_BASIS_FRAME,
                        unique_basis_vectors)
from .solver import (DDCertificate, SolverOptions, commutator_objective,
                     joint_diagonalize, orbit_equivalent, solve_dd,
                     solve_dd_real, solve_from)
from .protocol import (DiscriminationProtocol, MultipartiteReport, Subspace,
                       build_protocol, multipartite_reduce, simulate,
                       subspace_from_vectors)
from .applications import (CapacityReport, FourDimReport, QCConversionResult,
                           StinespringIsometry, entanglement_entropy,
                           environment_assisted_protocol,
                           environment_assisting_protocol,
                           four_dim_counterexample, isometry_from_parts,
                           qc_convert, random_isometry, span_min_entanglement)
from .verification import (CHECK_NAMES, VerificationReport, all_checks,
                           run_check, verify_commutator_forms,
                           verify_dimensions, verify_frame_identity,
                           verify_jacobian_rank_complex, verify_jacobian_real,
                           verify_real_commutator_forms, verify_unique_orbit)

__version__ = "0.1.0"
