"""Coordinate Bethe ansatz machinery for 1D gases with point interactions.

The library covers the four-parameter family of local two-body
interactions: boundary matrices and their self-adjointness relation,
closed-form two-body scattering amplitudes with an independent
boundary-value oracle, the factorization identities and their coupling
classification, N!-dimensional Yang-Baxter operators with coefficient
propagation and a brute-force cross-check, and position-space
eigenfunctions including the determinant form and the step-phase gauge
map to the plain delta gas.
"""

from ._kernels import BACKEND
from .bethe import (BetheState, OracleResult, YangMatrix, bethe_state,
                    build_s_diagonals_periodic, build_yang_matrix,
                    coefficients_bc_oracle, propagate,
                    state_relation_residual, validate_momenta)
from .couplings import (CouplingParameters, GaugeData, boundary_matrix,
                        build_u_pm, check_symplectic, gauge_data,
                        integrable_family)
from .errors import (DegenerateBoundary, NotGaugeFamily, NotIntegrable,
                     OnBoundary, PointBetheError, PoleAtU, SingularSystem,
                     WrongWedge)
from .factorization import (FactorizationReport, GridSpec, IntegrabilityClass,
                            IntegrabilityTag, ScanRow, YangBaxterReport,
                            block_reduction_check, check_factorization,
                            check_factorization_panel, classify,
                            scan_couplings, scan_to_csv,
                            yang_baxter_matrix_check)
from .permutations import (Permutation, SymmetricGroupTables, compare,
                           compose, decompose, identity, rank, regular_rep,
                           symmetric_group, transposition, unrank)
from .scattering import AmplitudeSet, amplitudes, amplitudes_bvp_oracle
from .wavefunction import (Wedge, boundary_residual, boundary_samples,
                           determinant_bethe_state, determinant_coefficients,
                           determinant_eigenfunction, evaluate, evaluate_grid,
                           extend_by_statistics, gauge_map,
                           gauge_transformed_state, locate_wedge,
                           schrodinger_fd_residual)

__version__ = "0.1.0"
