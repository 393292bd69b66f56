"""Maass cusp forms on moonshine groups: computation, counting, verification.

The package computes verified lists of Laplacian eigenvalues on the
one-cusp quotients attached to square-free levels (levels 1, 5, 6 built
in), evaluates the explicit averaged eigenvalue-counting term with all of
its correction pieces, tests lists for completeness, and produces
nearest-neighbour spacing statistics.
"""

from .errors import (ConditioningFailure, ConfigMismatch, DomainError,
                     EmptyInput, InsufficientCoefficients, InsufficientData,
                     IterationLimit, MembershipViolation, MonotonicityViolation,
                     MoonmaassError, PoleError, PullbackFailure, RangeError,
                     SingularSystem, UnsupportedGroup, ZeroFirstCoefficient)
from .groups import (GroupElement, GroupProfile, UpperHalfPoint, apply,
                     builtin_profile, estimate_floor, hyperbolic_distance,
                     load_profile, make_element, prime_factors, pullback,
                     pullback_points, save_profile)
from .special import (bessel_k_ir, bessel_k_ir_grid, bessel_k_ir_oracle,
                      bessel_k_ir_scaled, completed_xi, dirichlet_factor,
                      log_gamma, scattering_det, zeta, zeta_euler_maclaurin)
from .weyl import (EigenvalueList, WeylTerms, alpha, arctan_integral,
                   averaged_envelope, averaged_s, averaged_s_grid, counting,
                   elliptic_constant, g_envelope, load_list, main_term,
                   main_term_integral, s_num, save_list, sawtooth_integral,
                   sawtooth_integral_quadrature)
from .hejhal import (CuspFormCandidate, HejhalParams, VerificationReport,
                     build_system, choose_params, detection_value, residual,
                     scan, solve_candidate, truncation, verify)
from .hecke import HeckeReport, hecke_eigenvalues, multiplicativity_defect
from .turing import TuringReport, consecutiveness, inject, remove
from .stats import (Histogram1D, Histogram2D, IndependenceReport,
                    UnfoldedSpectrum, independence_demo, joint_histogram,
                    ks_distance, reference_cdf, reference_pdf,
                    spacing_histogram, spacings, unfold)

__version__ = "0.1.0"
