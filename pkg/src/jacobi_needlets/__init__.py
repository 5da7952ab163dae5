"""Tight needlet frames for Jacobi-weighted L^2 on [-1, 1]."""
from ._kernels import BACKEND
from .cutoff import (CutoffFunction, band_weights, build_cutoff, default_cutoff,
                     eval_cutoff, partition_check, partition_sum)
from .errors import (ConvergenceError, DegreeOverflowError, DomainError, NeedletError,
                     ParameterError, QuadratureOrderError, SingularityError)
from .frame import (Expansion, NeedletCoefficients, NeedletFrame, analyze, build_frame,
                    calderon_project, expand, levels_for_degree, needlet_eval,
                    needlet_matrix, needlet_norm_sq, synthesize, tail_energy,
                    vanishing_moments_check)
from .jacobi import (JacobiParams, jacobi_eval, jacobi_norm_sq, normalization_constant,
                     orthonormal_eval_all, orthonormal_table, weight)
from .kernels import (level_kernel, reproducing_kernel, smoothed_kernel,
                      smoothed_kernel_matrix, weight_envelope)
from .quadrature import (QuadratureRule, gauss_jacobi, moment_oracle, moment_table,
                         verify_exactness)
from .verify import (EnvelopeReport, lp_ratio_scan, needlet_localization_scan,
                     node_weight_equivalence_scan, theorem29_scan, theorem31_scan)

__version__ = "0.1.0"
