"""Unitary weighted discrete Hilbert transforms, their level-set construction,
and the equivalent reproducing-kernel and Clark-basis pictures."""

from .clark import (InnerFunction, alpha_beta, beta_alpha, clark_basis,
                    inner_value, model_kernel, phi_from_inner)
from .errors import HilbertClarkError
from .geometry import (LocusClassification, LocusKind, certify_localization,
                       cross_ratio_square, localize)
from .levelset import (HerglotzDecomposition, LevelSet, exceptional_alpha,
                       herglotz_decompose, solve_level_set)
from .potential import PotentialContext, herglotz_check, phi, phi_derivative
from .rkspace import (SpaceElement, basis_certificate, evaluate,
                      generating_function, inner, kernel, kernel_vector, norm,
                      reconstruct)
from .sequences import (Geometry, WeightedNodeSet, admissibility_sum,
                        kernel_weight, star_value)
from .transform import (TransformMatrix, UnitarityReport, Verdict,
                        adjoint_identity_check, apply, build, unitarity_report)

__version__ = "0.1.0"
