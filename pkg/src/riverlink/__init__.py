"""Intersection numbers of closed geodesics on the modular surface, computed
from the rivers of Conway topographs and checked against an exact divisor-sum
count."""

__version__ = "0.1.0"

from .arith import (Factorization, PellSolution, PeriodicCF, cf_quadratic, factorize,
                    is_fundamental, kronecker, pell_minimal, regulator)
from .errors import (InvalidDiscriminantError, InvalidFormError, InvalidMatrixError,
                     RiverlinkError, ScopeError, StrongEquivalenceError)
from .forms import (IDENTITY, L, R, S, T, Pibqf, UniModularMatrix, act, automorph, b_delta,
                    class_number, class_representative, discriminant, form_from_matrix,
                    is_equivalent, is_reciprocal_class, is_reduced, narrow_class_group,
                    path_to_matrix, reciprocal, reduce, reduced_cycle, strongly_inequivalent)
from .river import (RiverSequence, is_reciprocal_river, river_automorph, river_forms, river_of,
                    river_reverse)
from .intersect import (IntersectionComponents, components, int_rs_fast, int_rs_naive,
                        intersection_number)
from .geometry import (IntersectionRecord, QuadraticNumber, commutator_det_positive,
                       crossing_angle, crossing_point, crossing_sign, geodesics_cross,
                       hyperbolic_distance, roots, trace_zero)
from .grosszagier import (PnProfile, epsilon, p_count, s_range, total_intersection_classes,
                          total_intersection_formula)
from .experiments import (CStat, LocusSample, angle_histogram, bench_compare, c_statistic,
                          intersection_locus)
