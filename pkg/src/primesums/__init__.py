"""Numerical experiments on additive prime problems.

Brute-force representation counting for Goldbach-type problems, sums over
zeta zeros for the corresponding explicit formulas, and the quadrature
machinery to compare them at desk scale.
"""

__version__ = "0.1.0"

from .analysis import (MeanSquareReport, QuadratureSpec, fourth_moment,
                       laplace_segment_check, line_integral_laplace,
                       mean_square_classical, mean_square_tilde,
                       omega_mean_square)
from .arith import (ProblemKind, SieveTable, build_sieve, cesaro_sum,
                    cumulative_sum, exp_weighted_short_sum,
                    representation_count, short_interval_sum)
from .errors import AccuracyError, SieveRangeError, ZeroTableError
from .explicit import (FormulaReport, circle_decomposition_diag,
                       goldbach_average, goldbach_cesaro, goldston_yang,
                       hl_cesaro, short_interval_report)
from .expsum import (ComplexParam, ExpSumConfig, f2, linnik_approx,
                     linnik_vertical, omega, s_classical, s_tilde, t_sum,
                     u_sum, vertical_bound_shape)
from .special import (bessel_j_saddle, bessel_j_series, bessel_j_sonine,
                      gamma_ratio, log_gamma, theta, theta_modular_residual)
from .zeros import (ZeroTable, conjugate_pair_sum, default_zeros_path,
                    load_zeros, truncate, zero_count_estimate)
