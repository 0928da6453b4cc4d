"""Point counts, zeta functions and closed points of curves over finite fields."""
from .bounds import b2_upper_bounds, br_lower_bounds, hallouin_perret_check, rho_upper_bounds, weil_interval
from .counting import CountsProfile, count_points, count_sequence
from .curves import make_hyperelliptic, make_plane, parse_curve, format_curve
from .fields import build_extension, make_field, solve_quadratic
from .zeta import LPolynomial, closed_points, closed_points_profile, l_polynomial_from_counts

__version__ = "0.1.0"
