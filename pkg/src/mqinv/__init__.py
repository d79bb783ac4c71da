"""Degree of regularity and solving degree of polynomial systems over small finite fields."""

from .bounds import bound_report, dreg_bound_equal_degree, dreg_bound_with_fieldeq, sigma_equal_degree
from .field import field_of_size, make_field
from .groebner import solve_system, solving_degree_mutant, solving_degree_standard
from .polyring import GREVLEX, LEX, Polynomial, PolySystem, parse_polynomial, to_text
from .regularity import degree_of_regularity, is_algebraically_random, lpp_of, lpp_regularity

__version__ = "0.1.0"
