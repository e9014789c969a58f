"""Detect "linear" solutions of polynomial differential equations.

The pipeline rewrites p(x, y, y', ...) as a combination of derivatives of a
parametric monic linear form plus a remainder, solves for the parameter
values that kill the remainder, and solves the resulting linear ODEs in
closed form.
"""

from .algebra import ParamPoly, ParamSymbol, V, W
from .algebraic_solver import RuleSet, solve_system
from .diffpoly import DiffMonomial, DiffPoly
from .factorize import Mode, build_common_form, formal_k_factorization
from .ode_solver import LinearODE, general_solution
from .parser import format_diffpoly, parse_diffpoly

__version__ = "0.1.0"

__all__ = [
    "ParamPoly",
    "ParamSymbol",
    "V",
    "W",
    "RuleSet",
    "solve_system",
    "DiffMonomial",
    "DiffPoly",
    "Mode",
    "build_common_form",
    "formal_k_factorization",
    "LinearODE",
    "general_solution",
    "format_diffpoly",
    "parse_diffpoly",
]
