"""Shared generators and sympy-based oracles for the test suite."""

import random
from fractions import Fraction

import sympy
from hypothesis import strategies as st

from difformal.algebra import ParamPoly, W
from difformal.diffpoly import DiffMonomial, DiffPoly
from difformal.parser import parse_diffpoly

MIXED_P = "4*y''' - 4*(y'')^2 + y'*y'' - (1/16)*(y')^2 - 1"
THREE_FAMILY_P = "(y'')^3 - 2*y'*(y'')^2 - 4*(y'')^2 + (y')^2*y''' + 4*y'*y''' + 4*y'''"
X_COEFF_P = "(x^2 - x)*y' + x*y'' - x^2*y''' + (-2*x^3 - 3*x^2 + 3*x)"

SYMS = [W(1), W(2), W(3)]


def ex(src):
    return parse_diffpoly(src)


# -- ParamPoly strategies ---------------------------------------------------

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def param_polys(draw, symbols=SYMS, max_terms=4, max_exp=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [draw(st.integers(0, max_exp)) for _ in symbols]
        mono = tuple((s, e) for s, e in zip(symbols, exps) if e)
        terms[mono] = draw(small_fractions)
    return ParamPoly(terms)


# -- DiffPoly strategies ------------------------------------------------------


@st.composite
def diff_monomials(draw, max_order=3, max_degree=3):
    budget = draw(st.integers(0, max_degree))
    derivs = [0] * (max_order + 1)
    x_exp = 0
    for _ in range(budget):
        slot = draw(st.integers(-1, max_order))
        if slot < 0:
            x_exp += 1
        else:
            derivs[slot] += 1
    return DiffMonomial.make(x_exp, derivs)


@st.composite
def diff_polys(draw, max_terms=6, need_y=False, coeffs=None):
    coeffs = coeffs or small_fractions.filter(bool)
    terms = {}
    for _ in range(draw(st.integers(1, max_terms))):
        terms[draw(diff_monomials())] = draw(coeffs)
    p = DiffPoly(terms)
    if need_y and p.order() is None:
        p = p + DiffPoly.y(draw(st.integers(0, 3)))
    return p


def random_diff_poly(rng: random.Random, max_terms=6, max_order=3, max_degree=3):
    """Seeded generator: order <= 3, total degree <= 3, <= 6 terms,
    coefficients rational in [-5, 5]; always depends on y."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            derivs = [0] * (max_order + 1)
            x_exp = 0
            for _ in range(rng.randint(0, max_degree)):
                slot = rng.randint(-1, max_order)
                if slot < 0:
                    x_exp += 1
                else:
                    derivs[slot] += 1
            den = rng.randint(1, 6)
            c = Fraction(rng.randint(-5 * den, 5 * den), den)
            if c:
                terms[DiffMonomial.make(x_exp, derivs)] = c
        p = DiffPoly(terms)
        if p.order() is not None:
            return p


# -- sympy oracles ------------------------------------------------------------

_X = sympy.Symbol("x")


def sym_of(s):
    return sympy.Symbol(str(s))


def ppoly_to_sympy(p: ParamPoly):
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in m:
            term *= sym_of(s) ** e
        out += term
    return sympy.expand(out)


def ysym(i):
    return sympy.Symbol(f"y{i}")


def diffpoly_to_sympy(p: DiffPoly):
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        term = ppoly_to_sympy(c) * _X ** m.x_exp
        for i, e in enumerate(m.derivs):
            term *= ysym(i) ** e
        out += term
    return sympy.expand(out)


def sympy_total_derivative(expr, max_order=8):
    """Total d/dx of an expression in x, y0, y1, ... (independent oracle)."""
    out = sympy.diff(expr, _X)
    for i in range(max_order):
        out += sympy.diff(expr, ysym(i)) * ysym(i + 1)
    return sympy.expand(out)


def three_family_reference_remainder():
    """Reference remainder of THREE_FAMILY_P at k=2, transcribed term by term."""
    W0, W1, W2 = (ParamPoly.symbol(W(j, 2)) for j in range(3))
    y, y1 = DiffPoly.y(0), DiffPoly.y(1)
    one = DiffPoly.const(1)
    return (y * (-3 * W1 * W0 ** 2 - 8 * W1 * W0 + 4 * W1 * W2)
            + y ** 2 * (-3 * W0 * W1 ** 2 - 4 * W1 ** 2)
            + y ** 3 * (-(W1 ** 3))
            + y1 * (-3 * W2 * W0 ** 2 - 2 * W0 ** 2 - 4 * W2 * W0 + 4 * W2 ** 2 - 4 * W1)
            + y * y1 * (-4 * W0 * W1 - 6 * W0 * W2 * W1 - 4 * W2 * W1)
            + y ** 2 * y1 * (-3 * W2 * W1 ** 2 - 2 * W1 ** 2)
            + y1 ** 2 * (-3 * W0 * W2 ** 2 - 3 * W0 * W2 - 4 * W1)
            + y * y1 ** 2 * (-3 * W1 * W2 ** 2 - 3 * W1 * W2)
            + y1 ** 3 * (-(W2 ** 3) - W2 ** 2 - W1)
            + one * (4 * W2 * W0 - W0 ** 3 - 4 * W0 ** 2))
