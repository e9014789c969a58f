import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from difformal.algebra import ParamPoly, V, W
from difformal.algebraic_solver import (PolySystem, RuleSet, buchberger, check_rule,
                                        rational_roots, reduce, solve_system, solve_triangular)
from difformal.errors import ResourceLimit
from difformal.factorize import formal_k_factorization, remainder_system
from difformal.parser import parse_diffpoly

from helpers import THREE_FAMILY_P, X_COEFF_P, ppoly_to_sympy, sym_of

W1, W2, W3 = (ParamPoly.symbol(W(i)) for i in (1, 2, 3))
ORDER = (W(1), W(2), W(3))


def gb(*eqs, variables=ORDER):
    return buchberger(PolySystem(tuple(eqs), variables))


def sympy_basis(eqs, variables):
    gens = [sym_of(s) for s in variables]
    G = sympy.groebner([ppoly_to_sympy(e) for e in eqs], *gens, order="lex")
    return {sympy.Poly(g, *gens).monic().as_expr() for g in G.exprs}


def test_linear_basis():
    assert gb(W1 - 1).polys == (W1 - 1,)


def test_inconsistent_system_is_unit():
    G = gb(W1 ** 2, W1 * W2 - 1)
    assert G.is_unit()
    assert solve_triangular(G).rules == []


def test_lex_basis_matches_sympy():
    eqs = (W1 + W2, W1 * W2)
    G = gb(*eqs, variables=(W(1), W(2)))
    assert set(G.polys) == {W1 + W2, W2 ** 2}
    assert {ppoly_to_sympy(g) for g in G.polys} == sympy_basis(eqs, (W(1), W(2)))


def test_reduce_examples():
    G = gb(W1 - 1, W2)
    assert reduce(W1 ** 2 + W2, G) == 1
    G = gb(W1 ** 2 - 1, variables=(W(1),))
    assert reduce(W1 ** 3, G) == W1


def test_rational_roots_examples():
    assert rational_roots(W1 ** 2 - 1) == [-1, 1]
    assert rational_roots(W1 ** 2 - 2) == []
    assert rational_roots(W1 ** 3 + W1 ** 2) == [-1, 0]
    assert rational_roots(4 * W1 ** 2 - 1) == [Fraction(-1, 2), Fraction(1, 2)]
    with pytest.raises(ValueError):
        rational_roots(W1 * W2)


def test_two_roots():
    res = solve_system([W1 ** 2 - 1], (W(1),))
    assert res.rules == [RuleSet({W(1): -1}), RuleSet({W(1): 1})]


def test_irrational_factor_is_unresolved():
    res = solve_system([(W1 ** 2 - 2) * (W1 - 1)], (W(1),))
    assert res.rules == [RuleSet({W(1): 1})]
    assert len(res.unresolved) == 1
    assert str(res.unresolved[0]) == "W[1]^2 - 2 = 0"


def test_three_family_k2_rules():
    f = formal_k_factorization(parse_diffpoly(THREE_FAMILY_P), 2)
    res = solve_system(remainder_system(f), tuple(reversed(f.parameters)))
    got = {tuple(r.assignments[W(j, 2)] for j in range(3)) for r in res.rules}
    assert got == {(-2, 0, -1), (0, 0, 0)}
    assert not res.unresolved
    assert all(check_rule(remainder_system(f), r) for r in res.rules)


def test_x_coeff_rules_with_free_parameter():
    f = formal_k_factorization(parse_diffpoly(X_COEFF_P), 1, free_poly_degree=2)
    res = solve_system(remainder_system(f), tuple(reversed(f.parameters)))
    as_tuples = {(r.assignments.get(W(1, 1)), r.assignments.get(V(2)), r.assignments.get(V(1)),
                  r.assignments.get(V(0)), V(0) in r.free) for r in res.rules}
    assert as_tuples == {(-1, 1, 3, None, True), (0, 0, -2, -5, False)}


def test_empty_system_leaves_everything_free():
    res = solve_system([], (W(1), W(2)))
    assert res.rules == [RuleSet({}, frozenset({W(1), W(2)}))]


def test_positive_dimensional_component_is_unresolved():
    res = solve_system([W1 * W2 - 1], (W(1), W(2)))
    assert res.rules == []
    assert len(res.unresolved) == 1


def test_resource_limits():
    eqs = [W1 ** 2 * W2 - 1, W1 * W2 ** 2 - W1 - 1]
    with pytest.raises(ResourceLimit):
        solve_system(eqs, (W(1), W(2)), max_degree=2)
    with pytest.raises(ResourceLimit):
        solve_system(eqs, (W(1), W(2)), max_pairs=1)


def test_undeclared_symbol_rejected():
    with pytest.raises(ValueError):
        PolySystem((W1 + W2,), (W(1),))


def test_rule_json():
    r = RuleSet({W(1): Fraction(-1, 2)}, frozenset({W(2)}))
    assert r.as_json() == {"W[1]": "-1/2", "W[2]": "free"}


# -- properties ------------------------------------------------------------------

@st.composite
def small_systems(draw):
    """Products of shifted linear factors combined with small integer weights."""
    n = draw(st.integers(1, 3))
    syms = [ParamPoly.symbol(W(i)) for i in range(1, n + 1)]
    eqs = []
    for _ in range(draw(st.integers(1, 3))):
        eq = ParamPoly()
        for _ in range(draw(st.integers(1, 2))):
            term = ParamPoly.const(draw(st.integers(-2, 2)))
            for _ in range(draw(st.integers(1, 2))):
                term = term * (draw(st.sampled_from(syms)) - draw(st.integers(-2, 2)))
            eq = eq + term
        eqs.append(eq)
    return eqs, tuple(W(i) for i in range(n, 0, -1))


@given(small_systems())
@settings(max_examples=40, deadline=None)
def test_groebner_properties(system):
    eqs, variables = system
    eqs = [e for e in eqs if e]
    if not eqs:
        return
    G = buchberger(PolySystem(tuple(eqs), variables))
    for e in eqs:
        assert reduce(e, G).is_zero()
    # oracle: sympy's reduced lex basis, made monic
    assert {ppoly_to_sympy(g) for g in G.polys} == sympy_basis(eqs, variables)


@given(small_systems())
@settings(max_examples=40, deadline=None)
def test_solver_sound_and_complete_on_grid(system):
    eqs, variables = system
    res = solve_system(eqs, variables)
    for r in res.rules:
        assert check_rule(eqs, r)
    if res.unresolved:
        return
    grid = range(-2, 3)
    for point in itertools.product(grid, repeat=len(variables)):
        rule = dict(zip(variables, point))
        if all(not e.substitute(rule) for e in eqs):
            assert any(all(r.assignments.get(s, point[i]) == point[i] for i, s in enumerate(variables))
                       for r in res.rules), point
