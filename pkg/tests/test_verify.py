from dataclasses import replace
from fractions import Fraction

from difformal.algebra import W
from difformal.algebraic_solver import RuleSet
from difformal.diffpoly import DiffPoly
from difformal.factorize import formal_k_factorization
from difformal.ode_solver import LinearODE, fold_free_parameters, general_solution
from difformal.parser import parse_diffpoly as P
from difformal.verify import CheckKind, reconstruction_check, remainder_vanishes, residual_check

from helpers import THREE_FAMILY_P, X_COEFF_P

RULE_A = RuleSet({W(0, 2): -2, W(1, 2): 0, W(2, 2): -1})


def test_reconstruction_passes_and_detects_mutation():
    f = formal_k_factorization(P(THREE_FAMILY_P), 2)
    report = reconstruction_check(f)
    assert report.kind is CheckKind.RECONSTRUCTION and report.passed
    first = f.summands[0]
    f.summands[0] = replace(first, coeff=first.coeff * Fraction(3, 2))
    bad = reconstruction_check(f)
    assert not bad.passed
    assert bad.details


def test_remainder_vanishes_examples():
    f = formal_k_factorization(P(THREE_FAMILY_P), 2)
    assert remainder_vanishes(f, RULE_A).passed
    bad = remainder_vanishes(f, RuleSet({W(0, 2): 1, W(1, 2): 0, W(2, 2): 0}))
    assert not bad.passed
    assert {"monomial": "1", "coefficient": "-5"} in bad.details


def test_remainder_vanishes_zero_remainder():
    f = formal_k_factorization(P("y"), 0)
    f.remainder = DiffPoly()
    assert remainder_vanishes(f, RuleSet({})).passed


def _solution(L, k, free=()):
    return fold_free_parameters(general_solution(LinearODE.from_form(P(L), k)), free)


def test_residual_three_family_families():
    for L in ("y'' - y' - 2", "y''"):
        report = residual_check(P(THREE_FAMILY_P), _solution(L, 2), samples=10, tol=1e-8, seed=0)
        assert report.passed, report.worst_residual
        assert len(report.details) == 10


def test_residual_x_coeff_family():
    report = residual_check(P(X_COEFF_P), _solution("y' - y + x^2 + 3*x", 1))
    assert report.passed
    assert report.worst_residual < 1e-12


def test_residual_rejects_wrong_family():
    report = residual_check(P("y' - 1"), _solution("y'", 1))
    assert not report.passed
    assert report.worst_residual > 0.1


def test_residual_is_seeded():
    a = residual_check(P(THREE_FAMILY_P), _solution("y'' - y' - 2", 2), seed=7)
    b = residual_check(P(THREE_FAMILY_P), _solution("y'' - y' - 2", 2), seed=7)
    assert a.details == b.details
