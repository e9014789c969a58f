"""Formal-k-factorization of a differential polynomial.

The reduction repeatedly takes the lexicographically largest term of the
working remainder and, while it still involves y^(j) with j >= k, cancels it
against a product of (derivatives of) monic linear forms of order k.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

from .algebra import ParamPoly, ParamSymbol, V, W
from .diffpoly import DiffMonomial, DiffPoly
from .errors import ResourceLimit

DEFAULT_MAX_ITERATIONS = 100_000


class Mode(str, enum.Enum):
    COMMON = "common"
    GENERAL = "general"


@dataclass(frozen=True)
class LinearForm:
    """``free(x) + sum_j W_j y^(j-1) + y^(k)``, monic in y^(k).

    ``free_syms[d]`` is the coefficient of x^d in the free term and
    ``y_syms[j]`` the coefficient of y^(j).
    """

    k: int
    free_syms: Tuple[ParamSymbol, ...]
    y_syms: Tuple[ParamSymbol, ...]

    @property
    def free_poly_degree(self) -> int:
        return len(self.free_syms) - 1

    def parameters(self) -> Tuple[ParamSymbol, ...]:
        return self.free_syms + self.y_syms

    def as_diffpoly(self) -> DiffPoly:
        return _form_poly(self, 0)

    def derivative(self, times: int) -> DiffPoly:
        return _form_poly(self, times)

    def __str__(self):
        return str(self.as_diffpoly())


@lru_cache(maxsize=4096)
def _form_poly(form: LinearForm, times: int) -> DiffPoly:
    if times:
        return _form_poly(form, times - 1).differentiate()
    p = DiffPoly.y(form.k)
    for d, s in enumerate(form.free_syms):
        p = p + DiffPoly.monomial(ParamPoly.symbol(s), x_exp=d)
    for j, s in enumerate(form.y_syms):
        p = p + DiffPoly.y(j) * ParamPoly.symbol(s)
    return p


def build_common_form(k: int, free_poly_degree: int = 0) -> LinearForm:
    """The shared factor L_{c,k} with symbols W[j,k] (and V[d] when D > 0)."""
    if k < 0 or free_poly_degree < 0:
        raise ValueError("k and free_poly_degree must be non-negative")
    if free_poly_degree == 0:
        free = (W(0, k),)
    else:
        free = tuple(V(d) for d in range(free_poly_degree + 1))
    return LinearForm(k, free, tuple(W(j + 1, k) for j in range(k)))


def build_fresh_form(k: int, sigma: int, mu: int, free_poly_degree: int = 0) -> LinearForm:
    """A per-iteration form with symbols W[j,sigma,mu] / V[d,sigma,mu]."""
    if free_poly_degree == 0:
        free = (W(0, sigma, mu),)
    else:
        free = tuple(V(d, sigma, mu) for d in range(free_poly_degree + 1))
    return LinearForm(k, free, tuple(W(j + 1, sigma, mu) for j in range(k)))


@dataclass(frozen=True)
class FactorSummand:
    coeff: DiffPoly
    factors: Tuple[Tuple[LinearForm, int, int], ...]  # (form, derivative order, exponent)

    def expand(self) -> DiffPoly:
        out = self.coeff
        for form, i, e in self.factors:
            out = out * form.derivative(i) ** e
        return out

    def __str__(self):
        parts = []
        for form, i, e in self.factors:
            name = f"L{_form_label(form)}" + ("'" * i if i <= 3 else f"^({i})")
            parts.append(name if e == 1 else f"{name}^{e}")
        return f"({self.coeff})*" + "*".join(parts)


def _form_label(form: LinearForm) -> str:
    idx = form.y_syms[0].indices if form.y_syms else form.free_syms[0].indices
    return "[" + ",".join(str(i) for i in idx[1:]) + "]"


@dataclass
class Factorization:
    p_input: DiffPoly
    k: int
    mode: Mode
    free_poly_degree: int
    common_form: LinearForm
    summands: List[FactorSummand]
    remainder: DiffPoly
    parameters: Tuple[ParamSymbol, ...] = ()  # creation order
    iterations: int = 0

    def expand(self) -> DiffPoly:
        return expand(self)

    def forms(self) -> List[LinearForm]:
        seen = {self.common_form: None}
        for s in self.summands:
            for form, _, _ in s.factors:
                seen.setdefault(form, None)
        return list(seen)


def formal_k_factorization(p: DiffPoly, k: int, mode: Mode | str = Mode.COMMON,
                           free_poly_degree: int = 0,
                           max_iterations: int = DEFAULT_MAX_ITERATIONS) -> Factorization:
    mode = Mode(mode)
    if p.is_zero():
        raise ValueError("cannot factorize the zero polynomial")
    n = p.order()
    if n is None or not 0 <= k <= n:
        raise ValueError(f"k={k} outside [0, order(p)={n}]")
    if p.parameters():
        raise ValueError("input polynomial must not contain parameters")

    common = build_common_form(k, free_poly_degree)
    params: List[ParamSymbol] = list(common.parameters())
    summands: List[FactorSummand] = []
    R = p
    prev_key = None
    mu = 0
    while True:
        high = [m for m in R.terms if len(m.derivs) > k]
        if not high:
            break
        mu += 1
        if mu > max_iterations:
            raise ResourceLimit(f"factorization exceeded {max_iterations} iterations")
        m = max(high, key=DiffMonomial.lex_key)
        key = m.lex_key()
        # the cancellation argument guarantees strict descent
        assert prev_key is None or key < prev_key, "maximum term did not decrease"
        prev_key = key
        s = R.terms[m]

        coeff = DiffPoly({DiffMonomial.make(m.x_exp, m.derivs[:k]): s})
        factors = []
        for i in range(k, len(m.derivs)):
            e = m.derivs[i]
            if not e:
                continue
            if mode is Mode.COMMON or i == k:
                form = common
            else:
                form = build_fresh_form(k, i, mu, free_poly_degree)
                params.extend(form.parameters())
            factors.append((form, i - k, e))
        summand = FactorSummand(coeff, tuple(factors))
        R = R - summand.expand()
        summands.append(summand)

    return Factorization(p, k, mode, free_poly_degree, common, summands, R,
                         tuple(params), mu)


def expand(f: Factorization) -> DiffPoly:
    out = f.remainder
    for s in f.summands:
        out = out + s.expand()
    return out


def remainder_system(f: Factorization) -> List[ParamPoly]:
    """Coefficients of the remainder, one per monomial, ascending lex order."""
    return [c for _, c in f.remainder.sorted_terms(descending=False)]


__all__ = [
    "Mode",
    "LinearForm",
    "FactorSummand",
    "Factorization",
    "build_common_form",
    "build_fresh_form",
    "formal_k_factorization",
    "expand",
    "remainder_system",
]
