"""Differential polynomials in one unknown function y(x).

A monomial is ``x^a * prod_i (y^(i))^theta_i``; coefficients are
:class:`~difformal.algebra.ParamPoly` so that partially reduced polynomials
can carry the undetermined parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .algebra import ParamPoly, _rule_mapping
from .errors import EmptyPolynomial, UnresolvedParameter

LT, EQ, GT = -1, 0, 1


class DiffMonomial(NamedTuple):
    x_exp: int
    derivs: Tuple[int, ...]

    @classmethod
    def make(cls, x_exp: int = 0, derivs: Sequence[int] = ()) -> "DiffMonomial":
        d = list(derivs)
        while d and d[-1] == 0:
            d.pop()
        return cls(x_exp, tuple(d))

    @property
    def order(self) -> Optional[int]:
        """Highest derivative index present, or None for a pure power of x."""
        return len(self.derivs) - 1 if self.derivs else None

    def y_degree(self) -> int:
        return sum(self.derivs)

    def lex_key(self):
        # Higher derivative exponents dominate; x exponent is the last tie-break.
        # A longer (trimmed) derivs vector has a positive entry where the
        # shorter one has 0, so length is compared first.
        return (len(self.derivs), self.derivs[::-1], self.x_exp)

    def __mul__(self, other):
        if not isinstance(other, DiffMonomial):
            return NotImplemented
        a, b = self.derivs, other.derivs
        if len(a) < len(b):
            a, b = b, a
        d = list(a)
        for i, e in enumerate(b):
            d[i] += e
        return DiffMonomial(self.x_exp + other.x_exp, tuple(d))


ONE = DiffMonomial(0, ())


def lex_compare(m1: DiffMonomial, m2: DiffMonomial) -> int:
    k1, k2 = m1.lex_key(), m2.lex_key()
    if k1 == k2:
        return EQ
    return GT if k1 > k2 else LT


CoeffLike = Union[ParamPoly, int, Fraction]


def _as_ppoly(c: CoeffLike) -> ParamPoly:
    if isinstance(c, ParamPoly):
        return c
    return ParamPoly.const(c)


class DiffPoly:
    """Sparse map DiffMonomial -> ParamPoly with no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[DiffMonomial, CoeffLike] | None = None):
        clean: Dict[DiffMonomial, ParamPoly] = {}
        if terms:
            for m, c in terms.items():
                c = _as_ppoly(c)
                if c:
                    clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def const(cls, c: CoeffLike) -> "DiffPoly":
        return cls({ONE: c})

    @classmethod
    def x(cls, power: int = 1) -> "DiffPoly":
        return cls({DiffMonomial(power, ()): 1})

    @classmethod
    def y(cls, order: int = 0, power: int = 1) -> "DiffPoly":
        derivs = [0] * (order + 1)
        derivs[order] = power
        return cls({DiffMonomial.make(0, derivs): 1})

    @classmethod
    def monomial(cls, coeff: CoeffLike, x_exp: int = 0, derivs: Sequence[int] = ()) -> "DiffPoly":
        return cls({DiffMonomial.make(x_exp, derivs): coeff})

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self) -> Optional[int]:
        orders = [m.order for m in self.terms if m.derivs]
        return max(orders) if orders else None

    def sorted_terms(self, descending: bool = True):
        return sorted(self.terms.items(), key=lambda mc: mc[0].lex_key(), reverse=descending)

    def max_term(self) -> Tuple[DiffMonomial, ParamPoly]:
        if not self.terms:
            raise EmptyPolynomial("max_term of the zero polynomial")
        m = max(self.terms, key=DiffMonomial.lex_key)
        return m, self.terms[m]

    def parameters(self) -> frozenset:
        out = set()
        for c in self.terms.values():
            out |= c.symbols()
        return frozenset(out)

    def is_numeric(self) -> bool:
        return all(c.is_constant() for c in self.terms.values())

    # -- ring operations --------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction, ParamPoly)):
            return DiffPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                v = out[m] + c
                if v:
                    out[m] = v
                else:
                    del out[m]
            else:
                out[m] = c
        return DiffPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            if not other:
                return DiffPoly()
            return DiffPoly._raw({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[DiffMonomial, ParamPoly] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1 * m2
                c = c1 * c2
                if m in out:
                    v = out[m] + c
                    if v:
                        out[m] = v
                    else:
                        del out[m]
                elif c:
                    out[m] = c
        return DiffPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = DiffPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly)):
            other = DiffPoly.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus and evaluation ------------------------------------------

    def differentiate(self, times: int = 1) -> "DiffPoly":
        p = self
        for _ in range(times):
            p = _derive_once(p)
        return p

    def substitute_params(self, rule) -> "DiffPoly":
        mapping = _rule_mapping(rule)
        out: Dict[DiffMonomial, ParamPoly] = {}
        for m, c in self.terms.items():
            v = c.substitute(mapping)
            if v:
                out[m] = v
        return DiffPoly._raw(out)

    def evaluate_numeric(self, pt: "NumericPoint") -> float:
        return evaluate_numeric(self, pt)

    def __str__(self):
        from .parser import format_diffpoly

        return format_diffpoly(self)

    def __repr__(self):
        return f"DiffPoly({str(self)!r})"


def _derive_once(p: DiffPoly) -> DiffPoly:
    out: Dict[DiffMonomial, ParamPoly] = {}

    def bump(m, c):
        if m in out:
            v = out[m] + c
            if v:
                out[m] = v
            else:
                del out[m]
        else:
            out[m] = c

    for m, c in p.terms.items():
        a, d = m.x_exp, m.derivs
        if a:
            bump(DiffMonomial(a - 1, d), c * a)
        for i, e in enumerate(d):
            if not e:
                continue
            nd = list(d)
            nd[i] -= 1
            if i + 1 < len(nd):
                nd[i + 1] += 1
            else:
                nd.append(1)
            bump(DiffMonomial.make(a, nd), c * e)
    return DiffPoly._raw(out)


def order(p: DiffPoly) -> Optional[int]:
    return p.order()


def max_term(p: DiffPoly) -> Tuple[DiffMonomial, ParamPoly]:
    return p.max_term()


def differentiate(p: DiffPoly) -> DiffPoly:
    return p.differentiate()


def dp_combine(a: DiffPoly, b: DiffPoly, op: str) -> DiffPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def substitute_params(p: DiffPoly, rule) -> DiffPoly:
    return p.substitute_params(rule)


@dataclass(frozen=True)
class NumericPoint:
    x: float
    y_derivs: Tuple[float, ...]


def evaluate_numeric(p: DiffPoly, pt: NumericPoint) -> float:
    total, _ = evaluate_terms(p, pt)
    return total


def evaluate_terms(p: DiffPoly, pt: NumericPoint) -> Tuple[float, float]:
    """Return (value, largest absolute term value) of ``p`` at ``pt``."""
    n = p.order()
    if n is not None and len(pt.y_derivs) <= n:
        raise ValueError(f"point supplies {len(pt.y_derivs)} derivatives, order is {n}")
    total = 0.0
    biggest = 0.0
    for m, c in p.terms.items():
        if not c.is_constant():
            raise UnresolvedParameter(f"coefficient {c} still has free parameters")
        v = float(c.constant_value()) * pt.x ** m.x_exp
        for i, e in enumerate(m.derivs):
            if e:
                v *= pt.y_derivs[i] ** e
        total += v
        biggest = max(biggest, abs(v))
    return total, biggest


__all__ = [
    "DiffMonomial",
    "DiffPoly",
    "NumericPoint",
    "lex_compare",
    "order",
    "max_term",
    "differentiate",
    "dp_combine",
    "substitute_params",
    "evaluate_numeric",
    "evaluate_terms",
    "LT",
    "EQ",
    "GT",
]
