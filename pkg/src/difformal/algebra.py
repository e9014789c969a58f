"""Exact parameter polynomials.

Coefficients are :class:`fractions.Fraction`; variables are the undetermined
parameters of the linear forms (``W[...]`` for derivative/constant slots,
``V[...]`` for the coefficients of an x-polynomial free term).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, NamedTuple, Tuple, Union


class ParamSymbol(NamedTuple):
    kind: str
    indices: Tuple[int, ...]

    def __str__(self):
        return f"{self.kind}[{','.join(str(i) for i in self.indices)}]"

    __repr__ = __str__


def W(*indices):
    return ParamSymbol("W", tuple(indices))


def V(*indices):
    return ParamSymbol("V", tuple(indices))


# A parameter monomial is a tuple of (symbol, exponent) pairs sorted by symbol.
PMonomial = Tuple[Tuple[ParamSymbol, int], ...]
Scalar = Union[int, Fraction]

ONE_MONO: PMonomial = ()


def _mono_mul(a: PMonomial, b: PMonomial) -> PMonomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for s, e in b:
        out[s] = out.get(s, 0) + e
    return tuple(sorted(out.items()))


def _mono_degree(m: PMonomial) -> int:
    return sum(e for _, e in m)


def _fmt_fraction(c: Fraction) -> str:
    return str(c)


class ParamPoly:
    """Sparse polynomial in parameter symbols with rational coefficients.

    Instances are treated as immutable; the ``terms`` dict never holds zero
    coefficients, so two equal polynomials have identical term maps.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[PMonomial, Scalar] | None = None):
        clean: Dict[PMonomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    clean[m] = Fraction(c)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[PMonomial, Fraction]) -> "ParamPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "ParamPoly":
        return cls({ONE_MONO: c}) if c else cls()

    @classmethod
    def symbol(cls, s: ParamSymbol) -> "ParamPoly":
        return cls._raw({((s, 1),): Fraction(1)})

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial. Raises ValueError otherwise."""
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(ONE_MONO, Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def symbols(self) -> frozenset:
        return frozenset(s for m in self.terms for s, _ in m)

    def degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, s: ParamSymbol) -> int:
        return max((e for m in self.terms for t, e in m if t == s), default=0)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "ParamPoly":
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ParamPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw({m: -c for m, c in self.terms.items()})

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
        if isinstance(other, (int, Fraction)):
            if not other:
                return ParamPoly()
            return ParamPoly._raw({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: Dict[PMonomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return ParamPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = ParamPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- evaluation -------------------------------------------------------

    def substitute(self, rule: Mapping[ParamSymbol, Union[Scalar, "ParamPoly"]]) -> "ParamPoly":
        """Replace every symbol that ``rule`` assigns; others stay symbolic."""
        if not rule:
            return self
        out = ParamPoly()
        for m, c in self.terms.items():
            kept = []
            factor: Union[Fraction, ParamPoly] = c
            for s, e in m:
                if s in rule:
                    val = rule[s]
                    factor = factor * (val ** e)
                else:
                    kept.append((s, e))
            out = out + ParamPoly._raw({tuple(kept): Fraction(1)}) * factor
        return out

    def __str__(self):
        return format_ppoly(self)

    def __repr__(self):
        return f"ParamPoly({format_ppoly(self)!r})"


def _sorted_terms(p: ParamPoly):
    # higher total degree first, then symbol order
    return sorted(p.terms.items(), key=lambda mc: (-_mono_degree(mc[0]), mc[0]))


def format_pmonomial(m: PMonomial) -> str:
    return "*".join(str(s) if e == 1 else f"{s}^{e}" for s, e in m)


def format_ppoly(p: ParamPoly) -> str:
    if not p.terms:
        return "0"
    pieces = []
    for i, (m, c) in enumerate(_sorted_terms(p)):
        neg = c < 0
        a = -c if neg else c
        if not m:
            body = _fmt_fraction(a)
        elif a == 1:
            body = format_pmonomial(m)
        else:
            body = f"{_fmt_fraction(a)}*{format_pmonomial(m)}"
        if i == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def ppoly_combine(a: ParamPoly, b: ParamPoly, op: str) -> ParamPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def ppoly_substitute(p: ParamPoly, rule) -> ParamPoly:
    return p.substitute(_rule_mapping(rule))


def _rule_mapping(rule) -> Mapping[ParamSymbol, Union[Scalar, ParamPoly]]:
    # accept plain dicts or anything exposing an ``assignments`` mapping
    return getattr(rule, "assignments", rule)


def collect_symbols(polys: Iterable[ParamPoly]) -> frozenset:
    out = set()
    for p in polys:
        out |= p.symbols()
    return frozenset(out)
