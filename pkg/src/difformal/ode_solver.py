"""Closed-form solutions of constant-coefficient linear ODEs.

Equations have the shape ``y^(k) + a_{k-1} y^(k-1) + ... + a_0 y = f(x)``
with rational ``a_j`` and a polynomial forcing ``f`` whose coefficients may
still carry free parameters.  Homogeneous parts come from the characteristic
roots; the particular part is a polynomial found by undetermined
coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath

from . import univariate
from .algebra import ParamPoly, ParamSymbol
from .diffpoly import DiffPoly
from .parser import _join, _signed_term

DEFAULT_DIGITS = 30
NUMERIC_ROOT_TOL = mpmath.mpf("1e-20")


class QuadSurd:
    """Exact ``a + b*sqrt(d)`` with rational a, b and squarefree d not in {0, 1}.

    Negative ``d`` gives the complex conjugate pairs of real quadratics.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _lift(self, other):
        if isinstance(other, QuadSurd):
            if other.d != self.d and other.b and self.b:
                raise ValueError("mixing different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadSurd(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadSurd(self.a + o.a, self.b + o.b, self.d if self.b else o.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self.d if self.b else o.d
        return QuadSurd(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = QuadSurd(1, 0, self.d)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __complex__(self):
        if self.d < 0:
            return complex(float(self.a), float(self.b) * math.sqrt(-self.d))
        return complex(float(self.a) + float(self.b) * math.sqrt(self.d), 0.0)

    def __float__(self):
        if self.d < 0 and self.b:
            raise TypeError("complex surd")
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __str__(self):
        rad = f"sqrt({self.d})"
        b = self.b
        if b == 1:
            bpart = rad
        elif b == -1:
            bpart = "-" + rad
        else:
            bpart = f"{b}*{rad}"
        if self.a == 0:
            return bpart
        if bpart.startswith("-"):
            return f"{self.a} - {bpart[1:]}"
        return f"{self.a} + {bpart}"

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, {self.d})"


ExactReal = Union[Fraction, QuadSurd]


def _squarefree_split(n: int) -> Tuple[int, int]:
    """n = s^2 * t with t squarefree (up to trial-division bounds)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, t = 1, 1
    p = 2
    while p * p <= n and p < 1_000_000:
        while n % (p * p) == 0:
            n //= p * p
            s *= p
        if n % p == 0:
            n //= p
            t *= p
        p += 1
    return s, sign * t * n


@dataclass(frozen=True)
class LinearODE:
    order: int
    y_coeffs: Tuple[ParamPoly, ...]  # a_0..a_{k-1}
    forcing: Tuple[ParamPoly, ...]  # ascending powers of x

    @classmethod
    def from_coefficients(cls, y_coeffs: Sequence, forcing: Sequence = ()) -> "LinearODE":
        ys = tuple(c if isinstance(c, ParamPoly) else ParamPoly.const(c) for c in y_coeffs)
        fs = [c if isinstance(c, ParamPoly) else ParamPoly.const(c) for c in forcing]
        while fs and not fs[-1]:
            fs.pop()
        return cls(len(ys), ys, tuple(fs))

    @classmethod
    def from_form(cls, L: DiffPoly, k: int) -> "LinearODE":
        """Read ``free(x) + sum a_j y^(j) + y^(k) = 0`` from an evaluated form."""
        a = [ParamPoly() for _ in range(k)]
        free: Dict[int, ParamPoly] = {}
        lead = ParamPoly()
        for m, c in L.terms.items():
            if not m.derivs:
                free[m.x_exp] = c
                continue
            if m.x_exp or m.y_degree() != 1:
                raise ValueError("form is not linear with constant coefficients")
            j = len(m.derivs) - 1
            if j == k:
                lead = c
            elif j < k:
                a[j] = c
            else:
                raise ValueError(f"form has order above {k}")
        if lead != 1:
            raise ValueError("form must be monic in y^(k)")
        deg = max(free, default=-1)
        forcing = [-free.get(d, ParamPoly()) for d in range(deg + 1)]
        return cls.from_coefficients(a, forcing)

    def is_rational(self) -> bool:
        return all(c.is_constant() for c in self.y_coeffs)

    def char_poly(self) -> List[Fraction]:
        if not self.is_rational():
            raise ValueError("characteristic polynomial has symbolic coefficients")
        return [c.constant_value() for c in self.y_coeffs] + [Fraction(1)]

    def __str__(self):
        lhs = DiffPoly.y(self.order)
        for j, c in enumerate(self.y_coeffs):
            lhs = lhs + DiffPoly.y(j) * c
        rhs = DiffPoly()
        for d, c in enumerate(self.forcing):
            rhs = rhs + DiffPoly.monomial(c, x_exp=d)
        return f"{lhs} = {rhs}"


@dataclass(frozen=True)
class CharRoot:
    value: object  # Fraction, QuadSurd or mpmath.mpc
    multiplicity: int
    kind: str  # "rational", "surd", "numeric"

    @property
    def exact(self) -> bool:
        return self.kind != "numeric"

    def __complex__(self):
        return complex(self.value)


def characteristic_roots(ode: LinearODE, digits: int = DEFAULT_DIGITS) -> List[CharRoot]:
    """All roots of the characteristic polynomial with multiplicities.

    Rational roots are exact; a leftover quadratic gives exact surds; anything
    else is found numerically at ``digits`` significant digits.
    """
    if ode.order < 1:
        raise ValueError("characteristic roots need order >= 1")
    roots: List[CharRoot] = []
    for factor, mult in univariate.squarefree_decomposition(ode.char_poly()):
        rats = univariate.rational_roots(factor)
        roots.extend(CharRoot(r, mult, "rational") for r in rats)
        rest = univariate.monic(univariate.deflate(factor, rats))
        if len(rest) == 3:
            q, p = rest[0], rest[1]
            disc = p * p - 4 * q
            s, t = _squarefree_split(disc.numerator * disc.denominator)
            half = Fraction(s, 2 * disc.denominator)
            roots.append(CharRoot(QuadSurd(-p / 2, half, t), mult, "surd"))
            roots.append(CharRoot(QuadSurd(-p / 2, -half, t), mult, "surd"))
        elif len(rest) > 3:
            roots.extend(CharRoot(r, mult, "numeric") for r in _numeric_roots(rest, digits))
    return sorted(roots, key=_root_sort_key)


def _numeric_roots(coeffs: Sequence[Fraction], digits: int):
    with mpmath.workdps(digits):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(coeffs)]
        found = mpmath.polyroots(desc, maxsteps=500, extraprec=4 * digits)
        tiny = mpmath.mpf(10) ** (-(digits - 5))
        out = []
        for r in found:
            r = mpmath.mpc(r)
            if abs(r.imag) <= tiny * max(1, abs(r)):
                r = mpmath.mpc(r.real, 0)
            out.append(r)
        # snap conjugates so pairs match exactly
        for i, r in enumerate(out):
            if r.imag < 0:
                partner = min((s for s in out if s.imag > 0), key=lambda s: abs(s - mpmath.conj(r)))
                out[i] = mpmath.conj(partner)
    return out


def numeric_root_residual(ode: LinearODE, root: CharRoot, digits: int = DEFAULT_DIGITS):
    with mpmath.workdps(digits):
        desc = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(ode.char_poly())]
        return abs(mpmath.polyval(desc, mpmath.mpc(root.value)))


def _root_sort_key(r: CharRoot):
    z = complex(r.value)
    return (z.real, z.imag)


def _imag_sign(r: CharRoot) -> int:
    if r.kind == "surd":
        if r.value.d > 0:
            return 0
        return 1 if r.value.b > 0 else -1
    if r.kind == "numeric":
        im = r.value.imag
        return 0 if im == 0 else (1 if im > 0 else -1)
    return 0


@dataclass(frozen=True)
class HomTerm:
    """``label * x^power * e^(alpha x) * trig(beta x)``.

    ``root`` is the characteristic root the term came from (the member with
    positive imaginary part for a complex pair); folded constants and
    symbolic rates have ``root=None``.
    """

    power: int
    alpha: object = Fraction(0)
    beta: object = Fraction(0)
    trig: Optional[str] = None
    root: object = None
    folded: bool = False
    label: str = ""

    def is_polynomial(self) -> bool:
        return self.trig is None and not _is_nonzero(self.alpha)


def _is_nonzero(v) -> bool:
    if isinstance(v, QuadSurd):
        return not v.is_zero()
    if isinstance(v, ParamPoly):
        return not v.is_zero()
    return v != 0


@dataclass(frozen=True)
class GeneralSolution:
    order: int
    terms: Tuple[HomTerm, ...]
    particular: Tuple[ParamPoly, ...]  # ascending powers of x
    exact: bool = True
    parametric: bool = False

    @property
    def constants(self) -> List[str]:
        return [t.label for t in self.terms]

    def symbols(self) -> frozenset:
        out = set()
        for c in self.particular:
            out |= c.symbols()
        for t in self.terms:
            for v in (t.alpha, t.beta):
                if isinstance(v, ParamPoly):
                    out |= v.symbols()
        return frozenset(out)

    def __str__(self):
        return format_solution(self)

    # numeric evaluation ---------------------------------------------------

    def derivatives(self, x: float, constants: Mapping[str, float], n: int,
                    params: Mapping[ParamSymbol, float] | None = None) -> List[float]:
        """[y(x), y'(x), ..., y^(n)(x)] for the given constant values."""
        params = params or {}
        out = [0.0] * (n + 1)
        for t in self.terms:
            c = constants[t.label]
            r = complex(_num(t.alpha, params), _num(t.beta, params))
            e = cmath.exp(r * x)
            for order in range(n + 1):
                acc = 0j
                for j in range(min(t.power, order) + 1):
                    acc += (math.comb(order, j) * math.perm(t.power, j)
                            * x ** (t.power - j) * r ** (order - j))
                val = acc * e
                out[order] += c * (val.imag if t.trig == "sin" else val.real)
        coeffs = [_num(c, params) for c in self.particular]
        for order in range(n + 1):
            out[order] += univariate.evaluate(coeffs, x) if coeffs else 0.0
            coeffs = [i * coeffs[i] for i in range(1, len(coeffs))]
        return out


def _num(v, params) -> float:
    if isinstance(v, ParamPoly):
        return float(v.substitute({s: Fraction(val) for s, val in params.items()}).constant_value())
    if isinstance(v, QuadSurd):
        return float(v)
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return float(mpmath.re(v))
    return float(v)


def general_solution(ode: LinearODE, digits: int = DEFAULT_DIGITS) -> GeneralSolution:
    k = ode.order
    if k == 0:
        return _relabel(GeneralSolution(0, (), ode.forcing))
    if not ode.is_rational():
        if k == 1 and not ode.forcing:
            rate = -ode.y_coeffs[0]
            term = HomTerm(0, rate)
            return _relabel(GeneralSolution(1, (term,), (), exact=True, parametric=True))
        raise ValueError(f"no closed form for symbolic coefficients: {ode}")

    terms: List[HomTerm] = []
    exact = True
    for root in characteristic_roots(ode, digits):
        sign = _imag_sign(root)
        if sign < 0:
            continue
        exact = exact and root.exact
        if sign == 0:
            alpha = root.value
            if root.kind == "numeric":
                alpha = root.value.real
            for m in range(root.multiplicity):
                terms.append(HomTerm(m, alpha, Fraction(0), None, root.value))
        else:
            alpha, beta = _split_complex(root)
            for m in range(root.multiplicity):
                terms.append(HomTerm(m, alpha, beta, "cos", root.value))
                terms.append(HomTerm(m, alpha, beta, "sin", root.value))
    particular = particular_solution(ode)
    return _relabel(GeneralSolution(k, tuple(terms), particular, exact=exact))


def _split_complex(root: CharRoot):
    if root.kind == "numeric":
        return root.value.real, root.value.imag
    z = root.value
    # a + b*sqrt(d), d < 0: imaginary part b*sqrt(-d)
    s, t = _squarefree_split(-z.d)
    beta = z.b * s if t == 1 else QuadSurd(0, z.b * s, t)
    return z.a, beta


def particular_solution(ode: LinearODE) -> Tuple[ParamPoly, ...]:
    """Polynomial solution of the forced equation, skipping powers below the
    multiplicity of the root 0."""
    k = ode.order
    f = list(ode.forcing)
    if not f:
        return ()
    a = [c.constant_value() for c in ode.y_coeffs] + [Fraction(1)]
    m0 = 0
    while a[m0] == 0:
        m0 += 1
    d = len(f) - 1
    b: Dict[int, ParamPoly] = {}
    for t in range(d, -1, -1):
        rhs = f[t]
        for j in range(m0 + t + 1, m0 + d + 1):
            i = j - t
            if i <= k and a[i]:
                rhs = rhs - b[j] * (a[i] * Fraction(math.perm(j, i)))
        b[m0 + t] = rhs * (1 / (a[m0] * Fraction(math.perm(m0 + t, m0))))
    out = [ParamPoly() for _ in range(m0 + d + 1)]
    for j, c in b.items():
        out[j] = c
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def fold_free_parameters(sol: GeneralSolution, free_syms) -> GeneralSolution:
    """Absorb free parameters that only shift the family into new constants.

    A coefficient of x^j in the particular part is folded when it is affine in
    the free symbols and none of its symbols occurs in another coefficient;
    its value then ranges over all reals independently, so it becomes an
    arbitrary constant times x^j.  Anything else keeps its symbols and marks
    the family parametric.
    """
    free_syms = frozenset(free_syms)
    if not free_syms:
        return sol
    rate_syms = set()
    for t in sol.terms:
        for v in (t.alpha, t.beta):
            if isinstance(v, ParamPoly):
                rate_syms |= v.symbols() & free_syms
    where: Dict[ParamSymbol, set] = {}
    for j, c in enumerate(sol.particular):
        for s in c.symbols() & free_syms:
            where.setdefault(s, set()).add(j)

    particular = list(sol.particular)
    terms = list(sol.terms)
    homog_powers = {t.power for t in terms if t.is_polynomial()}
    for j, c in enumerate(sol.particular):
        syms = c.symbols() & free_syms
        if not syms:
            continue
        affine = all(sum(e for s, e in m if s in free_syms) <= 1 for m in c.terms)
        exclusive = all(where[s] == {j} and s not in rate_syms for s in syms)
        if affine and exclusive and not (c.symbols() - free_syms):
            particular[j] = ParamPoly()
            if j not in homog_powers:
                terms.append(HomTerm(j, folded=True))
    while particular and not particular[-1]:
        particular.pop()
    folded = replace(sol, terms=tuple(terms), particular=tuple(particular))
    leftover = folded.symbols() & free_syms
    folded = replace(folded, parametric=sol.parametric or bool(leftover))
    return _relabel(folded)


# -- labelling and rendering ---------------------------------------------------


def _render_order(terms: Sequence[HomTerm]):
    growing = [t for t in terms if not t.is_polynomial()]
    flat = [t for t in terms if t.is_polynomial()]
    growing.sort(key=lambda t: (_sort_num(t.alpha), _sort_num(t.beta), t.power, t.trig or ""))
    flat.sort(key=lambda t: t.power)
    return growing, flat


def _sort_num(v):
    if isinstance(v, ParamPoly):
        return 0.0
    try:
        return _num(v, {})
    except TypeError:
        return 0.0


def _relabel(sol: GeneralSolution) -> GeneralSolution:
    growing, flat = _render_order(sol.terms)
    ordered = growing + flat
    if len(ordered) == 1:
        labels = ["c"]
    else:
        labels = [f"c{i + 1}" for i in range(len(ordered))]
    return replace(sol, terms=tuple(replace(t, label=l) for t, l in zip(ordered, labels)))


def format_exact(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, ParamPoly):
        return f"({v})"
    if isinstance(v, QuadSurd):
        return f"({v})"
    return mpmath.nstr(v, 15)


def _times_x(v) -> str:
    if isinstance(v, Fraction):
        if v == 1:
            return "x"
        if v == -1:
            return "-x"
        return f"{v}*x"
    if isinstance(v, ParamPoly) and v.is_constant():
        return _times_x(v.constant_value())
    if isinstance(v, (ParamPoly, QuadSurd)):
        return f"({v})*x"
    return f"{mpmath.nstr(v, 15)}*x"


def _term_body(t: HomTerm) -> str:
    parts = [t.label]
    if t.power:
        parts.append("x" if t.power == 1 else f"x^{t.power}")
    if _is_nonzero(t.alpha):
        ax = _times_x(t.alpha)
        parts.append("e^x" if ax == "x" else f"e^({ax})")
    if t.trig:
        parts.append(f"{t.trig}({_times_x(t.beta)})")
    return "*".join(parts)


def format_solution(sol: GeneralSolution, lhs: str = "y = ") -> str:
    growing, flat = _render_order(sol.terms)
    pieces = [(False, _term_body(t)) for t in growing]
    for j in range(len(sol.particular) - 1, -1, -1):
        c = sol.particular[j]
        if c:
            pieces.append(_signed_term(c, "" if j == 0 else ("x" if j == 1 else f"x^{j}")))
    pieces.extend((False, _term_body(t)) for t in flat)
    return lhs + (_join(pieces) if pieces else "0")


# -- verification helpers ----------------------------------------------------------


def verify_exact(ode: LinearODE, sol: GeneralSolution) -> bool:
    """Symbolic check that ``sol`` solves ``ode`` (exact rates only).

    Each basis function x^m e^{rx} must satisfy P^{(j)}(r) = 0 for j <= m,
    and the particular polynomial must reproduce the forcing exactly.
    """
    if not sol.exact or not ode.is_rational():
        raise ValueError("exact verification needs exact rates and rational coefficients")
    if ode.order == 0:
        return tuple(sol.particular) == tuple(ode.forcing)
    P = ode.char_poly()
    for t in sol.terms:
        if t.folded or t.root is None:
            return False
        d = P
        for j in range(t.power + 1):
            v = univariate.evaluate(d, t.root)
            if _is_nonzero(v):
                return False
            d = univariate.derivative(d)
    return apply_operator(ode, sol.particular) == tuple(ode.forcing)


def apply_operator(ode: LinearODE, poly: Sequence[ParamPoly]) -> Tuple[ParamPoly, ...]:
    """Coefficients (ascending) of L[poly] for a polynomial in x."""
    a = [c for c in ode.y_coeffs] + [ParamPoly.const(1)]
    out: Dict[int, ParamPoly] = {}
    for j, b in enumerate(poly):
        if not b:
            continue
        for i, ai in enumerate(a):
            if i > j or not ai:
                continue
            out[j - i] = out.get(j - i, ParamPoly()) + b * ai * math.perm(j, i)
    deg = max((d for d, c in out.items() if c), default=-1)
    return tuple(out.get(d, ParamPoly()) for d in range(deg + 1))


__all__ = [
    "QuadSurd",
    "LinearODE",
    "CharRoot",
    "HomTerm",
    "GeneralSolution",
    "characteristic_roots",
    "general_solution",
    "particular_solution",
    "fold_free_parameters",
    "format_solution",
    "verify_exact",
    "apply_operator",
    "numeric_root_residual",
]
