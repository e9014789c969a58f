"""Exact solving of the remainder-elimination systems.

Lex Buchberger over Q followed by back-substitution: branch on the rational
roots of univariate basis elements, recompute the basis after each
substitution, and report variables left unconstrained as free.  Components
that cannot be resolved this way are returned as :class:`Unresolved` with
their residual basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from . import univariate
from .algebra import ParamPoly, ParamSymbol, collect_symbols
from .errors import ResourceLimit

DEFAULT_MAX_PAIRS = 100_000
DEFAULT_MAX_DEGREE = 64

Exp = Tuple[int, ...]
IPoly = Dict[Exp, Fraction]  # internal dense-key representation


@dataclass(frozen=True)
class PolySystem:
    equations: Tuple[ParamPoly, ...]
    variables: Tuple[ParamSymbol, ...]  # highest lex variable first

    def __post_init__(self):
        missing = collect_symbols(self.equations) - set(self.variables)
        if missing:
            raise ValueError(f"symbols {sorted(missing)} not declared as variables")


@dataclass(frozen=True)
class GroebnerBasis:
    polys: Tuple[ParamPoly, ...]
    variables: Tuple[ParamSymbol, ...]

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0] == 1


@dataclass(frozen=True)
class RuleSet:
    assignments: Mapping[ParamSymbol, Fraction]
    free: FrozenSet[ParamSymbol] = frozenset()

    def __post_init__(self):
        if set(self.assignments) & set(self.free):
            raise ValueError("assigned and free symbols overlap")

    def symbols(self):
        return sorted(set(self.assignments) | set(self.free))

    def as_json(self) -> Dict[str, str]:
        out = {}
        for s in self.symbols():
            out[str(s)] = "free" if s in self.free else str(self.assignments[s])
        return out

    def __str__(self):
        return "{" + ", ".join(f"{k}={v}" for k, v in self.as_json().items()) + "}"

    def __eq__(self, other):
        if not isinstance(other, RuleSet):
            return NotImplemented
        return dict(self.assignments) == dict(other.assignments) and self.free == other.free

    def __hash__(self):
        return hash((frozenset(self.assignments.items()), self.free))


@dataclass(frozen=True)
class Unresolved:
    """A branch where back-substitution stalled; ``basis`` must vanish."""

    assignments: Mapping[ParamSymbol, Fraction]
    basis: Tuple[ParamPoly, ...]

    def __str__(self):
        fixed = "; ".join(f"{s} = {v}" for s, v in sorted(self.assignments.items()))
        eqs = "; ".join(f"{p} = 0" for p in self.basis)
        return f"{fixed}; {eqs}" if fixed else eqs


@dataclass
class SolveResult:
    rules: List[RuleSet] = field(default_factory=list)
    unresolved: List[Unresolved] = field(default_factory=list)


# -- conversion --------------------------------------------------------------


def _to_internal(p: ParamPoly, index: Mapping[ParamSymbol, int], n: int) -> IPoly:
    out: IPoly = {}
    for m, c in p.terms.items():
        e = [0] * n
        for s, k in m:
            e[index[s]] = k
        out[tuple(e)] = c
    return out


def _from_internal(f: IPoly, variables: Sequence[ParamSymbol]) -> ParamPoly:
    terms = {}
    for e, c in f.items():
        terms[tuple((variables[i], k) for i, k in sorted(enumerate(e), key=lambda t: variables[t[0]]) if k)] = c
    return ParamPoly(terms)


# -- internal polynomial arithmetic --------------------------------------------


def _lm(f: IPoly) -> Exp:
    return max(f)


def _monic(f: IPoly) -> IPoly:
    lc = f[_lm(f)]
    if lc == 1:
        return f
    return {e: c / lc for e, c in f.items()}


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_scaled(p: IPoly, c: Fraction, shift: Exp, g: IPoly) -> None:
    """p -= c * x^shift * g, in place."""
    for e, gc in g.items():
        t = tuple(x + y for x, y in zip(e, shift))
        v = p.get(t, 0) - c * gc
        if v:
            p[t] = v
        else:
            p.pop(t, None)


def _reduce(f: IPoly, G: Sequence[IPoly]) -> IPoly:
    p = dict(f)
    r: IPoly = {}
    lms = [(_lm(g), g) for g in G]
    while p:
        lt = max(p)
        c = p[lt]
        for lm, g in lms:
            if _divides(lm, lt):
                shift = tuple(x - y for x, y in zip(lt, lm))
                _sub_scaled(p, c / g[lm], shift, g)
                break
        else:
            r[lt] = c
            del p[lt]
    return r


def _spoly(f: IPoly, g: IPoly) -> IPoly:
    lf, lg = _lm(f), _lm(g)
    l = _lcm(lf, lg)
    out: IPoly = {}
    _sub_scaled(out, -1 / f[lf], tuple(x - y for x, y in zip(l, lf)), f)
    _sub_scaled(out, 1 / g[lg], tuple(x - y for x, y in zip(l, lg)), g)
    return out


def _is_unit(f: IPoly) -> bool:
    return len(f) == 1 and not any(_lm(f))


def _buchberger(F: Sequence[IPoly], max_pairs: int, max_degree: int) -> List[IPoly]:
    G: List[IPoly] = []
    for f in F:
        if f:
            G.append(_monic(f))
    if not G:
        return []
    for g in G:
        if _is_unit(g):
            return [g]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    done = set()
    created = len(pairs)
    while pairs:
        # normal selection: smallest total degree of the lcm, then lex
        best = min(range(len(pairs)), key=lambda t: _pair_key(G, pairs[t]))
        i, j = pairs.pop(best)
        done.add((i, j))
        li, lj = _lm(G[i]), _lm(G[j])
        l = _lcm(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        if _chain_criterion(G, i, j, l, done):
            continue
        h = _reduce(_spoly(G[i], G[j]), G)
        if not h:
            continue
        h = _monic(h)
        if _is_unit(h):
            return [h]
        if sum(_lm(h)) > max_degree:
            raise ResourceLimit(f"Groebner basis degree exceeded {max_degree}")
        G.append(h)
        n = len(G) - 1
        pairs.extend((k, n) for k in range(n))
        created += n
        if created > max_pairs:
            raise ResourceLimit(f"Groebner pair queue exceeded {max_pairs} pairs")
    return _interreduce(G)


def _pair_key(G, pair):
    l = _lcm(_lm(G[pair[0]]), _lm(G[pair[1]]))
    return (sum(l), l, pair)


def _chain_criterion(G, i, j, l, done) -> bool:
    for k in range(len(G)):
        if k in (i, j):
            continue
        if _divides(_lm(G[k]), l):
            if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
                return True
    return False


def _interreduce(G: List[IPoly]) -> List[IPoly]:
    # drop elements whose leading monomial is divisible by another's
    G = sorted(G, key=_lm)
    minimal: List[IPoly] = []
    for g in G:
        lg = _lm(g)
        if any(_divides(_lm(h), lg) for h in minimal):
            continue
        minimal = [h for h in minimal if not _divides(lg, _lm(h))]
        minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        reduced.append(_monic(_reduce(g, others)))
    return sorted(reduced, key=_lm)


# -- public API --------------------------------------------------------------


def _default_variables(equations: Sequence[ParamPoly]) -> Tuple[ParamSymbol, ...]:
    return tuple(sorted(collect_symbols(equations), reverse=True))


def buchberger(sys: PolySystem, max_pairs: int = DEFAULT_MAX_PAIRS,
               max_degree: int = DEFAULT_MAX_DEGREE) -> GroebnerBasis:
    """Reduced lex Groebner basis, sorted by ascending leading monomial."""
    eqs = [e for e in sys.equations if e]
    if not eqs:
        raise ValueError("system has no nonzero equations")
    variables = tuple(sys.variables)
    index = {s: i for i, s in enumerate(variables)}
    G = _buchberger([_to_internal(e, index, len(variables)) for e in eqs], max_pairs, max_degree)
    return GroebnerBasis(tuple(_from_internal(g, variables) for g in G), variables)


def reduce(p: ParamPoly, basis: GroebnerBasis) -> ParamPoly:
    """Normal form of ``p`` modulo ``basis``."""
    variables = tuple(basis.variables)
    extra = sorted(p.symbols() - set(variables))
    variables = variables + tuple(extra)
    index = {s: i for i, s in enumerate(variables)}
    n = len(variables)
    G = [_to_internal(g, index, n) for g in basis.polys]
    return _from_internal(_reduce(_to_internal(p, index, n), G), variables)


def rational_roots(u: ParamPoly) -> List[Fraction]:
    syms = u.symbols()
    if len(syms) > 1:
        raise ValueError(f"{u} is not univariate")
    if not u:
        raise ValueError("zero polynomial has every value as a root")
    if not syms:
        return []
    (s,) = syms
    return univariate.rational_roots(_univariate_coeffs(u, s))


def _univariate_coeffs(u: ParamPoly, s: ParamSymbol) -> List[Fraction]:
    coeffs = [Fraction(0)] * (u.degree_in(s) + 1)
    for m, c in u.terms.items():
        coeffs[m[0][1] if m else 0] += c
    return coeffs


def solve_triangular(basis: GroebnerBasis, max_pairs: int = DEFAULT_MAX_PAIRS,
                     max_degree: int = DEFAULT_MAX_DEGREE) -> SolveResult:
    """Back-substitute a reduced lex basis into rule sets.

    ``{1}`` yields no rules.  Variables of ``basis.variables`` that end up
    unconstrained are reported free.
    """
    result = SolveResult()
    if basis.is_unit():
        return result
    variables = tuple(basis.variables)
    index = {s: i for i, s in enumerate(variables)}
    n = len(variables)
    G = [_to_internal(g, index, n) for g in basis.polys]
    _back_substitute(G, {}, variables, result, max_pairs, max_degree)
    return result


def _vars_of(f: IPoly) -> List[int]:
    n = len(next(iter(f)))
    return [i for i in range(n) if any(e[i] for e in f)]


def _back_substitute(G, assigned, variables, result, max_pairs, max_degree, is_basis=True):
    """Branch on rational roots of univariate members of ``G``.

    ``G`` need not be a Groebner basis (``is_basis=False``): a basis is only
    computed when no univariate member is available.  Splitting first keeps
    irrational components, which we never resolve, out of Buchberger.
    """
    if not G:
        free = frozenset(s for s in variables if s not in assigned)
        result.rules.append(RuleSet(dict(assigned), free))
        return
    if any(_is_unit(g) for g in G):
        return
    univ = []
    for g in G:
        vs = _vars_of(g)
        if len(vs) == 1:
            univ.append((vs[0], g))
    if not univ:
        if not is_basis:
            G = _buchberger(G, max_pairs, max_degree)
            _back_substitute(G, assigned, variables, result, max_pairs, max_degree)
            return
        result.unresolved.append(Unresolved(dict(assigned), tuple(_from_internal(g, variables) for g in G)))
        return
    # least variable in the lex order carries the highest index; then lowest degree
    vi, g = max(univ, key=lambda t: (t[0], -max(e[t[0]] for e in t[1])))
    coeffs = [Fraction(0)] * (max(e[vi] for e in g) + 1)
    for e, c in g.items():
        coeffs[e[vi]] += c
    roots = univariate.rational_roots(coeffs)
    rest = univariate.deflate(coeffs, roots)
    if len(rest) > 1:
        residual = {tuple(d if i == vi else 0 for i in range(len(variables))): c
                    for d, c in enumerate(rest) if c}
        others = [h for h in G if h is not g]
        result.unresolved.append(Unresolved(
            dict(assigned),
            tuple(_from_internal(h, variables) for h in [residual] + others)))
    sym = variables[vi]
    for r in roots:
        substituted = []
        for h in G:
            s = _substitute_var(h, vi, r)
            if s:
                substituted.append(s)
        _back_substitute(substituted, {**assigned, sym: r}, variables, result, max_pairs, max_degree,
                         is_basis=False)


def _substitute_var(f: IPoly, vi: int, value: Fraction) -> IPoly:
    out: IPoly = {}
    for e, c in f.items():
        k = e[vi]
        t = e[:vi] + (0,) + e[vi + 1:]
        v = out.get(t, 0) + c * value ** k
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def solve_system(equations: Sequence[ParamPoly], variables: Optional[Sequence[ParamSymbol]] = None,
                 max_pairs: int = DEFAULT_MAX_PAIRS,
                 max_degree: int = DEFAULT_MAX_DEGREE) -> SolveResult:
    """Every rational solution of ``equations = 0`` (plus unresolved parts).

    Univariate equations are split on their rational roots before any
    Groebner basis is computed.  ``variables`` lists the unknowns from highest to lowest in the lex
    order; symbols absent from every equation come back free.
    """
    if variables is None:
        variables = _default_variables(equations)
    variables = tuple(variables)
    eqs = tuple(e for e in equations if e)
    if not eqs:
        return SolveResult([RuleSet({}, frozenset(variables))])
    PolySystem(eqs, variables)  # validates the symbols
    index = {s: i for i, s in enumerate(variables)}
    F = [_monic(_to_internal(e, index, len(variables))) for e in eqs]
    result = SolveResult()
    _back_substitute(F, {}, variables, result, max_pairs, max_degree, is_basis=False)
    return result


def check_rule(equations: Sequence[ParamPoly], rule: RuleSet) -> bool:
    """True iff every equation becomes the zero polynomial under ``rule``."""
    return all(not e.substitute(rule.assignments) for e in equations)


__all__ = [
    "PolySystem",
    "GroebnerBasis",
    "RuleSet",
    "Unresolved",
    "SolveResult",
    "buchberger",
    "reduce",
    "rational_roots",
    "solve_triangular",
    "solve_system",
    "check_rule",
]
