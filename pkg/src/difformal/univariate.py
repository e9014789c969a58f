"""Dense univariate polynomials over Q as coefficient lists (lowest degree first)."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

Coeffs = List[Fraction]


def trim(a: Sequence) -> Coeffs:
    a = [Fraction(c) for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence) -> int:
    return len(trim(a)) - 1


def evaluate(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a: Sequence) -> Coeffs:
    return trim([i * a[i] for i in range(1, len(a))])


def monic(a: Sequence) -> Coeffs:
    a = trim(a)
    if not a:
        return a
    lead = a[-1]
    return [c / lead for c in a]


def divmod_poly(a: Sequence, b: Sequence) -> Tuple[Coeffs, Coeffs]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        r = trim(r)
    return trim(q), r


def gcd_poly(a: Sequence, b: Sequence) -> Coeffs:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def squarefree_decomposition(a: Sequence) -> List[Tuple[Coeffs, int]]:
    """Yun's algorithm: monic squarefree factors with their multiplicities."""
    a = monic(a)
    if len(a) <= 1:
        return []
    out = []
    b = gcd_poly(a, derivative(a))
    c, _ = divmod_poly(a, b)
    d, _ = divmod_poly(derivative(a), b)
    d = trim([x - y for x, y in _zip_pad(d, derivative(c))])
    i = 1
    while len(c) > 1:
        g = gcd_poly(c, d)
        if len(g) > 1:
            out.append((g, i))
        c, _ = divmod_poly(c, g)
        d, _ = divmod_poly(d, g)
        d = trim([x - y for x, y in _zip_pad(d, derivative(c))])
        i += 1
    return out


def _zip_pad(a, b):
    n = max(len(a), len(b))
    return zip(list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b)))


def _divisors(n: int) -> List[int]:
    n = abs(n)
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def integer_coeffs(a: Sequence) -> List[int]:
    a = trim(a)
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


def rational_roots(a: Sequence) -> List[Fraction]:
    """Distinct rational roots, ascending."""
    a = trim(a)
    if len(a) <= 1:
        return []
    roots = set()
    lo = 0
    while a[lo] == 0:
        lo += 1
    if lo:
        roots.add(Fraction(0))
    rest = a[lo:]
    if len(rest) > 1:
        ints = integer_coeffs(rest)
        cands = set()
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                cands.add(Fraction(p, q))
                cands.add(Fraction(-p, q))
        for r in sorted(cands):
            if len(rest) <= 1:
                break
            if evaluate(rest, r) == 0:
                roots.add(r)
                while len(rest) > 1 and evaluate(rest, r) == 0:
                    rest, _ = divmod_poly(rest, [-r, 1])
    return sorted(roots)


def deflate(a: Sequence, roots: Sequence[Fraction]) -> Coeffs:
    """Divide out every factor (x - r), with multiplicity, for r in roots."""
    a = trim(a)
    for r in roots:
        while len(a) > 1 and evaluate(a, r) == 0:
            a, _ = divmod_poly(a, [-r, 1])
    return a
