"""Independent checks on factorizations, rule sets and solution families."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import List, Optional

from .diffpoly import DiffPoly, NumericPoint, evaluate_terms
from .factorize import Factorization, expand
from .ode_solver import GeneralSolution

X_RANGE = (-1.0, 1.0)
CONSTANT_RANGE = (-2.0, 2.0)


class CheckKind(str, enum.Enum):
    RECONSTRUCTION = "reconstruction"
    REMAINDER_VANISHES = "remainder_vanishes"
    RESIDUAL = "residual"


@dataclass
class VerificationReport:
    kind: CheckKind
    passed: bool
    worst_residual: Optional[float] = None
    details: List[dict] = field(default_factory=list)


def reconstruction_check(f: Factorization) -> VerificationReport:
    diff = expand(f) - f.p_input
    details = [{"monomial": str(DiffPoly({m: c})), "excess": str(c)} for m, c in diff.sorted_terms()]
    return VerificationReport(CheckKind.RECONSTRUCTION, diff.is_zero(), None, details)


def remainder_vanishes(f: Factorization, rule) -> VerificationReport:
    left = f.remainder.substitute_params(rule)
    details = [{"monomial": str(DiffPoly({m: 1})), "coefficient": str(c)} for m, c in left.sorted_terms()]
    return VerificationReport(CheckKind.REMAINDER_VANISHES, left.is_zero(), None, details)


def residual_check(p: DiffPoly, sol: GeneralSolution, samples: int = 10, tol: float = 1e-8,
                   seed: int = 0) -> VerificationReport:
    """Plug sampled members of ``sol`` into ``p``.

    Passes iff max |p| / (1 + max |term of p|) over all samples is below
    ``tol``.  Parameters still present in ``sol`` are sampled like constants.
    """
    rng = random.Random(seed)
    n = p.order() or 0
    labels = sol.constants
    params = sorted(sol.symbols())
    worst_abs = 0.0
    scale = 0.0
    details = []
    for _ in range(samples):
        x = rng.uniform(*X_RANGE)
        consts = {c: rng.uniform(*CONSTANT_RANGE) for c in labels}
        pvals = {s: rng.uniform(*CONSTANT_RANGE) for s in params}
        derivs = sol.derivatives(x, consts, n, pvals)
        value, biggest = evaluate_terms(p, NumericPoint(x, tuple(derivs)))
        worst_abs = max(worst_abs, abs(value))
        scale = max(scale, biggest)
        details.append({"x": x, "residual": value, "largest_term": biggest})
    worst = worst_abs / (1.0 + scale)
    return VerificationReport(CheckKind.RESIDUAL, worst < tol, worst, details)


__all__ = [
    "CheckKind",
    "VerificationReport",
    "reconstruction_check",
    "remainder_vanishes",
    "residual_check",
]
