"""Command-line driver: run the detection pipeline for every requested k."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional

from .algebraic_solver import DEFAULT_MAX_DEGREE, DEFAULT_MAX_PAIRS, RuleSet, solve_system
from .diffpoly import DiffPoly
from .errors import ParseError, ResourceLimit
from .factorize import Factorization, Mode, formal_k_factorization, remainder_system
from .ode_solver import LinearODE, fold_free_parameters, format_solution, general_solution
from .parser import format_diffpoly, parse_diffpoly
from .verify import (VerificationReport, reconstruction_check, remainder_vanishes,
                     residual_check)

NO_Y_NOTE = "no y-dependence; no linear factors"


@dataclass
class RunConfig:
    expr: str
    k: Optional[int] = None  # None selects every k = 0..order
    mode: Mode = Mode.COMMON
    free_poly_degree: int = 0
    output_format: str = "json"
    verify: bool = False
    tol: float = 1e-8
    seed: int = 0
    samples: int = 10
    max_pairs: int = DEFAULT_MAX_PAIRS
    max_degree: int = DEFAULT_MAX_DEGREE


@dataclass
class SolutionRecord:
    expression: str
    constants: int
    parametric: bool = False
    report: Optional[VerificationReport] = None

    @property
    def verified(self) -> bool:
        return self.report is not None and self.report.passed


@dataclass
class KResult:
    k: int
    mode: Mode
    factorization: Factorization
    rules: List[RuleSet] = field(default_factory=list)
    unresolved: List[str] = field(default_factory=list)
    factors: List[str] = field(default_factory=list)
    solutions: List[SolutionRecord] = field(default_factory=list)
    ideals: List[str] = field(default_factory=list)
    reports: List[VerificationReport] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


@dataclass
class RunResult:
    input: str
    order: Optional[int]
    mode: Mode
    results: List[KResult] = field(default_factory=list)
    note: Optional[str] = None

    def families(self) -> List[str]:
        seen = {}
        for r in self.results:
            for s in r.solutions:
                seen.setdefault(s.expression, None)
        return list(seen)


def run(config: RunConfig) -> RunResult:
    p = parse_diffpoly(config.expr)
    mode = Mode(config.mode)
    n = p.order()
    result = RunResult(config.expr, n, mode)
    if n is None:
        result.note = NO_Y_NOTE
        return result
    if config.k is None:
        ks = range(n + 1)
    elif 0 <= config.k <= n:
        ks = [config.k]
    else:
        raise ValueError(f"k={config.k} outside [0, {n}]")
    for k in ks:
        result.results.append(_run_k(p, k, mode, config))
    return result


def _run_k(p: DiffPoly, k: int, mode: Mode, config: RunConfig) -> KResult:
    f = formal_k_factorization(p, k, mode, config.free_poly_degree)
    out = KResult(k, mode, f)
    if config.verify:
        out.reports.append(reconstruction_check(f))
    variables = tuple(reversed(f.parameters))
    solved = solve_system(remainder_system(f), variables, config.max_pairs, config.max_degree)
    out.rules = solved.rules
    out.unresolved = [str(u) for u in solved.unresolved]

    seen_factors = {}
    seen_solutions = {}
    for rule in solved.rules:
        if config.verify:
            out.reports.append(remainder_vanishes(f, rule))
        if mode is Mode.GENERAL:
            evaluated = [format_diffpoly(form.as_diffpoly().substitute_params(rule)) for form in f.forms()]
            for text in evaluated:
                seen_factors.setdefault(text, None)
            out.ideals.append("p in [" + ", ".join(dict.fromkeys(evaluated)) + "]")
            continue
        L = f.common_form.as_diffpoly().substitute_params(rule)
        text = format_diffpoly(L)
        seen_factors.setdefault(text, None)
        out.ideals.append(f"p in [{text}]")
        try:
            sol = general_solution(LinearODE.from_form(L, k))
        except ValueError as exc:
            out.notes.append(f"{text} = 0: {exc}")
            continue
        sol = fold_free_parameters(sol, rule.free)
        expression = format_solution(sol)
        if expression in seen_solutions:
            continue
        record = SolutionRecord(expression, len(sol.terms), sol.parametric)
        if config.verify:
            record.report = residual_check(p, sol, config.samples, config.tol, config.seed)
        seen_solutions[expression] = record
    out.factors = list(seen_factors)
    out.solutions = list(seen_solutions.values())
    return out


# -- output ----------------------------------------------------------------


def to_json_dict(result: RunResult) -> dict:
    doc = {
        "input": result.input,
        "order": result.order,
        "mode": result.mode.value,
        "results": [],
    }
    for r in result.results:
        item = {
            "k": r.k,
            "summand_count": len(r.factorization.summands),
            "remainder_monomials": len(r.factorization.remainder.terms),
            "S_k": [rule.as_json() for rule in r.rules],
            "unresolved": r.unresolved,
            "factors": r.factors,
            "solutions": [
                {
                    "expression": s.expression,
                    "constants": s.constants,
                    "verified": s.verified,
                    "worst_residual": s.report.worst_residual if s.report else None,
                }
                for s in r.solutions
            ],
            "ideal": r.ideals,
        }
        if r.notes:
            item["notes"] = r.notes
        doc["results"].append(item)
    doc["families"] = result.families()
    if result.note:
        doc["note"] = result.note
    return doc


def emit(result: RunResult, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(to_json_dict(result), indent=2) + "\n").encode()
    if fmt == "text":
        return _emit_text(result).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _emit_text(result: RunResult) -> str:
    lines = [f"p = {result.input}", f"order: {result.order}", f"mode: {result.mode.value}"]
    if result.note:
        lines.append(f"note: {result.note}")
    for r in result.results:
        f = r.factorization
        lines.append("")
        lines.append(f"k = {r.k}")
        lines.append(f"  factorization: {len(f.summands)} summands, remainder with "
                     f"{len(f.remainder.terms)} monomials")
        lines.append(f"  R = {f.remainder}")
        if not r.rules and not r.unresolved:
            lines.append(f"  S_{r.k} is empty: no parameter values eliminate the remainder")
        for rule in r.rules:
            lines.append(f"  rule: {rule}")
        for u in r.unresolved:
            lines.append(f"  unresolved: {u}")
        for ideal in r.ideals:
            lines.append(f"  {ideal}")
        for s in r.solutions:
            status = ""
            if s.report is not None:
                mark = "verified" if s.report.passed else "FAILED"
                status = f"  [{mark}, residual {s.report.worst_residual:.3g}]"
            lines.append(f"  solution: {s.expression}{status}")
        for note in r.notes:
            lines.append(f"  note: {note}")
    fams = result.families()
    if fams:
        lines.append("")
        lines.append("solution families:")
        lines.extend(f"  {e}" for e in fams)
    return "\n".join(lines) + "\n"


# -- entry point -------------------------------------------------------------


def _k_arg(text: str):
    if text == "all":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("--k takes 'all' or an integer")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="difformal",
                                     description="Detect linear solutions of polynomial ODEs.")
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", help="run the detection pipeline")
    src = solve.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="differential polynomial p (equation p = 0)")
    src.add_argument("--input", help="file holding the differential polynomial")
    solve.add_argument("--k", type=_k_arg, default=None, help="'all' (default) or one order")
    solve.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.COMMON.value)
    solve.add_argument("--free-poly-degree", type=int, default=0)
    solve.add_argument("--format", choices=["json", "text"], default="json")
    solve.add_argument("--verify", action="store_true")
    solve.add_argument("--tol", type=float, default=1e-8)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--samples", type=int, default=10)
    solve.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS)
    solve.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.input is not None:
        try:
            with open(args.input) as fh:
                expr = fh.read().strip()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    else:
        expr = args.expr
    seed = args.seed
    if os.environ.get("DIFFORMAL_SEED"):
        seed = int(os.environ["DIFFORMAL_SEED"])
    if args.free_poly_degree < 0:
        print("error: --free-poly-degree must be >= 0", file=sys.stderr)
        return 2
    config = RunConfig(expr=expr, k=args.k, mode=Mode(args.mode),
                       free_poly_degree=args.free_poly_degree, output_format=args.format,
                       verify=args.verify, tol=args.tol, seed=seed, samples=args.samples,
                       max_pairs=args.max_pairs, max_degree=args.max_degree)
    try:
        result = run(config)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit(result, config.output_format))
    sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
