"""Command-line front end.

Subcommands: analyze, bracket, jordan, spectral, newton, closure,
verify-paper.  Generators come either inline (comma-separated expressions)
or from a file with one expression per line and # comments.  Exit codes:
0 on completion, 2 when the analysis contains a Refuted certificate or an
exclusion Violation, 1 on input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from typing import Optional

from . import report as rpt
from .closure import (
    ClosureBudget,
    full_closure_report,
    lie_closure,
)
from .errors import PlanevecError
from .finiteness import (
    OrbitBudget,
    certify_locally_finite,
    certify_locally_nilpotent,
    jordan_decompose,
)
from .parsing import parse_derivation, split_generators
from .poly import poly_text
from .scalars import Scalar
from .spectral import eigencomponents
from .svg import newton_svg
from .vecfield import (
    Derivation,
    classify_lf_shape,
    derivation_text,
    divergence,
    newton_polygon,
    to_graded,
)
from .verify import run_all


def _read_generators(spec_text: str) -> list[str]:
    if os.path.exists(spec_text):
        lines = []
        with open(spec_text, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    lines.append(line)
        return lines
    return split_generators(spec_text)


def _parse_delta(text: str) -> tuple[Scalar, Scalar]:
    from .parsing import parse_poly

    parts = split_generators(text)
    if len(parts) != 2:
        raise PlanevecError(f"--delta expects 'a,b', got {text!r}")
    values = []
    for part in parts:
        poly = parse_poly(part)
        if not poly.is_constant():
            raise PlanevecError(f"--delta component {part!r} is not constant")
        values.append(poly.constant_value())
    return values[0], values[1]


def _budgets(args) -> tuple[ClosureBudget, OrbitBudget]:
    closure_budget = ClosureBudget(
        max_dim=args.max_dim,
        max_total_weight=args.max_weight,
        max_rounds=args.max_rounds,
    )
    orbit_budget = OrbitBudget(max_dim=args.max_dim, max_deg=args.max_weight)
    return closure_budget, orbit_budget


def _emit(doc: dict, args, text_summary: str) -> None:
    payload = rpt.dumps(doc)
    if args.json == "-":
        sys.stdout.write(payload)
        return
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(payload)
    if text_summary:
        print(text_summary)


def _generator_section(d: Derivation, text: str, orbit_budget: OrbitBudget) -> dict:
    entry: dict = {"text": text, "parsed": derivation_text(d)}
    div = divergence(d)
    entry["divergence"] = poly_text(div)
    entry["constant_divergence"] = div.is_constant()
    graded = None
    if div.is_constant():
        graded = to_graded(d)
        entry["graded"] = rpt.graded_json(graded)
        if not graded.is_zero():
            entry["newton"] = rpt.newton_json(newton_polygon(graded))
            entry["shape"] = rpt.shape_json(classify_lf_shape(graded))
    lf = certify_locally_finite(d, orbit_budget)
    lnd = certify_locally_nilpotent(d, orbit_budget)
    entry["locally_finite"] = rpt.certificate_json(lf)
    entry["locally_nilpotent"] = rpt.certificate_json(lnd)
    if lf.kind == "LocallyFinite":
        try:
            d_s, d_n = jordan_decompose(d, orbit_budget)
            entry["jordan"] = {
                "semisimple": derivation_text(d_s),
                "nilpotent": derivation_text(d_n),
            }
        except PlanevecError as exc:
            entry["jordan"] = {"error": str(exc)}
    return entry


def cmd_analyze(args) -> int:
    started = time.monotonic()
    closure_budget, orbit_budget = _budgets(args)
    texts = _read_generators(args.gens)
    if not texts:
        print("error: no generators supplied", file=sys.stderr)
        return 1
    try:
        derivations = [parse_derivation(t) for t in texts]
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    body: dict = {
        "input": {
            "generators": texts,
            "budgets": {
                "max_dim": closure_budget.max_dim,
                "max_total_weight": closure_budget.max_total_weight,
                "max_rounds": closure_budget.max_rounds,
                "orbit_max_dim": orbit_budget.max_dim,
                "orbit_max_deg": orbit_budget.max_deg,
            },
        }
    }
    refuted = False
    sections = []
    for text, d in zip(texts, derivations):
        section = _generator_section(d, text, orbit_budget)
        sections.append(section)
        # a refuted LND certificate is ordinary for semisimple generators;
        # only refuted local finiteness is a finding
        if section["locally_finite"]["kind"] == "Refuted":
            refuted = True
    body["generators"] = sections

    violation = False
    if all(section.get("graded") is not None for section in sections):
        graded = [to_graded(d) for d in derivations]
        closure = full_closure_report(graded, derivations,
                                      closure_budget, orbit_budget)
        body["closure"] = rpt.closure_json(closure)
        body["rank"] = rpt.rank_json(closure.rank_result)
        violation = closure.exclusion is not None and closure.exclusion.status == "Violation"
    else:
        body["closure"] = {"skipped": "some generator is not in Vec^c"}

    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    doc = rpt.document("analyze", body, timing)

    lines = [f"generators: {len(sections)}"]
    for section in sections:
        lines.append(
            f"  {section['parsed']}: LF={section['locally_finite']['kind']}"
            f" LND={section['locally_nilpotent']['kind']}")
    if "verdicts" in body.get("closure", {}):
        verdicts = body["closure"]["verdicts"]
        lines.append(f"closure: dim {body['closure']['span']['dim']}"
                     f" stabilized={body['closure']['stabilized']}")
        lines.append(f"verdicts: {verdicts}")
        lines.append(f"exclusion: {body['closure']['exclusion']}")
    _emit(doc, args, "\n".join(lines))
    return 2 if (refuted or violation) else 0


def cmd_bracket(args) -> int:
    started = time.monotonic()
    try:
        d1 = parse_derivation(args.first, allow_laurent=args.laurent)
        d2 = parse_derivation(args.second, allow_laurent=args.laurent)
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    from .vecfield import bracket

    result = bracket(d1, d2)
    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    doc = rpt.document("bracket", {
        "input": {"first": args.first, "second": args.second},
        "result": rpt.derivation_json(result),
    }, timing)
    _emit(doc, args, derivation_text(result))
    return 0


def cmd_jordan(args) -> int:
    started = time.monotonic()
    _, orbit_budget = _budgets(args)
    try:
        d = parse_derivation(args.derivation)
        d_s, d_n = jordan_decompose(d, orbit_budget)
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    doc = rpt.document("jordan", {
        "input": {"derivation": args.derivation},
        "semisimple": rpt.derivation_json(d_s),
        "nilpotent": rpt.derivation_json(d_n),
    }, timing)
    _emit(doc, args, f"semisimple: {derivation_text(d_s)}\nnilpotent:  {derivation_text(d_n)}")
    return 0


def cmd_spectral(args) -> int:
    started = time.monotonic()
    try:
        d = parse_derivation(args.derivation)
        alpha, beta = _parse_delta(args.delta)
        decomp = eigencomponents(to_graded(d), alpha, beta)
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    doc = rpt.document("spectral", {
        "input": {"derivation": args.derivation, "delta": args.delta},
        "spectral": rpt.spectral_json(decomp),
    }, timing)
    lines = [f"{rpt.scalar_json(lam)}: {comp}" for lam, comp in decomp.components]
    _emit(doc, args, "\n".join(lines))
    return 0


def cmd_newton(args) -> int:
    started = time.monotonic()
    try:
        d = parse_derivation(args.derivation)
        g = to_graded(d)
        polygon = newton_polygon(g)
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(newton_svg(g))
    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    doc = rpt.document("newton", {
        "input": {"derivation": args.derivation},
        "newton": rpt.newton_json(polygon),
        "shape": rpt.shape_json(classify_lf_shape(g)),
    }, timing)
    _emit(doc, args, f"vertices: {list(polygon.vertices)}")
    return 0


def cmd_closure(args) -> int:
    started = time.monotonic()
    closure_budget, orbit_budget = _budgets(args)
    texts = _read_generators(args.gens)
    if not texts:
        print("error: no generators supplied", file=sys.stderr)
        return 1
    try:
        derivations = [parse_derivation(t) for t in texts]
        graded = [to_graded(d) for d in derivations]
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    closure = full_closure_report(graded, derivations, closure_budget, orbit_budget)
    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    doc = rpt.document("closure", {
        "input": {"generators": texts},
        "closure": rpt.closure_json(closure),
    }, timing)
    summary = (f"dim {closure.span.dim} stabilized={closure.stabilized}\n"
               f"verdicts: {closure.verdicts}")
    _emit(doc, args, summary)
    violation = closure.exclusion is not None and closure.exclusion.status == "Violation"
    return 2 if violation else 0


def cmd_verify_paper(args) -> int:
    results = run_all()
    all_ok = True
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        all_ok &= ok
        print(f"{status} {name}: {detail}")
    print(f"{sum(ok for _, ok, _ in results)}/{len(results)} scenarios passed")
    return 0 if all_ok else 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-dim", type=int, default=96,
                        help="dimension budget (closure span and orbit spaces)")
    parser.add_argument("--max-weight", type=int, default=40,
                        help="total-weight budget (bracket support and orbit degrees)")
    parser.add_argument("--max-rounds", type=int, default=32,
                        help="closure round budget")
    parser.add_argument("--json", metavar="PATH",
                        help="write the JSON document to PATH ('-' for stdout)")
    parser.add_argument("--no-timing", action="store_true",
                        help="omit the timing field (byte-reproducible output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="planevec",
        description="Exact workbench for Lie algebras of plane polynomial vector fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full pipeline over a generator set")
    p.add_argument("--gens", required=True, help="inline list or a file path")
    _add_common(p)
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("bracket", help="Lie bracket of two fields")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--laurent", action="store_true",
                   help="allow negative powers of y")
    _add_common(p)
    p.set_defaults(fn=cmd_bracket)

    p = sub.add_parser("jordan", help="Jordan decomposition of a locally finite field")
    p.add_argument("derivation")
    _add_common(p)
    p.set_defaults(fn=cmd_jordan)

    p = sub.add_parser("spectral", help="eigencomponents against delta[a,b]")
    p.add_argument("derivation")
    p.add_argument("--delta", required=True, metavar="a,b")
    _add_common(p)
    p.set_defaults(fn=cmd_spectral)

    p = sub.add_parser("newton", help="Newton polygon (optionally as SVG)")
    p.add_argument("derivation")
    p.add_argument("--svg", metavar="PATH", help="write an SVG rendering")
    _add_common(p)
    p.set_defaults(fn=cmd_newton)

    p = sub.add_parser("closure", help="bounded Lie closure with verdicts")
    p.add_argument("--gens", required=True, help="inline list or a file path")
    _add_common(p)
    p.set_defaults(fn=cmd_closure)

    p = sub.add_parser("verify-paper", help="run the verification scenarios")
    p.set_defaults(fn=cmd_verify_paper)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except PlanevecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
