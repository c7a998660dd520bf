"""Command-line front end: ``logcy check``, ``logcy replay``, ``logcy list-fixtures``.

Exit codes: 0 everything passed, 1 an expectation failed, 2 the script did not
parse or elaborate (or a warning under ``--strict``), 3 I/O error or unknown
fixture.

JSON reports are written with sorted keys and two-space indentation, so
loading and re-dumping one reproduces it byte for byte.  Rationals are
strings (``"3/2"``); wall-clock times appear only in the human-readable form.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .ade import format_labels, singularity_labels
from .lattice import enumerate_roots, intersect
from .maps import MapError, between, is_crepant, torus_exceptional_degree
from .pairs import (
    PairError,
    complexity,
    coregularity_surface,
    dual_complex_type,
    is_index_one_complement,
)
from .replay import (
    Entry,
    ReplayReport,
    builtin_fixtures,
    evaluate,
    fixture_by_name,
    run_fixture,
    universal_checks,
)
from .script import Elaboration, ScriptErrors, elaborate_full, exceptional_name, parse

OK, FAILED, INVALID, IO_ERROR = 0, 1, 2, 3


def rational(x) -> str:
    return str(Fraction(x))


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def entry_doc(e: Entry) -> dict:
    return {"check": e.check, "line": e.line, "expected": e.expected, "actual": e.actual,
            "pass": e.passed}


# check

def _maps_of(el: Elaboration):
    declared = el.maps or [("main", "base", None)]
    for name, src, tgt in declared:
        target = el.pair if tgt is None else el.model_pair(tgt)
        yield name, src, tgt or "final", between(el.model_pair(src), target, name)


def _root_diagnostics(el: Elaboration, warnings: list) -> dict:
    s = el.surface
    if s.n > 8:
        warnings.append(f"root search skipped: {s.n} blow-ups is more than 8")
        return {"n": s.n, "skipped": True}
    roots = enumerate_roots(s.n)
    k = s.canonical()
    minus_two = [d for d in s.divisor_ids()
                 if s.pair(d, d) == -2 and intersect(s.class_of(d), k) == 0]
    return {"n": s.n, "roots": len(roots), "tracked_minus_two_curves": len(minus_two),
            "skipped": False}


def check_document(el: Elaboration, root_search: bool = False) -> tuple[dict, list]:
    """The full report for one elaborated script, plus a list of warnings."""
    warnings: list[str] = []
    s = el.surface
    k = s.canonical()
    curves = []
    for d in s.divisor_ids():
        c = s.class_of(d)
        curves.append({"id": d, "name": exceptional_name(s, d), "class": str(c),
                       "self": s.pair(d, d), "K": intersect(c, k),
                       "contracted": d in s.contracted})
    pair = el.pair
    pair_doc = {
        "boundary": {exceptional_name(s, d): rational(c) for d, c in pair.boundary},
        "index_one": is_index_one_complement(pair),
        "complexity": rational(complexity(pair)),
    }
    try:
        pair_doc["coregularity"] = coregularity_surface(pair)
        pair_doc["dual_complex"] = dual_complex_type(pair)
    except PairError as exc:
        pair_doc["coregularity"] = None
        pair_doc["dual_complex"] = None
        warnings.append(f"dual complex: {exc}")
    labels = singularity_labels(s)
    maps_doc = []
    for name, src, tgt, m in _maps_of(el):
        entry = {"name": name, "source": src, "target": tgt, "crepant": is_crepant(m)}
        try:
            entry["ted"] = torus_exceptional_degree(m)
        except MapError as exc:
            entry["ted"] = None
            warnings.append(f"map {name}: {exc}")
        maps_doc.append(entry)
    expectations = [evaluate(cp) for cp in el.checkpoints]
    if not expectations:
        warnings.append("script has no expectations")
    doc = {
        "surface": {"blowups": s.n, "rank": s.rank, "curves": curves},
        "pair": pair_doc,
        "singularities": {"label": format_labels(labels), "points": [str(x) for x in labels]},
        "maps": maps_doc,
        "expectations": [entry_doc(e) for e in expectations],
        "assertions": [entry_doc(e) for e in universal_checks(el)],
        "warnings": warnings,
    }
    if root_search:
        doc["roots"] = _root_diagnostics(el, warnings)
    doc["passed"] = all(e["pass"] for e in doc["expectations"] + doc["assertions"])
    return doc, warnings


def _check_text(doc: dict, path: str) -> str:
    out = [f"{path}"]
    surf = doc["surface"]
    out.append(f"  surface: {surf['blowups']} blow-ups, Picard rank {surf['rank']}")
    p = doc["pair"]
    bd = " + ".join(f"{c}*{d}" if c != "1" else d for d, c in p["boundary"].items()) or "0"
    out.append(f"  boundary: {bd}")
    out.append(f"  index one: {'yes' if p['index_one'] else 'no'}, complexity {p['complexity']}, "
               f"coregularity {p['coregularity']}, dual complex {p['dual_complex']}")
    out.append(f"  singularities: {doc['singularities']['label']}")
    for m in doc["maps"]:
        ted = "n/a" if m["ted"] is None else m["ted"]
        out.append(f"  map {m['name']}: {m['source']} -> {m['target']}, ted {ted}, "
                   f"{'crepant' if m['crepant'] else 'not crepant'}")
    if "roots" in doc:
        r = doc["roots"]
        if r["skipped"]:
            out.append(f"  roots: skipped ({r['n']} blow-ups)")
        else:
            out.append(f"  roots: {r['roots']} in the lattice of {r['n']} blow-ups, "
                       f"{r['tracked_minus_two_curves']} tracked (-2)-curves")
    for e in doc["expectations"]:
        mark = "ok  " if e["pass"] else "FAIL"
        out.append(f"  {mark} line {e['line']}: expect {e['check']} (got {e['actual']})")
    for e in doc["assertions"]:
        if not e["pass"]:
            out.append(f"  FAIL {e['check']}: {e['actual']}")
    for w in doc["warnings"]:
        out.append(f"  warning: {w}")
    return "\n".join(out) + "\n"


def cmd_check(args) -> tuple[int, str]:
    try:
        with open(args.path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        return IO_ERROR, f"error: cannot read {args.path}: {exc}\n"
    try:
        el = elaborate_full(parse(text))
    except ScriptErrors as exc:
        if args.json:
            errs = [{"line": e.line, "column": e.column, "message": e.message, "token": e.token}
                    for e in exc.errors]
            return INVALID, dump_json({"errors": errs, "passed": False})
        return INVALID, "".join(f"{args.path}:{e}\n" for e in exc.errors)
    doc, warnings = check_document(el, args.root_search)
    out = dump_json(doc) if args.json else _check_text(doc, args.path)
    if args.strict and warnings:
        return INVALID, out
    return (OK if doc["passed"] else FAILED), out


# replay

def report_doc(r: ReplayReport) -> dict:
    return {"name": r.fixture, "provenance": r.provenance, "passed": r.passed,
            "errors": list(r.errors), "entries": [entry_doc(e) for e in r.entries]}


def _replay_text(reports: list[ReplayReport]) -> str:
    out = []
    for r in reports:
        out.append(f"{'PASS' if r.passed else 'FAIL'} {r.fixture} ({r.seconds * 1000:.0f} ms)")
        for err in r.errors:
            out.append(f"  error {err}")
        for e in r.failures():
            where = f"line {e.line}: " if e.line else ""
            out.append(f"  {where}{e.check}: expected {e.expected}, got {e.actual}")
    failed = sum(not r.passed for r in reports)
    total = sum(r.seconds for r in reports)
    out.append(f"{len(reports) - failed}/{len(reports)} fixtures passed in {total:.2f} s")
    return "\n".join(out) + "\n"


def cmd_replay(args) -> tuple[int, str]:
    if args.fixture is not None:
        try:
            fixtures = [fixture_by_name(args.fixture)]
        except KeyError:
            return IO_ERROR, f"error: unknown fixture {args.fixture!r}\n"
    else:
        fixtures = builtin_fixtures()
    reports = [run_fixture(f) for f in fixtures]
    if args.json:
        out = dump_json({"fixtures": [report_doc(r) for r in reports],
                         "passed": all(r.passed for r in reports)})
    else:
        out = _replay_text(reports)
    if any(r.errors for r in reports):
        return INVALID, out
    return (OK if all(r.passed for r in reports) else FAILED), out


def cmd_list(args) -> tuple[int, str]:
    fixtures = builtin_fixtures()
    if args.json:
        return OK, dump_json([{"name": f.name, "provenance": f.provenance} for f in fixtures])
    width = max(len(f.name) for f in fixtures)
    return OK, "".join(f"{f.name:<{width}}  {f.provenance}\n" for f in fixtures)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--strict", action="store_true", help="treat warnings as errors")
    common.add_argument("--root-search", action="store_true",
                        help="report root counts of the Picard lattice (at most 8 blow-ups)")
    common.add_argument("--out", metavar="FILE", help="write the report to FILE")
    parser = argparse.ArgumentParser(prog="logcy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="check a construction script")
    p.add_argument("path")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("replay", parents=[common], help="replay bundled fixtures")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true")
    g.add_argument("--fixture", metavar="NAME")
    p.set_defaults(func=cmd_replay)
    p = sub.add_parser("list-fixtures", parents=[common], help="list bundled fixtures")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INVALID if exc.code else OK
    code, out = args.func(args)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            sys.stderr.write(f"error: cannot write {args.out}: {exc}\n")
            return IO_ERROR
    else:
        errors_only = code in (INVALID, IO_ERROR) and not args.json
        (sys.stderr if errors_only else sys.stdout).write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
