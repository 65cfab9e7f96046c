"""Batch command line: relations, full representative pipeline, explanations, serve.

Exit codes: 0 success, 2 domain errors (incompatible preferences, no covering
function), 1 usage/parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .engine import IncompatiblePreferences, compute_relations
from .io_formats import (
    ParseError,
    build_document,
    parse_performance_csv,
    parse_preferences,
    problem_from_raw,
    serialize_results,
)
from .model import DomainError
from .representatives import NoCoveringFunction, explain_pair, run_pipeline

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rorep",
        description="Necessary/strict/incomparable preference relations and "
        "representative additive value functions from a performance table "
        "plus pairwise Decision Maker statements.",
    )
    parser.add_argument("--version", action="version", version=f"rorep {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, prefs_required=True):
        p.add_argument("-t", "--table", required=True, help="performance CSV path")
        p.add_argument(
            "-p", "--prefs", required=prefs_required, help="preference statements path"
        )
        p.add_argument("-o", "--output", help="output path (default: stdout)")
        p.add_argument(
            "--format", choices=("json", "markdown"), default="json", help="output format"
        )
        p.add_argument("--eps", type=float, default=1e-4, help="fixed strictness margin")
        p.add_argument("--big-m", type=float, default=10.0, help="big-M constant")
        p.add_argument("--jobs", type=int, default=1, help="concurrent pair tests")

    p_rel = sub.add_parser("relations", help="compute the three preference relations")
    common(p_rel)

    p_rep = sub.add_parser(
        "representatives", help="full pipeline: relations, coverage, minimality, discrimination"
    )
    common(p_rep)

    p_exp = sub.add_parser("explain", help="explain why one alternative can rank above another")
    common(p_exp)
    p_exp.add_argument("--pair", required=True, metavar="A,B", help="alternatives to compare")

    p_srv = sub.add_parser("serve", help="start the HTTP session service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8765)
    return parser


def _load_inputs(args):
    with open(args.table, encoding="utf-8") as fh:
        raw = parse_performance_csv(fh.read())
    problem = problem_from_raw(raw)
    statements = []
    if args.prefs:
        with open(args.prefs, encoding="utf-8") as fh:
            statements = parse_preferences(fh.read())
    return problem, statements


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_params(args):
    if args.eps <= 0:
        raise ParseError("--eps must be positive", 0)
    if args.big_m <= 1 + args.eps:
        raise ParseError("--big-m must exceed 1 + eps", 0)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; fold into our codes
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    try:
        _check_params(args)
        problem, statements = _load_inputs(args)
    except (OSError, ParseError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "relations":
            bundle = compute_relations(problem, statements, jobs=args.jobs)
            doc = build_document(
                problem, __version__, args.eps, args.big_m, relations=bundle
            )
            _emit(args, serialize_results(doc, args.format))
            return EXIT_OK

        relations, sufficient, minimality, discriminant = run_pipeline(
            problem, statements, args.eps, args.big_m, jobs=args.jobs
        )
        if args.command == "representatives":
            doc = build_document(
                problem,
                __version__,
                args.eps,
                args.big_m,
                relations=relations,
                sufficient=sufficient,
                minimality=minimality,
                discriminant=discriminant,
            )
            _emit(args, serialize_results(doc, args.format))
            return EXIT_OK

        # explain
        try:
            a, b = (s.strip() for s in args.pair.split(",", 1))
        except ValueError:
            print("error: --pair expects 'A,B'", file=sys.stderr)
            return EXIT_USAGE
        explanation = explain_pair(discriminant, problem, a, b)
        payload = {
            "pair": list(explanation.pair),
            "function": explanation.label,
            "margin": explanation.margin,
            "a_marginals": explanation.a_marginals,
            "b_marginals": explanation.b_marginals,
            "differing": [
                {"criterion": crit, "gap": gap} for crit, gap in explanation.differing
            ],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
        return EXIT_OK
    except IncompatiblePreferences as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NoCoveringFunction as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
