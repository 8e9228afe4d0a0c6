"""Command-line front end: ``finmok <subcommand> ...``, JSON on stdout.

Exit codes: ``decide`` 0 valid / 1 countermodel / 2 unknown; ``validate``
0 clean / 1 violations; ``class-search`` 1 countermodel / 2 unknown;
``corpus`` 0 iff every entry passes.  Usage errors 64, unreadable or
malformed input 65, internal invariant breaches 70.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources

from . import __version__
from .decide import Modes, Status, bound, decide_validity, refute, verify_certificate
from .errors import FinmokError, NonMonadicError
from .frameclass import check_predicates, class_refute, default_jobs, parse_class
from .modelcheck import find_failure, satisfies, true_at
from .semantics import (frame_from_json, load_json, model_from_json, validate_frame,
                        validate_model)
from .syntax import check_monadic, metrics, parse_formula, print_formula, to_json

EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70

STATUS_EXIT = {Status.VALID: 0, Status.COUNTERMODEL: 1, Status.UNKNOWN: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _modes(args) -> Modes:
    return Modes(args.domains, args.equality)


def _add_modes(p) -> None:
    p.add_argument("--domains", choices=["expanding", "constant"], default="expanding")
    p.add_argument("--equality", choices=["congruence", "identity", "none"],
                   default="congruence")


def cmd_parse(args) -> int:
    f = parse_formula(args.formula, args.n)
    mt = metrics(f)
    _emit({
        "schema": 1,
        "formula": print_formula(f),
        "ast": to_json(f),
        "signature": check_monadic(f).value,
        "metrics": {"letters": mt.letters, "variables": mt.variables,
                    "modal_depth": mt.modal_depth, "quantifier_rank": mt.quantifier_rank,
                    "modal_indices_used": sorted(mt.modal_indices_used)},
    })
    return 0


def _parse_assignment(text: str | None) -> dict[str, int]:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"bad assignment {item!r}; expected x=0")
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise UsageError(f"bad element in assignment {item!r}") from None
    return out


def cmd_check(args) -> int:
    m = model_from_json(load_json(args.model))
    problems = validate_model(m)
    if problems:
        raise FinmokError(f"model fails validation: {problems[0].message}")
    f = parse_formula(args.formula, m.frame.n)
    if args.world is not None:
        if args.world not in m.frame.worlds:
            raise FinmokError(f"unknown world {args.world!r}")
        assignment = _parse_assignment(args.assign)
        if assignment:
            result = satisfies(m, args.world, f, assignment)
        else:
            result = true_at(m, args.world, f)
        failing = None if result else args.world
    else:
        if args.assign:
            raise UsageError("--assign needs --world")
        failing = find_failure(m, f)
        result = failing is None
    _emit({"schema": 1, "result": result, "failing_world": failing})
    return 0


def cmd_validate(args) -> int:
    if (args.model is None) == (args.frame is None):
        raise UsageError("give exactly one of --model or --frame")
    if args.model is not None:
        problems = validate_model(model_from_json(load_json(args.model)))
    else:
        problems = validate_frame(frame_from_json(load_json(args.frame)))
    _emit({"schema": 1, "valid": not problems,
           "violations": [p.to_json() for p in problems]})
    return 0 if not problems else 1


def cmd_decide(args) -> int:
    frame = frame_from_json(load_json(args.frame))
    problems = validate_frame(frame)
    if problems:
        raise FinmokError(f"invalid frame: {problems[0].message}")
    f = parse_formula(args.formula, frame.n)
    modes = _modes(args)
    if args.refute_only:
        verdict = refute(frame, f, modes, args.max_size or 2)
    else:
        if args.bound is not None and not args.uncertified:
            if args.bound < bound(f, frame):
                raise UsageError("--bound below the default bound needs --uncertified")
        verdict = decide_validity(frame, f, modes, bound_override=args.bound,
                                  max_size=args.max_size, fast=args.fast)
    if verdict.status is Status.COUNTERMODEL and not verify_certificate(verdict, frame, f, modes):
        raise RuntimeError("countermodel failed independent verification")
    _emit(verdict.to_json())
    return STATUS_EXIT[verdict.status]


def cmd_class_search(args) -> int:
    spec = parse_class(args.class_spec, args.n)
    f = parse_formula(args.formula, args.n)
    modes = _modes(args)
    result = class_refute(spec, f, modes, args.max_worlds, args.max_size, jobs=args.jobs)
    if result.status is Status.COUNTERMODEL:
        if not (check_predicates(result.frame, spec)
                and verify_certificate(result.verdict, result.frame, f, modes)):
            raise RuntimeError("class countermodel failed independent verification")
    _emit(result.to_json())
    return STATUS_EXIT[result.status]


# ---------------------------------------------------------------------------
# Corpus harness

def run_entry(entry: dict, jobs: int = 1) -> tuple[str, bool]:
    """Run one corpus entry; returns (observed status, certificate ok)."""
    n = int(entry.get("n", 1))
    f = parse_formula(entry["formula"], n)
    modes = Modes(entry.get("domains", "expanding"), entry.get("equality", "congruence"))
    procedure = entry.get("procedure", "decide")
    if procedure == "class":
        spec = parse_class(entry.get("class", "all"), n)
        res = class_refute(spec, f, modes, int(entry.get("max_worlds", 2)),
                           int(entry.get("max_size", 2)), jobs=jobs)
        ok = True
        if res.status is Status.COUNTERMODEL:
            ok = (check_predicates(res.frame, spec)
                  and verify_certificate(res.verdict, res.frame, f, modes))
        return res.status.value, ok
    frame = frame_from_json(entry["frame"])
    if procedure == "refute":
        verdict = refute(frame, f, modes, int(entry.get("max_size", 2)))
    elif procedure == "decide":
        verdict = decide_validity(frame, f, modes, bound_override=entry.get("bound"),
                                  max_size=entry.get("max_size"))
    else:
        raise FinmokError(f"unknown procedure {procedure!r}")
    ok = True
    if verdict.status is Status.COUNTERMODEL:
        ok = verify_certificate(verdict, frame, f, modes)
    return verdict.status.value, ok


def run_corpus(doc: dict, jobs: int = 1) -> dict:
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise FinmokError("corpus needs an 'entries' list")
    results = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "formula" not in entry or "expect" not in entry:
            raise FinmokError(f"corpus entry {i} needs 'formula' and 'expect'")
        name = entry.get("name", f"entry-{i}")
        got, cert_ok = run_entry(entry, jobs)
        results.append({"name": name, "expected": entry["expect"], "got": got,
                        "certificate_ok": cert_ok,
                        "ok": got == entry["expect"] and cert_ok})
    failed = [r for r in results if not r["ok"]]
    return {"schema": 1, "total": len(results), "passed": len(results) - len(failed),
            "failed": len(failed), "first_mismatch": failed[0] if failed else None,
            "results": results}


def shipped_corpus() -> dict:
    return json.loads(resources.files("finmok").joinpath("data/corpus.json").read_text())


def cmd_corpus(args) -> int:
    doc = shipped_corpus() if args.path is None else load_json(args.path)
    report = run_corpus(doc, args.jobs)
    _emit(report)
    return 0 if report["failed"] == 0 else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="finmok", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"finmok {__version__}")
    parser.add_argument("--jobs", type=int, default=None,
                        help="worker processes for class searches (default $FINMOK_JOBS or 1)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", help="parse a formula and print its AST")
    p.add_argument("--formula", required=True)
    p.add_argument("--n", type=int, default=1)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", help="model-check a formula")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--world")
    p.add_argument("--assign", help="x=0,y=1")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("validate", help="report structural violations of a model or frame")
    p.add_argument("--model")
    p.add_argument("--frame")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decide", help="decide validity on a finite frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", required=True)
    _add_modes(p)
    p.add_argument("--max-size", type=int, help="per-world size for the canonical search")
    p.add_argument("--bound", type=int, help="override the default per-world bound")
    p.add_argument("--uncertified", action="store_true",
                   help="allow --bound below the default (verdict is then uncertified)")
    p.add_argument("--fast", action="store_true", help="accept any countermodel")
    p.add_argument("--refute-only", action="store_true",
                   help="bounded countermodel search only (works for any formula)")
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("class-search", help="search a frame class for a refutation")
    p.add_argument("--class", dest="class_spec", default="all")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--formula", required=True)
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--max-size", type=int, default=2)
    _add_modes(p)
    p.set_defaults(func=cmd_class_search)

    p = sub.add_parser("corpus", help="run a regression corpus (default: the shipped one)")
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_corpus)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    if args.jobs is None:
        args.jobs = default_jobs()
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"finmok: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonMonadicError as exc:
        print(f"finmok: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (FinmokError, ValueError, OSError, KeyError) as exc:
        print(f"finmok: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - any other failure is an internal breach
        print(f"finmok: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
