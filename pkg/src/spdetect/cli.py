"""Command line: ``spdetect check``, ``spdetect fuzz`` and ``spdetect dot``.

Exit codes: 0 property holds (or fuzz found nothing), 1 property fails (or
fuzz found a discrepancy), 2 usage or parse error, 3 observer budget
exhausted so the verdict is unknown.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .constructions import (
    EmptyInitial,
    Observer,
    build_detector,
    build_epsilon_composition,
    build_observer,
    build_self_composition,
)
from .core import FsaError, check_assumption1
from .crosscheck import corpus, crosscheck, random_spec
from .fsaio import ParseError, assumption1_json, export_dot, parse_fsa, print_fsa, verdict_json
from .verify import check

EXIT_HOLDS, EXIT_FAILS, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3

METHODS = {
    "spd": ("observer", "detector", "cc", "legacy-detector"),
    "spdd": ("observer", "legacy-observer"),
    "sd": ("legacy-detector",),
}
ALL_METHODS = {"spd": ("observer", "detector", "cc"), "spdd": ("observer",), "sd": ("legacy-detector",)}
DEFAULT_METHOD = {"spd": "detector", "spdd": "observer", "sd": "legacy-detector"}
PAIR = re.compile(r"\(?\s*([A-Za-z0-9_]+)\s*,\s*([A-Za-z0-9_]+)\s*\)?")


class UsageError(Exception):
    pass


def parse_spec_arg(text: str) -> list[tuple[str, str]]:
    pairs = PAIR.findall(text)
    leftover = PAIR.sub("", text).replace(",", "").strip()
    if not pairs or leftover:
        raise UsageError(f"cannot parse --spec {text!r}; expected '(x1,x2)' pairs")
    return pairs


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"{path}: {err.strerror}") from None
    try:
        return parse_fsa(text, path)
    except ParseError as err:
        raise UsageError(f"{path}: {err}") from None


def cmd_check(args) -> int:
    doc = _load(args.file)
    fsa = doc.fsa
    method = args.method or DEFAULT_METHOD[args.property]
    if method == "all":
        methods = ALL_METHODS[args.property]
    elif method in METHODS[args.property]:
        methods = (method,)
    else:
        raise UsageError(f"method {method!r} is not available for {args.property}")
    spec = doc.spec
    if args.spec:
        try:
            spec = frozenset(
                (fsa.state(a), fsa.state(b)) for text in args.spec for a, b in parse_spec_arg(text)
            )
        except FsaError as err:
            raise UsageError(str(err)) from None

    verdicts = [check(fsa, args.property, m, spec, args.max_observer_nodes) for m in methods]
    known = [v.holds for v in verdicts if v.holds is not None]
    holds = None if not known else all(known)
    a1 = check_assumption1(fsa)
    report = {
        "file": args.file,
        "property": args.property,
        "methods": list(methods),
        "holds": holds,
        "assumption1": assumption1_json(fsa, a1),
        "assumption1_violated": not a1.holds,
        "verdicts": [verdict_json(fsa, v, timings=not args.no_timings) for v in verdicts],
    }
    if args.property == "spdd":
        report["spec"] = [fsa.format_pair(p) for p in sorted(spec)]
    legacy = any(m.startswith("legacy") for m in methods)
    if legacy and not a1.holds:
        print("warning: automaton violates deadlock/divergence freeness; legacy verdict may be wrong",
              file=sys.stderr)
    json.dump(report, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")
    if holds is None:
        return EXIT_UNKNOWN
    return EXIT_HOLDS if holds else EXIT_FAILS


def cmd_fuzz(args) -> int:
    if args.count < 0 or args.max_states < 1:
        raise UsageError("--count must be >= 0 and --max-states >= 1")
    if args.max_states > 8:
        raise UsageError("--max-states is limited to 8 (exhaustive oracles)")
    found = []
    for i, (cfg, fsa) in enumerate(corpus(args.count, args.seed, args.max_states)):
        spec = random_spec(fsa, args.seed + i)
        for d in crosscheck(fsa, spec):
            found.append({
                "case": i,
                "check": d.check,
                "detail": d.detail,
                "seed": cfg.seed,
                "fsa": print_fsa(fsa),
                "spec": [fsa.format_pair(p) for p in sorted(spec)],
            })
    report = {
        "count": args.count,
        "seed": args.seed,
        "max_states": args.max_states,
        "discrepancies": found,
    }
    json.dump(report, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")
    return EXIT_FAILS if found else EXIT_HOLDS


def cmd_dot(args) -> int:
    fsa = _load(args.file).fsa
    if args.structure == "observer":
        try:
            obj = build_observer(fsa, args.max_observer_nodes)
        except EmptyInitial:
            obj = Observer((), None, {}, fsa)
    elif args.structure == "detector":
        obj = build_detector(fsa)
    elif args.structure == "cc":
        obj = build_self_composition(fsa)
    else:
        obj = build_epsilon_composition(fsa)
    sys.stdout.write(export_dot(obj))
    return EXIT_HOLDS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spdetect", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide a detectability property")
    c.add_argument("property", choices=sorted(METHODS))
    c.add_argument("file")
    c.add_argument("--method", choices=sorted({m for ms in METHODS.values() for m in ms} | {"all"}))
    c.add_argument("--spec", action="append", help="pair(s) like '(x1,x2)'; overrides the file")
    c.add_argument("--max-observer-nodes", type=int, default=100_000)
    c.add_argument("--no-timings", action="store_true", help="omit wall-clock times from the report")
    c.set_defaults(run=cmd_check)

    f = sub.add_parser("fuzz", help="cross-check all methods on random automata")
    f.add_argument("--count", type=int, default=1000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--max-states", type=int, default=6)
    f.set_defaults(run=cmd_fuzz)

    d = sub.add_parser("dot", help="render a derived automaton as Graphviz")
    d.add_argument("file")
    d.add_argument("--structure", choices=("observer", "detector", "cc", "cc-eps"), default="observer")
    d.add_argument("--max-observer-nodes", type=int, default=100_000)
    d.set_defaults(run=cmd_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_observer_nodes", 1) < 1:
        print("spdetect: error: --max-observer-nodes must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.run(args)
    except UsageError as err:
        print(f"spdetect: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
