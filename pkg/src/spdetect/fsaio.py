"""The ``.fsa`` text format, DOT rendering and JSON verdict reports.

Format: UTF-8, one directive per line, ``#`` starts a comment, tokens are
whitespace separated, identifiers match ``[A-Za-z0-9_]+``.  Directives may
come in any order::

    states x0 x1 x2
    initial x0
    event t1 a          # observable, emits symbol a
    event t4 -          # silent
    trans x0 t1 x1
    spec x1 x2          # ordered pair of the distinguishability specification
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .constructions import EPS, CompositionAutomaton, Detector, Observer
from .core import IDENT, Assumption1Report, Fsa, FsaError, SilentLasso, SpecPairs
from .verify import Condition, CycleWitness, DivergenceWitness, PostCycleWitness, Verdict


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class FsaDocument:
    fsa: Fsa
    spec: SpecPairs = frozenset()
    # spec pairs in file order, for stable printing
    spec_order: tuple[tuple[int, int], ...] = field(default=(), compare=False)
    path: str | None = field(default=None, compare=False)
    lines: dict[str, int] = field(default_factory=dict, compare=False)


def parse_fsa(text: str, path: str | None = None) -> FsaDocument:
    """Parse the line format; errors carry the offending line number."""
    states: list[str] | None = None
    initial: list[str] | None = None
    events: dict[str, str | None] = {}
    trans: list[tuple[str, str, str, int]] = []
    spec: list[tuple[str, str, int]] = []
    where: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        head, args = toks[0], toks[1:]
        for tok in args:
            if tok != "-" and not IDENT.match(tok):
                raise ParseError(lineno, f"invalid identifier {tok!r}")
        if head == "states":
            if states is not None:
                raise ParseError(lineno, "duplicate 'states' directive")
            if len(set(args)) != len(args):
                raise ParseError(lineno, "duplicate state declaration")
            if "-" in args:
                raise ParseError(lineno, "'-' is not a state name")
            states = args
            where["states"] = lineno
        elif head == "initial":
            if initial is not None:
                raise ParseError(lineno, "duplicate 'initial' directive")
            if len(set(args)) != len(args):
                raise ParseError(lineno, "duplicate initial state")
            initial = args
            where["initial"] = lineno
        elif head == "event":
            if len(args) != 2 or args[0] == "-":
                raise ParseError(lineno, "expected 'event <id> <symbol-or->'")
            if args[0] in events:
                raise ParseError(lineno, f"duplicate event {args[0]!r}")
            events[args[0]] = None if args[1] == "-" else args[1]
            where["event " + args[0]] = lineno
        elif head == "trans":
            if len(args) != 3:
                raise ParseError(lineno, "expected 'trans <src> <event> <dst>'")
            trans.append((args[0], args[1], args[2], lineno))
        elif head == "spec":
            if len(args) != 2:
                raise ParseError(lineno, "expected 'spec <state> <state>'")
            spec.append((args[0], args[1], lineno))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    last = len(text.splitlines()) or 1
    if states is None:
        raise ParseError(last, "missing 'states' directive")
    declared = set(states)

    def need_state(name, lineno):
        if name not in declared:
            raise ParseError(lineno, f"undeclared state {name!r}")

    for name in initial or ():
        need_state(name, where["initial"])
    seen = set()
    for a, e, b, lineno in trans:
        need_state(a, lineno)
        need_state(b, lineno)
        if e not in events:
            raise ParseError(lineno, f"undeclared event {e!r}")
        if (a, e, b) in seen:
            raise ParseError(lineno, f"duplicate transition {a} {e} {b}")
        seen.add((a, e, b))
    for a, b, lineno in spec:
        need_state(a, lineno)
        need_state(b, lineno)

    try:
        fsa = Fsa.from_names(states, events, initial or (), [(a, e, b) for a, e, b, _ in trans])
    except FsaError as err:
        raise ParseError(where.get("states", 1), str(err)) from None
    order = []
    for a, b, _ in spec:
        p = (fsa.state(a), fsa.state(b))
        if p not in order:
            order.append(p)
    return FsaDocument(fsa, frozenset(order), tuple(order), path, where)


def print_fsa(doc: FsaDocument | Fsa) -> str:
    """Canonical text; ``parse_fsa(print_fsa(d)) == d``."""
    if isinstance(doc, Fsa):
        doc = FsaDocument(doc)
    fsa = doc.fsa
    lines = ["states " + " ".join(fsa.states)]
    if fsa.initial:
        lines.append("initial " + " ".join(fsa.states[x] for x in fsa.initial))
    for e, lab in zip(fsa.events, fsa.labels):
        lines.append(f"event {e} {'-' if lab is None else fsa.alphabet[lab]}")
    for a, e, b in fsa.transitions:
        lines.append(f"trans {fsa.states[a]} {fsa.events[e]} {fsa.states[b]}")
    pairs = list(doc.spec_order) or sorted(doc.spec)
    for a, b in pairs:
        lines.append(f"spec {fsa.states[a]} {fsa.states[b]}")
    return "\n".join(lines) + "\n"


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(structure: Observer | Detector | CompositionAutomaton, name: str | None = None, rankdir: str = "LR") -> str:
    """Graphviz text for a derived automaton; nodes and edges come out sorted."""
    fsa = structure.fsa
    if isinstance(structure, CompositionAutomaton):
        kind = "cc_eps" if structure.epsilon_extended else "cc"
        labels = [fsa.format_pair(p) for p in structure.nodes]
        initial = list(structure.initial)
        edges = []
        for u, ev, v in structure.edges:
            if ev.kind == EPS:
                edges.append((labels[u], "ε", labels[v], True))
            else:
                left = "ε" if ev.left is None else fsa.events[ev.left]
                right = "ε" if ev.right is None else fsa.events[ev.right]
                edges.append((labels[u], f"({left},{right})", labels[v], False))
    else:
        kind = "observer" if isinstance(structure, Observer) else "detector"
        labels = [fsa.format_set(q) for q in structure.nodes] if fsa else []
        initial = [] if structure.initial is None else [structure.initial]
        if isinstance(structure, Observer):
            triples = [(u, s, v) for (u, s), v in structure.edges.items()]
        else:
            triples = list(structure.edges)
        edges = [(labels[u], fsa.alphabet[s], labels[v], False) for u, s, v in triples]

    out = [f"digraph {name or kind} {{", f"  rankdir={rankdir};"]
    init_labels = {labels[i] for i in initial}
    for lab in sorted(labels):
        shape = "doublecircle" if lab in init_labels else "ellipse"
        out.append(f"  {_q(lab)} [shape={shape}];")
    for src, lab, dst, dotted in sorted(set(edges)):
        style = ", style=dotted" if dotted else ""
        out.append(f"  {_q(src)} -> {_q(dst)} [label={_q(lab)}{style}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _lasso_json(fsa: Fsa, lasso: SilentLasso) -> dict[str, Any]:
    def tr(ts):
        return [[fsa.states[a], fsa.events[e], fsa.states[b]] for a, e, b in ts]

    return {"state": fsa.states[lasso.start], "prefix": tr(lasso.prefix), "cycle": tr(lasso.cycle)}


def _content(fsa: Fsa, content, pair: bool) -> str:
    return fsa.format_pair(content) if pair else fsa.format_set(content)


def _witness_json(fsa: Fsa, w: Any, pair: bool) -> Any:
    if w is None:
        return None
    if isinstance(w, DivergenceWitness):
        return {"node": _content(fsa, w.content, pair), "lasso": _lasso_json(fsa, w.lasso)}
    if isinstance(w, CycleWitness):
        out = {
            "cycle": [_content(fsa, c, pair) for c in w.contents],
            "symbols": [fsa.alphabet[s] for s in w.symbols],
        }
        if w.steps:
            out["runs"] = [len(s.path) for s in w.steps]
        return out
    if isinstance(w, PostCycleWitness):
        return {"cycle": _witness_json(fsa, w.cycle, pair), "node": _content(fsa, w.content, pair)}
    raise TypeError(f"unknown witness type {type(w).__name__}")


def assumption1_json(fsa: Fsa, a1: Assumption1Report) -> dict[str, Any]:
    return {
        "deadlock_free": a1.deadlock_free,
        "deadlock_witness": None if a1.deadlock_witness is None else fsa.states[a1.deadlock_witness],
        "divergence_free": a1.divergence_free,
        "divergence_witness": None
        if a1.divergence_witness is None
        else [fsa.states[x] for x in a1.divergence_witness],
    }


def verdict_json(fsa: Fsa, v: Verdict, timings: bool = True) -> dict[str, Any]:
    pair = v.method == "cc"

    def cond(c: Condition):
        return {"id": c.id, "fired": c.fired, "witness": _witness_json(fsa, c.witness, pair)}

    stats = dict(v.stats)
    if not timings:
        stats.pop("seconds", None)
    out = {
        "property": v.property,
        "method": v.method,
        "holds": v.holds,
        "conditions": [cond(c) for c in v.conditions],
        "stats": stats,
    }
    if v.assumption1 is not None:
        out["assumption1"] = assumption1_json(fsa, v.assumption1)
    return out
