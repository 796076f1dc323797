"""Decision procedures for strong periodic (D-)detectability.

Every assumption-free check evaluates two negation conditions on a derived
automaton and reports both, whether or not the first one already fired:

* ``divergence`` -- a reachable ambiguous node holds a state that can run
  silently forever, so the estimate can stay ambiguous with no further output;
* ``cycle`` -- a reachable cycle of ambiguous nodes, so the estimate can stay
  ambiguous along an infinite output.

The property holds iff neither fires.  The ``legacy_*`` checks reproduce the
older cycle-only criteria, which are only sound for deadlock-free and
divergence-free automata.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Callable

from .constructions import (
    BudgetExceeded,
    CompositionAutomaton,
    EmptyInitial,
    StepWitness,
    build_detector,
    build_epsilon_composition,
    build_observer,
    one_observable_step_graph,
)
from .core import (
    Assumption1Report,
    Fsa,
    SilentLasso,
    SpecPairs,
    StateSet,
    check_assumption1,
    divergent_states,
    reachable_states,
    silent_lasso,
)
from .graph import DiGraph, cycle_within, is_cyclic_component, reachable_from, tarjan_scc

SPD, SPDD, SD_LEGACY = "SPD", "SPDD", "SD-legacy"
DIVERGENCE, CYCLE, POST_CYCLE = "divergence", "cycle", "post-cycle"


@dataclass(frozen=True)
class DivergenceWitness:
    """A reachable node of the construction and a divergent state inside it."""

    node: int
    content: tuple[int, ...]
    lasso: SilentLasso


@dataclass(frozen=True)
class CycleWitness:
    """Closed walk ``nodes[0] .. nodes[-1] == nodes[0]`` in the construction.

    ``symbols[i]`` labels the step ``nodes[i] -> nodes[i + 1]``.  For the
    composition method ``nodes`` are composition node indices and ``steps``
    holds the full run for each step.
    """

    nodes: tuple[int, ...]
    contents: tuple[tuple[int, ...], ...]
    symbols: tuple[int, ...]
    steps: tuple[StepWitness, ...] = ()


@dataclass(frozen=True)
class PostCycleWitness:
    """A non-singleton node reachable from a reachable cycle."""

    cycle: CycleWitness
    node: int
    content: tuple[int, ...]


@dataclass(frozen=True)
class Condition:
    id: str
    fired: bool
    witness: Any = None


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check.  ``holds`` is ``None`` when the budget ran out."""

    property: str
    method: str
    holds: bool | None
    conditions: tuple[Condition, ...] = ()
    stats: dict[str, Any] = field(default_factory=dict, compare=False)
    assumption1: Assumption1Report | None = None

    def condition(self, cid: str) -> Condition | None:
        return next((c for c in self.conditions if c.id == cid), None)

    def fired(self, cid: str) -> bool:
        c = self.condition(cid)
        return c is not None and c.fired


def has_infinite_run(fsa: Fsa) -> bool:
    reach = set(reachable_states(fsa))
    g = DiGraph.from_edges(
        fsa.n_states, ((x, y) for x in range(fsa.n_states) for _, y in fsa.out(x))
    )
    return cycle_within(g, reach.__contains__) is not None


def _stats(start: float, fsa: Fsa, nodes: int, edges: int, **extra) -> dict[str, Any]:
    stats = {
        "nodes": nodes,
        "edges": edges,
        "seconds": round(time.perf_counter() - start, 6),
        "vacuous": not has_infinite_run(fsa),
    }
    stats.update(extra)
    return stats


def _divergence(
    fsa: Fsa, contents, ambiguous: Callable[[tuple[int, ...]], bool], pick=None
) -> Condition:
    div = set(divergent_states(fsa))
    for i, q in enumerate(contents):
        if not ambiguous(q):
            continue
        candidates = [q[0]] if pick == "left" else list(q)
        hit = next((x for x in candidates if x in div), None)
        if hit is not None:
            return Condition(DIVERGENCE, True, DivergenceWitness(i, q, silent_lasso(fsa, hit)))
    return Condition(DIVERGENCE, False)


def _cycle(g: DiGraph, contents, keep: Callable[[tuple[int, ...]], bool], cid=CYCLE) -> Condition:
    walk = cycle_within(g, lambda u: keep(contents[u]))
    if walk is None:
        return Condition(cid, False)
    return Condition(cid, True, _cycle_witness(g, contents, walk))


def _cycle_witness(g: DiGraph, contents, walk) -> CycleWitness:
    syms = tuple(g.edge_data[u, v] for u, v in zip(walk, walk[1:]))
    return CycleWitness(tuple(walk), tuple(contents[u] for u in walk), syms)


def _unknown(prop: str, method: str, start: float, fsa: Fsa, err: BudgetExceeded) -> Verdict:
    return Verdict(
        prop,
        method,
        None,
        (),
        _stats(start, fsa, err.nodes_built, 0, budget_exceeded=True, max_nodes=err.max_nodes),
    )


def _vacuous(prop: str, method: str, start: float, fsa: Fsa, cids, **extra) -> Verdict:
    conds = tuple(Condition(c, False) for c in cids)
    return Verdict(prop, method, True, conds, _stats(start, fsa, 0, 0, **extra))


def _observer_or_verdict(fsa, max_nodes, prop, method, start, cids):
    try:
        return build_observer(fsa, max_nodes), None
    except EmptyInitial:
        return None, _vacuous(prop, method, start, fsa, cids)
    except BudgetExceeded as err:
        return None, _unknown(prop, method, start, fsa, err)


def _verdict(prop, method, start, fsa, conds, nodes, edges, **kw) -> Verdict:
    holds = not any(c.fired for c in conds)
    return Verdict(prop, method, holds, tuple(conds), _stats(start, fsa, nodes, edges), **kw)


def _ambiguous(q) -> bool:
    return len(q) > 1


def check_spd_observer(fsa: Fsa, max_nodes: int = 100_000) -> Verdict:
    """Exponential-size check on the observer (estimates as nodes)."""
    start = time.perf_counter()
    obs, early = _observer_or_verdict(fsa, max_nodes, SPD, "observer", start, (DIVERGENCE, CYCLE))
    if early is not None:
        return early
    conds = [
        _divergence(fsa, obs.nodes, _ambiguous),
        _cycle(obs.graph(), obs.nodes, _ambiguous),
    ]
    return _verdict(SPD, "observer", start, fsa, conds, len(obs.nodes), len(obs.edges))


def check_spd_detector(fsa: Fsa) -> Verdict:
    """Polynomial check on the detector; cycles must avoid singleton nodes."""
    start = time.perf_counter()
    det = build_detector(fsa)
    if not det.nodes:
        return _vacuous(SPD, "detector", start, fsa, (DIVERGENCE, CYCLE))
    conds = [
        _divergence(fsa, det.nodes, _ambiguous),
        _cycle(det.graph(), det.nodes, lambda q: len(q) == 2),
    ]
    return _verdict(SPD, "detector", start, fsa, conds, len(det.nodes), len(det.edges))


def check_spd_cc(fsa: Fsa) -> Verdict:
    """Polynomial check on the epsilon-extended self-composition.

    The divergence condition looks at the left component of off-diagonal
    pairs; the cycle condition searches the graph of one-symbol steps between
    off-diagonal pairs.
    """
    start = time.perf_counter()
    cc = build_epsilon_composition(fsa)
    if not cc.nodes:
        return _vacuous(SPD, "cc", start, fsa, (DIVERGENCE, CYCLE))
    conds = [_divergence(fsa, cc.nodes, lambda p: p[0] != p[1], pick="left")]
    steps = one_observable_step_graph(cc)
    walk = cycle_within(steps, lambda u: True)
    if walk is None:
        conds.append(Condition(CYCLE, False))
    else:
        conds.append(Condition(CYCLE, True, _cc_cycle_witness(cc, steps, walk)))
    return _verdict(SPD, "cc", start, fsa, conds, len(cc.nodes), len(cc.edges))


def _cc_cycle_witness(cc: CompositionAutomaton, steps: DiGraph, walk) -> CycleWitness:
    nodes = tuple(steps.node_data[u] for u in walk)
    hops = tuple(steps.edge_data[u, v] for u, v in zip(walk, walk[1:]))
    return CycleWitness(
        nodes, tuple(cc.nodes[u] for u in nodes), tuple(h.symbol for h in hops), hops
    )


def spec_hit(spec: SpecPairs) -> Callable[[StateSet], bool]:
    """Predicate ``(q x q)`` meets ``spec``."""

    def hit(q):
        members = set(q)
        return any(a in members and b in members for a, b in spec)

    return hit


def check_spdd_observer(fsa: Fsa, spec: SpecPairs, max_nodes: int = 100_000) -> Verdict:
    start = time.perf_counter()
    obs, early = _observer_or_verdict(fsa, max_nodes, SPDD, "observer", start, (DIVERGENCE, CYCLE))
    if early is not None:
        return early
    hit = spec_hit(spec)
    conds = [
        _divergence(fsa, obs.nodes, hit),
        _cycle(obs.graph(), obs.nodes, hit),
    ]
    return _verdict(SPDD, "observer", start, fsa, conds, len(obs.nodes), len(obs.edges))


def legacy_check_spd_detector(fsa: Fsa) -> Verdict:
    """Cycle-only criterion: every reachable detector cycle has a singleton.

    Sound only for automata that pass :func:`check_assumption1`; the report
    is attached to the verdict.
    """
    start = time.perf_counter()
    a1 = check_assumption1(fsa)
    det = build_detector(fsa)
    cond = _cycle(det.graph(), det.nodes, _ambiguous)
    return _verdict(SPD, "legacy-detector", start, fsa, [cond], len(det.nodes), len(det.edges), assumption1=a1)


def legacy_check_spdd_observer(fsa: Fsa, spec: SpecPairs, max_nodes: int = 100_000) -> Verdict:
    start = time.perf_counter()
    a1 = check_assumption1(fsa)
    obs, early = _observer_or_verdict(fsa, max_nodes, SPDD, "legacy-observer", start, (CYCLE,))
    if early is not None:
        return Verdict(early.property, early.method, early.holds, early.conditions, early.stats, a1)
    cond = _cycle(obs.graph(), obs.nodes, spec_hit(spec))
    return _verdict(
        SPDD, "legacy-observer", start, fsa, [cond], len(obs.nodes), len(obs.edges), assumption1=a1
    )


def legacy_check_sd_detector(fsa: Fsa) -> Verdict:
    """Legacy strong detectability: everything reachable from a cycle is a singleton."""
    start = time.perf_counter()
    a1 = check_assumption1(fsa)
    det = build_detector(fsa)
    g = det.graph()
    cond = Condition(POST_CYCLE, False)
    for comp in tarjan_scc(g):
        if not is_cyclic_component(g, comp):
            continue
        bad = next((v for v in sorted(reachable_from(g, comp)) if len(det.nodes[v]) > 1), None)
        if bad is not None:
            members = set(comp)
            cyc = _cycle_witness(g, det.nodes, cycle_within(g, members.__contains__))
            cond = Condition(POST_CYCLE, True, PostCycleWitness(cyc, bad, det.nodes[bad]))
            break
    return _verdict(
        SD_LEGACY, "legacy-detector", start, fsa, [cond], len(det.nodes), len(det.edges), assumption1=a1
    )


def check(fsa: Fsa, prop: str, method: str, spec: SpecPairs | None = None, max_nodes: int = 100_000) -> Verdict:
    """Dispatch by property and method name (as used on the command line)."""
    table = {
        ("spd", "observer"): lambda: check_spd_observer(fsa, max_nodes),
        ("spd", "detector"): lambda: check_spd_detector(fsa),
        ("spd", "cc"): lambda: check_spd_cc(fsa),
        ("spd", "legacy-detector"): lambda: legacy_check_spd_detector(fsa),
        ("spdd", "observer"): lambda: check_spdd_observer(fsa, spec or frozenset(), max_nodes),
        ("spdd", "legacy-observer"): lambda: legacy_check_spdd_observer(fsa, spec or frozenset(), max_nodes),
        ("sd", "legacy-detector"): lambda: legacy_check_sd_detector(fsa),
    }
    try:
        run = table[prop, method]
    except KeyError:
        raise ValueError(f"method {method!r} is not available for {prop}") from None
    return run()
