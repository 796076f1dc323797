"""Label-driven automata derived from an :class:`~spdetect.core.Fsa`.

* :func:`build_observer` -- deterministic subset construction over estimates;
* :func:`build_detector` -- the nondeterministic variant whose non-initial
  nodes hold at most two states;
* :func:`build_self_composition` -- pairs of runs emitting the same output;
* :func:`extend_epsilon` -- the self-composition with silent links from
  off-diagonal pairs back to diagonal pairs.

Only the part reachable from the initial node(s) is materialized.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

from .core import Fsa, StateSet, observable_reach, state_set, unobservable_reach
from .graph import DiGraph

Pair = tuple[int, int]


class BudgetExceeded(RuntimeError):
    """The observer grew past its node budget."""

    def __init__(self, max_nodes: int, nodes_built: int):
        super().__init__(f"observer exceeded {max_nodes} nodes")
        self.max_nodes = max_nodes
        self.nodes_built = nodes_built


class EmptyInitial(ValueError):
    """The initial estimate is empty, so the observer has no nodes."""


@dataclass(frozen=True)
class Observer:
    nodes: tuple[StateSet, ...]
    initial: int | None
    edges: dict[tuple[int, int], int]
    fsa: Fsa | None = field(default=None, compare=False, repr=False)

    def graph(self) -> DiGraph:
        data: dict[tuple[int, int], int] = {}
        for (u, sym), v in sorted(self.edges.items()):
            data.setdefault((u, v), sym)
        return DiGraph.from_edges(len(self.nodes), data, self.nodes, data)

    def step(self, node: int, symbol: int) -> int | None:
        return self.edges.get((node, symbol))

    def run(self, observation) -> int | None:
        """Node reached by ``observation`` from the initial node, if any."""
        node = self.initial
        for sym in observation:
            if node is None:
                return None
            node = self.edges.get((node, sym))
        return node


def build_observer(fsa: Fsa, max_nodes: int = 100_000) -> Observer:
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    init = unobservable_reach(fsa, fsa.initial)
    if not init:
        raise EmptyInitial("initial estimate is empty")
    index = {init: 0}
    nodes = [init]
    edges: dict[tuple[int, int], int] = {}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for sym in range(len(fsa.alphabet)):
            nxt = unobservable_reach(fsa, observable_reach(fsa, nodes[u], sym))
            if not nxt:
                continue
            v = index.get(nxt)
            if v is None:
                if len(nodes) >= max_nodes:
                    raise BudgetExceeded(max_nodes, len(nodes))
                v = index[nxt] = len(nodes)
                nodes.append(nxt)
                queue.append(v)
            edges[u, sym] = v
    return Observer(tuple(nodes), 0, edges, fsa)


@dataclass(frozen=True)
class Detector:
    nodes: tuple[StateSet, ...]
    initial: int | None
    edges: tuple[tuple[int, int, int], ...]
    fsa: Fsa | None = field(default=None, compare=False, repr=False)

    def graph(self) -> DiGraph:
        data: dict[tuple[int, int], int] = {}
        for u, sym, v in self.edges:
            data.setdefault((u, v), sym)
        return DiGraph.from_edges(
            len(self.nodes), ((u, v) for u, _, v in self.edges), self.nodes, data
        )


def detector_successors(fsa: Fsa, q: StateSet, symbol: int) -> list[StateSet]:
    """Successor nodes of ``q`` under ``symbol`` by the two-state splitting rule."""
    reach = unobservable_reach(fsa, observable_reach(fsa, q, symbol))
    if len(reach) > 1:
        return [tuple(p) for p in combinations(reach, 2)]
    if len(reach) == 1:
        return [reach]
    return []


def build_detector(fsa: Fsa) -> Detector:
    init = unobservable_reach(fsa, fsa.initial)
    if not init:
        return Detector((), None, (), fsa)
    index = {init: 0}
    nodes = [init]
    edges = []
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for sym in range(len(fsa.alphabet)):
            for q in detector_successors(fsa, nodes[u], sym):
                v = index.get(q)
                if v is None:
                    v = index[q] = len(nodes)
                    nodes.append(q)
                    queue.append(v)
                edges.append((u, sym, v))
    return Detector(tuple(nodes), 0, tuple(edges), fsa)


OBS, LEFT, RIGHT, EPS = "obs", "left", "right", "eps"


class PairEvent(NamedTuple):
    """An event of the self-composition.

    ``obs``: both components move on events with the same symbol;
    ``left``/``right``: one component moves silently;
    ``eps``: added silent link to a diagonal pair (no component event).
    """

    kind: str
    left: int | None = None
    right: int | None = None
    symbol: int | None = None

    @property
    def silent(self) -> bool:
        return self.kind != OBS


EPS_LINK = PairEvent(EPS)


def pair_successors(fsa: Fsa, pair: Pair) -> list[tuple[PairEvent, Pair]]:
    """All self-composition moves out of ``pair`` (no epsilon links)."""
    x, y = pair
    out = []
    for e, x2 in fsa.out(x):
        lab = fsa.labels[e]
        if lab is None:
            out.append((PairEvent(LEFT, left=e), (x2, y)))
            continue
        for f, y2 in fsa.out(y):
            if fsa.labels[f] == lab:
                out.append((PairEvent(OBS, e, f, lab), (x2, y2)))
    for f, y2 in fsa.out(y):
        if fsa.labels[f] is None:
            out.append((PairEvent(RIGHT, right=f), (x, y2)))
    return out


@dataclass(frozen=True)
class CompositionAutomaton:
    nodes: tuple[Pair, ...]
    initial: tuple[int, ...]
    edges: tuple[tuple[int, PairEvent, int], ...]
    epsilon_extended: bool = False
    fsa: Fsa | None = field(default=None, compare=False, repr=False)

    def index(self) -> dict[Pair, int]:
        return {p: i for i, p in enumerate(self.nodes)}

    def adjacency(self) -> list[list[tuple[PairEvent, int]]]:
        adj: list[list[tuple[PairEvent, int]]] = [[] for _ in self.nodes]
        for u, ev, v in self.edges:
            adj[u].append((ev, v))
        return adj

    def graph(self) -> DiGraph:
        return DiGraph.from_edges(len(self.nodes), ((u, v) for u, _, v in self.edges), self.nodes)

    def off_diagonal(self) -> list[int]:
        return [i for i, (x, y) in enumerate(self.nodes) if x != y]


def _explore(fsa: Fsa, start: list[Pair], moves) -> CompositionAutomaton:
    index: dict[Pair, int] = {}
    nodes: list[Pair] = []
    for p in start:
        if p not in index:
            index[p] = len(nodes)
            nodes.append(p)
    edges = []
    queue = deque(range(len(nodes)))
    while queue:
        u = queue.popleft()
        for ev, p in moves(nodes[u]):
            v = index.get(p)
            if v is None:
                v = index[p] = len(nodes)
                nodes.append(p)
                queue.append(v)
            edges.append((u, ev, v))
    return CompositionAutomaton(tuple(nodes), tuple(range(len(start))), tuple(edges), fsa=fsa)


def build_self_composition(fsa: Fsa) -> CompositionAutomaton:
    start = [(x, y) for x in fsa.initial for y in fsa.initial]
    return _explore(fsa, start, lambda p: pair_successors(fsa, p))


def epsilon_links(fsa: Fsa, pair: Pair) -> list[Pair]:
    """Diagonal targets of the silent links added at off-diagonal ``pair``.

    ``(x1, x2)`` links to ``(x1, x1)`` when some move of ``(x1, x1)`` lands on
    a pair that ``(x1, x2)`` cannot reach in one move with the same output;
    likewise for ``(x2, x2)``.  With the link, ``(x1, x2)`` can mimic every
    run of both diagonal pairs symbol for symbol.
    """
    x1, x2 = pair
    if x1 == x2:
        return []
    own = {(ev.symbol, p) for ev, p in pair_successors(fsa, pair)}
    out = []
    for d in (x1, x2):
        diag = (d, d)
        if any((ev.symbol, p) not in own for ev, p in pair_successors(fsa, diag)):
            out.append(diag)
    return out


def extend_epsilon(cc: CompositionAutomaton, fsa: Fsa) -> CompositionAutomaton:
    """Add the silent off-diagonal-to-diagonal links and re-explore to fixpoint.

    Node indices of ``cc`` are preserved; newly reachable pairs are appended.
    """
    if cc.epsilon_extended:
        return cc

    def moves(p):
        return pair_successors(fsa, p) + [(EPS_LINK, d) for d in epsilon_links(fsa, p)]

    grown = _explore(fsa, list(cc.nodes), moves)
    return CompositionAutomaton(grown.nodes, cc.initial, grown.edges, True, fsa)


def build_epsilon_composition(fsa: Fsa) -> CompositionAutomaton:
    return extend_epsilon(build_self_composition(fsa), fsa)


@dataclass(frozen=True)
class StepWitness:
    """How one anchor reaches the next: a run of composition edges.

    ``path`` is a sequence of ``(src, event, dst)`` composition edges holding
    exactly one ``obs`` event, whose output is ``symbol``.
    """

    symbol: int
    path: tuple[tuple[int, PairEvent, int], ...]


def _silent_closure(adj, u: int) -> dict[int, tuple[int, PairEvent] | None]:
    parent: dict[int, tuple[int, PairEvent] | None] = {u: None}
    queue = deque([u])
    while queue:
        w = queue.popleft()
        for ev, z in adj[w]:
            if ev.silent and z not in parent:
                parent[z] = (w, ev)
                queue.append(z)
    return parent


def _unwind(parent, v: int) -> list[tuple[int, PairEvent, int]]:
    path = []
    while parent[v] is not None:
        w, ev = parent[v]
        path.append((w, ev, v))
        v = w
    path.reverse()
    return path


def one_observable_step_graph(cc: CompositionAutomaton) -> DiGraph:
    """Graph over off-diagonal pairs linked by runs carrying exactly one symbol.

    Graph node ``i`` stands for composition node ``node_data[i]`` (an index
    into ``cc.nodes``).  ``edge_data[(i, j)]`` is a :class:`StepWitness`.
    Intermediate pairs of a run may be diagonal.
    """
    adj = cc.adjacency()
    anchors = cc.off_diagonal()
    local = {u: i for i, u in enumerate(anchors)}
    closures = {}

    def closure(u):
        if u not in closures:
            closures[u] = _silent_closure(adj, u)
        return closures[u]

    edges = []
    data: dict[tuple[int, int], StepWitness] = {}
    for u in anchors:
        before = closure(u)
        for w in sorted(before):
            for ev, z in adj[w]:
                if ev.silent:
                    continue
                after = closure(z)
                for v in sorted(after):
                    if v not in local or (local[u], local[v]) in data:
                        continue
                    path = _unwind(before, w) + [(w, ev, z)] + _unwind(after, v)
                    data[local[u], local[v]] = StepWitness(ev.symbol, tuple(path))
                    edges.append((local[u], local[v]))
    return DiGraph.from_edges(len(anchors), edges, anchors, data)
