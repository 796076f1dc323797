"""Small directed-graph toolkit: SCCs, filtered cycle search, reachability.

Nodes are dense integers ``0 .. n-1``.  Graphs are immutable; every function
here is pure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence


@dataclass(frozen=True)
class DiGraph:
    """Adjacency-list digraph with optional node and edge payloads.

    ``succ[u]`` lists the successors of ``u`` (duplicates are dropped on
    construction).  ``node_data[u]`` and ``edge_data[(u, v)]`` carry whatever
    the caller needs to turn a node walk back into a witness.
    """

    n: int
    succ: tuple[tuple[int, ...], ...]
    node_data: tuple[Any, ...] | None = None
    edge_data: dict[tuple[int, int], Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.succ) != self.n:
            raise ValueError(f"expected {self.n} adjacency lists, got {len(self.succ)}")
        for u, vs in enumerate(self.succ):
            for v in vs:
                if not 0 <= v < self.n:
                    raise ValueError(f"edge {u}->{v} leaves the node range 0..{self.n - 1}")
        if self.node_data is not None and len(self.node_data) != self.n:
            raise ValueError("node_data length does not match node count")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        node_data: Sequence[Any] | None = None,
        edge_data: dict[tuple[int, int], Any] | None = None,
    ) -> DiGraph:
        adj: list[dict[int, None]] = [{} for _ in range(n)]
        for u, v in edges:
            if not 0 <= u < n:
                raise ValueError(f"edge {u}->{v} leaves the node range 0..{n - 1}")
            adj[u][v] = None
        return cls(
            n,
            tuple(tuple(a) for a in adj),
            None if node_data is None else tuple(node_data),
            dict(edge_data or {}),
        )

    def edges(self) -> Iterable[tuple[int, int]]:
        for u, vs in enumerate(self.succ):
            for v in vs:
                yield u, v

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.succ[u]


def tarjan_scc(g: DiGraph) -> list[list[int]]:
    """Strongly connected components in reverse topological order.

    Iterative version of Tarjan's algorithm, so deep graphs do not hit the
    recursion limit.  A component appears before every component that can
    reach it.
    """
    index: list[int | None] = [None] * g.n
    low = [0] * g.n
    on_stack = [False] * g.n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0

    for root in range(g.n):
        if index[root] is not None:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(g.succ[root]))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(g.succ[w])))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def is_cyclic_component(g: DiGraph, comp: Sequence[int]) -> bool:
    """True when ``comp`` (an SCC of ``g``) contains at least one edge."""
    return len(comp) > 1 or g.has_edge(comp[0], comp[0])


def reachable_from(g: DiGraph, sources: Iterable[int]) -> set[int]:
    seen = set(sources)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in g.succ[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def path_within(g: DiGraph, start: int, goal: int, allowed: set[int]) -> list[int]:
    """Shortest path ``start .. goal`` through ``allowed``; one must exist."""
    parent = {start: start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for v in g.succ[u]:
            if v in allowed and v not in parent:
                parent[v] = u
                queue.append(v)
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def cycle_within(g: DiGraph, keep: Callable[[int], bool]) -> list[int] | None:
    """Find a closed walk that only visits nodes satisfying ``keep``.

    Returns ``[v0, v1, ..., vk]`` with ``v0 == vk`` and ``k >= 1``, or
    ``None`` when the kept subgraph is acyclic.  The walk is simple but not
    necessarily shortest.
    """
    kept = [u for u in range(g.n) if keep(u)]
    if not kept:
        return None
    local = {u: i for i, u in enumerate(kept)}
    sub = DiGraph.from_edges(
        len(kept),
        ((local[u], local[v]) for u in kept for v in g.succ[u] if v in local),
    )
    for comp in tarjan_scc(sub):
        if not is_cyclic_component(sub, comp):
            continue
        v = comp[0]
        if sub.has_edge(v, v):
            return [kept[v], kept[v]]
        members = set(comp)
        w = next(x for x in sub.succ[v] if x in members)
        walk = [v] + path_within(sub, w, v, members)
        return [kept[x] for x in walk]
    return None
