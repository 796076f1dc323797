"""Partially observed finite-state automata and the state-estimation primitives.

States, events and output symbols are interned to dense integer indices.  An
event's label is either a symbol index or ``None`` (silent).  A state set is a
sorted tuple of state indices, which makes subset-construction nodes hashable
and structurally comparable.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph import DiGraph, cycle_within, is_cyclic_component, path_within, tarjan_scc

StateSet = tuple[int, ...]
SpecPairs = frozenset[tuple[int, int]]
Transition = tuple[int, int, int]

IDENT = re.compile(r"[A-Za-z0-9_]+\Z")


class FsaError(ValueError):
    """Malformed automaton or reference to an undeclared identifier."""


def state_set(states: Iterable[int]) -> StateSet:
    return tuple(sorted(set(states)))


@dataclass(frozen=True)
class Fsa:
    """A finite automaton whose events emit output symbols or nothing.

    ``labels[e]`` is the symbol index emitted by event ``e`` (an index into
    ``alphabet``) or ``None`` for a silent event.  Use :meth:`from_names` to
    build one from identifier strings.
    """

    states: tuple[str, ...]
    events: tuple[str, ...]
    labels: tuple[int | None, ...]
    alphabet: tuple[str, ...]
    initial: StateSet
    transitions: tuple[Transition, ...]

    _silent_succ: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _obs_succ: tuple[dict[int, tuple[int, ...]], ...] = field(init=False, repr=False, compare=False)
    _out: tuple[tuple[tuple[int, int], ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for kind, names in (("state", self.states), ("event", self.events), ("symbol", self.alphabet)):
            seen = set()
            for name in names:
                if not IDENT.match(name):
                    raise FsaError(f"invalid {kind} name {name!r}")
                if name in seen:
                    raise FsaError(f"duplicate {kind} {name!r}")
                seen.add(name)
        if len(self.labels) != len(self.events):
            raise FsaError("every event needs exactly one label")
        for e, lab in enumerate(self.labels):
            if lab is not None and not 0 <= lab < len(self.alphabet):
                raise FsaError(f"event {self.events[e]!r} has unknown symbol index {lab}")
        n = len(self.states)
        if tuple(sorted(set(self.initial))) != tuple(self.initial):
            raise FsaError("initial set must be sorted and duplicate-free")
        for x in self.initial:
            if not 0 <= x < n:
                raise FsaError(f"initial state index {x} out of range")
        seen_t = set()
        silent: list[dict[int, None]] = [{} for _ in range(n)]
        obs: list[dict[int, dict[int, None]]] = [{} for _ in range(n)]
        out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for t in self.transitions:
            src, ev, dst = t
            if not (0 <= src < n and 0 <= dst < n):
                raise FsaError(f"transition {t} references an undeclared state")
            if not 0 <= ev < len(self.events):
                raise FsaError(f"transition {t} references an undeclared event")
            if t in seen_t:
                raise FsaError(
                    f"duplicate transition {self.states[src]} {self.events[ev]} {self.states[dst]}"
                )
            seen_t.add(t)
            out[src].append((ev, dst))
            lab = self.labels[ev]
            if lab is None:
                silent[src][dst] = None
            else:
                obs[src].setdefault(lab, {})[dst] = None
        object.__setattr__(self, "_silent_succ", tuple(tuple(d) for d in silent))
        object.__setattr__(
            self, "_obs_succ", tuple({s: tuple(d) for s, d in m.items()} for m in obs)
        )
        object.__setattr__(self, "_out", tuple(tuple(o) for o in out))

    @classmethod
    def from_names(
        cls,
        states: Sequence[str],
        events: Mapping[str, str | None],
        initial: Iterable[str],
        transitions: Iterable[tuple[str, str, str]],
    ) -> Fsa:
        """Build from identifiers; ``events`` maps event name to symbol (``None`` = silent).

        The alphabet is the set of symbols in order of first appearance.
        """
        sidx = {s: i for i, s in enumerate(states)}
        eidx = {e: i for i, e in enumerate(events)}
        alphabet: dict[str, int] = {}
        labels = []
        for sym in events.values():
            if sym is None:
                labels.append(None)
            else:
                labels.append(alphabet.setdefault(sym, len(alphabet)))

        def lookup(table, name, kind):
            try:
                return table[name]
            except KeyError:
                raise FsaError(f"undeclared {kind} {name!r}") from None

        init = state_set(lookup(sidx, s, "state") for s in initial)
        trans = tuple(
            (lookup(sidx, a, "state"), lookup(eidx, e, "event"), lookup(sidx, b, "state"))
            for a, e, b in transitions
        )
        return cls(tuple(states), tuple(events), tuple(labels), tuple(alphabet), init, trans)

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise FsaError(f"unknown state {name!r}") from None

    def symbol(self, name: str) -> int:
        try:
            return self.alphabet.index(name)
        except ValueError:
            raise FsaError(f"unknown symbol {name!r}") from None

    def states_of(self, *names: str) -> StateSet:
        return state_set(self.state(n) for n in names)

    def is_silent(self, event: int) -> bool:
        return self.labels[event] is None

    def out(self, x: int) -> tuple[tuple[int, int], ...]:
        """Outgoing ``(event, dst)`` pairs of state ``x`` in declaration order."""
        return self._out[x]

    def silent_successors(self, x: int) -> tuple[int, ...]:
        return self._silent_succ[x]

    def symbol_successors(self, x: int, symbol: int) -> tuple[int, ...]:
        return self._obs_succ[x].get(symbol, ())

    def format_set(self, states: Iterable[int]) -> str:
        return "{" + ",".join(self.states[x] for x in states) + "}"

    def format_pair(self, pair: tuple[int, int]) -> str:
        return f"({self.states[pair[0]]},{self.states[pair[1]]})"


def spec_pairs(fsa: Fsa, pairs: Iterable[tuple[str, str]]) -> SpecPairs:
    """Resolve named state pairs; stored exactly as given (no symmetric closure)."""
    return frozenset((fsa.state(a), fsa.state(b)) for a, b in pairs)


def unobservable_reach(fsa: Fsa, from_: Iterable[int]) -> StateSet:
    seen = set(from_)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for y in fsa.silent_successors(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return state_set(seen)


def observable_reach(fsa: Fsa, from_: Iterable[int], symbol: int) -> StateSet:
    if not 0 <= symbol < len(fsa.alphabet):
        raise FsaError(f"unknown symbol index {symbol}")
    return state_set(y for x in from_ for y in fsa.symbol_successors(x, symbol))


def current_state_estimate(fsa: Fsa, observation: Sequence[int]) -> StateSet:
    """States the system may occupy after emitting ``observation``.

    An empty result means the observation cannot be produced.
    """
    est = unobservable_reach(fsa, fsa.initial)
    for sym in observation:
        est = unobservable_reach(fsa, observable_reach(fsa, est, sym))
    return est


def silent_graph(fsa: Fsa) -> DiGraph:
    return DiGraph(fsa.n_states, tuple(fsa.silent_successors(x) for x in range(fsa.n_states)))


def divergent_states(fsa: Fsa) -> StateSet:
    """States from which an infinite run of silent transitions starts."""
    g = silent_graph(fsa)
    on_cycle = {x for comp in tarjan_scc(g) if is_cyclic_component(g, comp) for x in comp}
    pred: list[list[int]] = [[] for _ in range(fsa.n_states)]
    for x in range(fsa.n_states):
        for y in fsa.silent_successors(x):
            pred[y].append(x)
    seen = set(on_cycle)
    stack = list(on_cycle)
    while stack:
        y = stack.pop()
        for x in pred[y]:
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return state_set(seen)


def reachable_states(fsa: Fsa) -> StateSet:
    seen = set(fsa.initial)
    stack = list(seen)
    while stack:
        x = stack.pop()
        for _, y in fsa.out(x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return state_set(seen)


@dataclass(frozen=True)
class SilentLasso:
    """A silent path ``prefix`` from a state into a nonempty silent ``cycle``.

    Both are tuples of ``(src, event, dst)`` transitions of the automaton.
    """

    start: int
    prefix: tuple[Transition, ...]
    cycle: tuple[Transition, ...]


def _silent_event(fsa: Fsa, x: int, y: int) -> int:
    return next(e for e, z in fsa.out(x) if z == y and fsa.is_silent(e))


def silent_lasso(fsa: Fsa, x: int) -> SilentLasso | None:
    """Witness that ``x`` is divergent, or ``None`` if it is not."""
    g = silent_graph(fsa)
    comp_of = {}
    for comp in tarjan_scc(g):
        if is_cyclic_component(g, comp):
            for v in comp:
                comp_of[v] = set(comp)
    parent = {x: x}
    queue = deque([x])
    hit = None
    while queue:
        u = queue.popleft()
        if u in comp_of:
            hit = u
            break
        for v in g.succ[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    if hit is None:
        return None
    path = [hit]
    while path[-1] != x:
        path.append(parent[path[-1]])
    path.reverse()
    if g.has_edge(hit, hit):
        walk = [hit, hit]
    else:
        members = comp_of[hit]
        w = next(v for v in g.succ[hit] if v in members)
        walk = [hit] + path_within(g, w, hit, members)
    prefix = tuple((a, _silent_event(fsa, a, b), b) for a, b in zip(path, path[1:]))
    cycle = tuple((a, _silent_event(fsa, a, b), b) for a, b in zip(walk, walk[1:]))
    return SilentLasso(x, prefix, cycle)


@dataclass(frozen=True)
class Assumption1Report:
    """Deadlock-freeness and divergence-freeness of the reachable part.

    ``deadlock_witness`` is a reachable state without outgoing transitions;
    ``divergence_witness`` is a reachable silent cycle written as a closed
    state walk ``(x, ..., x)``.
    """

    deadlock_free: bool
    deadlock_witness: int | None
    divergence_free: bool
    divergence_witness: tuple[int, ...] | None

    @property
    def holds(self) -> bool:
        return self.deadlock_free and self.divergence_free


def check_assumption1(fsa: Fsa) -> Assumption1Report:
    reach = reachable_states(fsa)
    dead = next((x for x in reach if not fsa.out(x)), None)
    g = silent_graph(fsa)
    kept = set(reach)
    cyc = cycle_within(g, kept.__contains__)
    return Assumption1Report(
        dead is None,
        dead,
        cyc is None,
        None if cyc is None else tuple(cyc),
    )
