"""Independent brute-force checkers and a seeded random automaton generator.

The naive checkers deliberately avoid :mod:`spdetect.constructions` and
:mod:`spdetect.verify`: estimates are recomputed from scratch for every
observation, silent lassos are found by bounded path enumeration and cycles
by exhaustive depth-first search.  They are only meant for small automata.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable

from .core import Fsa, SpecPairs, current_state_estimate

MAX_ORACLE_STATES = 8


class TooLarge(ValueError):
    """Automaton exceeds the size the exhaustive checkers accept."""


def guard_size(fsa: Fsa) -> None:
    if fsa.n_states > MAX_ORACLE_STATES:
        raise TooLarge(f"{fsa.n_states} states, oracle limit is {MAX_ORACLE_STATES}")


@dataclass(frozen=True)
class NaiveResult:
    holds: bool
    cond1: bool
    cond2: bool


def _estimate_graph(fsa: Fsa):
    """Distinct nonempty estimates and the symbol steps between them.

    Each estimate is reached by a representative observation; successors are
    recomputed from the initial states with the extended observation.
    """
    first = current_state_estimate(fsa, ())
    if not first:
        return [], {}
    estimates = [first]
    rep = {first: ()}
    edges: dict[int, set[int]] = {0: set()}
    queue = deque([first])
    while queue:
        est = queue.popleft()
        word = rep[est]
        for sym in range(len(fsa.alphabet)):
            nxt = current_state_estimate(fsa, word + (sym,))
            if not nxt:
                continue
            if nxt not in rep:
                rep[nxt] = word + (sym,)
                estimates.append(nxt)
                edges[len(estimates) - 1] = set()
                queue.append(nxt)
            edges[estimates.index(est)].add(estimates.index(nxt))
    return estimates, edges


def _silent_runs_forever(fsa: Fsa, x: int) -> bool:
    # a silent path of n + 1 states must repeat one
    limit = fsa.n_states + 1
    silent = [
        [dst for src, ev, dst in fsa.transitions if src == s and fsa.labels[ev] is None]
        for s in range(fsa.n_states)
    ]

    def dfs(path):
        if len(set(path)) < len(path):
            return True
        if len(path) >= limit:
            return False
        return any(dfs(path + [y]) for y in silent[path[-1]])

    return dfs([x])


def _has_cycle(nodes: list[int], edges: dict[int, set[int]], keep: Callable[[int], bool]) -> bool:
    # enumerate simple cycles through kept nodes, smallest node first
    for s in nodes:
        if not keep(s):
            continue

        def dfs(u, on_path):
            for v in edges[u]:
                if v == s:
                    return True
                if v > s and v not in on_path and keep(v):
                    on_path.add(v)
                    if dfs(v, on_path):
                        return True
                    on_path.discard(v)
            return False

        if dfs(s, {s}):
            return True
    return False


def _naive(fsa: Fsa, bad: Callable[[tuple[int, ...]], bool]) -> NaiveResult:
    estimates, edges = _estimate_graph(fsa)
    cond1 = any(bad(m) and any(_silent_runs_forever(fsa, x) for x in m) for m in estimates)
    cond2 = _has_cycle(list(range(len(estimates))), edges, lambda i: bad(estimates[i]))
    return NaiveResult(not (cond1 or cond2), cond1, cond2)


def naive_spd(fsa: Fsa) -> NaiveResult:
    """Strong periodic detectability by exhaustive estimate enumeration."""
    guard_size(fsa)
    return _naive(fsa, lambda m: len(m) > 1)


def naive_spdd(fsa: Fsa, spec: SpecPairs) -> NaiveResult:
    guard_size(fsa)
    pairs = list(spec)
    return _naive(fsa, lambda m: any(a in m and b in m for a, b in pairs))


@dataclass(frozen=True)
class GenConfig:
    """Parameters of :func:`random_fsa`.

    ``density`` is the expected number of outgoing transitions per state.
    Each event is silent with probability ``silent_fraction``; observable
    events draw their symbol from ``symbols`` candidates.
    """

    states: int = 4
    events: int = 3
    silent_fraction: float = 0.3
    density: float = 1.5
    initial: int = 1
    seed: int = 0
    symbols: int = 2

    def __post_init__(self):
        for name in ("states", "events", "initial", "symbols"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if not 0.0 <= self.silent_fraction <= 1.0:
            raise ValueError("silent_fraction must lie in [0, 1]")
        if self.density < 0:
            raise ValueError("density must be non-negative")
        if self.initial > self.states:
            raise ValueError("initial set larger than the state set")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def random_fsa(cfg: GenConfig) -> Fsa:
    rng = random.Random(cfg.seed)
    states = [f"x{i}" for i in range(cfg.states)]
    events = {}
    for i in range(cfg.events):
        if rng.random() < cfg.silent_fraction or cfg.symbols == 0:
            events[f"t{i}"] = None
        else:
            events[f"t{i}"] = "abcdefghijklmnopqrstuvwxyz"[rng.randrange(min(cfg.symbols, 26))]
    slots = cfg.states * cfg.events
    p = min(1.0, cfg.density / slots) if slots else 0.0
    trans = [
        (s, e, d)
        for s in states
        for e in events
        for d in states
        if rng.random() < p
    ]
    initial = sorted(rng.sample(range(cfg.states), cfg.initial))
    return Fsa.from_names(states, events, [states[i] for i in initial], trans)
