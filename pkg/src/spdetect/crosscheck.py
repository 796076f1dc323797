"""Seeded random corpora and the agreement suite run over them."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .core import Fsa, SpecPairs
from .lemmas import check_prop5, check_prop8
from .oracle import GenConfig, naive_spd, naive_spdd, random_fsa
from .verify import (
    CYCLE,
    DIVERGENCE,
    check_spd_cc,
    check_spd_detector,
    check_spd_observer,
    check_spdd_observer,
)

SILENT_FRACTIONS = (0.0, 0.3, 0.6)
DENSITIES = (0.8, 1.2, 1.6, 2.0)


def corpus(count: int, seed: int, max_states: int = 6, max_events: int = 5) -> Iterator[tuple[GenConfig, Fsa]]:
    """``count`` reproducible random automata with at most ``max_states`` states."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_states)
        cfg = GenConfig(
            states=n,
            events=rng.randint(1, max_events),
            silent_fraction=rng.choice(SILENT_FRACTIONS),
            density=rng.choice(DENSITIES),
            initial=rng.randint(1, min(2, n)),
            seed=rng.getrandbits(64),
            symbols=rng.randint(1, 3),
        )
        yield cfg, random_fsa(cfg)


def random_spec(fsa: Fsa, seed: int) -> SpecPairs:
    rng = random.Random(seed)
    n = fsa.n_states
    pairs = [(a, b) for a in range(n) for b in range(n)]
    k = rng.randint(0, min(3, len(pairs)))
    return frozenset(rng.sample(pairs, k))


def all_off_diagonal(fsa: Fsa) -> SpecPairs:
    n = fsa.n_states
    return frozenset((a, b) for a in range(n) for b in range(n) if a != b)


@dataclass
class Discrepancy:
    check: str
    detail: str


def _flags(v) -> tuple:
    return (v.holds, v.fired(DIVERGENCE), v.fired(CYCLE))


def crosscheck(fsa: Fsa, spec: SpecPairs) -> list[Discrepancy]:
    """Run every agreement check on one automaton; empty list means all agree."""
    out = []
    obs = check_spd_observer(fsa)
    det = check_spd_detector(fsa)
    cc = check_spd_cc(fsa)
    if not _flags(obs) == _flags(det) == _flags(cc):
        out.append(
            Discrepancy("method-agreement", f"observer={_flags(obs)} detector={_flags(det)} cc={_flags(cc)}")
        )
    naive = naive_spd(fsa)
    if (naive.holds, naive.cond1, naive.cond2) != _flags(det):
        out.append(Discrepancy("oracle-spd", f"naive={naive} detector={_flags(det)}"))
    spdd = check_spdd_observer(fsa, spec)
    naive_d = naive_spdd(fsa, spec)
    if (naive_d.holds, naive_d.cond1, naive_d.cond2) != _flags(spdd):
        out.append(Discrepancy("oracle-spdd", f"naive={naive_d} observer={_flags(spdd)}"))
    bridge = check_spdd_observer(fsa, all_off_diagonal(fsa))
    if bridge.holds != obs.holds:
        out.append(Discrepancy("bridge", f"spdd(all pairs)={bridge.holds} spd={obs.holds}"))
    for name, res in (("prop5", check_prop5(fsa)), ("prop8", check_prop8(fsa))):
        if not res.ok:
            out.append(Discrepancy(name, res.counterexample or ""))
    return out
