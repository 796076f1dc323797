"""Walk through the three small example automata.

S1 is deadlock- and divergence-free and fails by an ambiguous cycle.  S2
has a deadlock and a silent self-loop: it fails only because the system can
sit forever in an ambiguous estimate without producing output, which the
cycle-only legacy checks cannot see.  S3 shows the silent links of the
extended self-composition.

    python3 demos/worked_examples.py
"""

from pathlib import Path

from spdetect import (
    build_epsilon_composition,
    check_assumption1,
    check_spd_cc,
    check_spd_detector,
    check_spd_observer,
    check_spdd_observer,
    legacy_check_spd_detector,
    legacy_check_spdd_observer,
    spec_pairs,
)
from spdetect.fsaio import parse_fsa

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def load(name):
    return parse_fsa((FIXTURES / f"{name}.fsa").read_text()).fsa


def show(fsa, v):
    fired = [c.id for c in v.conditions if c.fired] or ["none"]
    print(f"  {v.method:<16} holds={v.holds!s:<5} fired: {', '.join(fired)}")
    for c in v.conditions:
        w = c.witness
        if c.id == "divergence" and w:
            loop = " ".join(fsa.events[e] for _, e, _ in w.lasso.cycle)
            where = fsa.format_pair(w.content) if v.method == "cc" else fsa.format_set(w.content)
            print(f"    {fsa.states[w.lasso.start]} loops silently on [{loop}] inside {where}")
        elif c.id == "cycle" and w:
            word = "".join(fsa.alphabet[s] for s in w.symbols)
            print(f"    cycle reading {word!r} through {len(w.nodes) - 1} ambiguous node(s)")


for name in ("s1", "s2", "s3"):
    fsa = load(name)
    a1 = check_assumption1(fsa)
    print(f"{name}: deadlock-free={a1.deadlock_free} divergence-free={a1.divergence_free}")
    for run in (check_spd_observer, check_spd_detector, check_spd_cc, legacy_check_spd_detector):
        show(fsa, run(fsa))
    print()

s2, s3 = load("s2"), load("s3")
print("SPDD on S3")
for pair in (("x0", "x2"), ("x1", "x2")):
    v = check_spdd_observer(s3, spec_pairs(s3, [pair]))
    print(f"  spec {pair}: holds={v.holds}")
spec = spec_pairs(s2, [("x1", "x2")])
print("SPDD on S2 with spec (x1, x2)")
print(f"  observer: {check_spdd_observer(s2, spec).holds}  legacy: {legacy_check_spdd_observer(s2, spec).holds}")

cc = build_epsilon_composition(s3)
print("\nsilent links added to the self-composition of S3:")
for u, ev, v in cc.edges:
    if ev.kind == "eps":
        print(f"  {s3.format_pair(cc.nodes[u])} -> {s3.format_pair(cc.nodes[v])}")
