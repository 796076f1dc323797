"""Observer versus detector versus self-composition on a growing family.

Every state is initial; ``a`` rotates the states, ``b`` drops ``x0`` and
``c`` copies ``x0`` into ``x1``.  Every nonempty subset shows up as an
estimate, so the observer has 2^n - 1 nodes while the other two stay
polynomial.  All three agree on the verdict.

    python3 demos/compare_methods.py [max_n]
"""

import sys
import time

from spdetect import Fsa, check_spd_cc, check_spd_detector, check_spd_observer


def family(n):
    states = [f"x{i}" for i in range(n)]
    trans = [(f"x{i}", "r", f"x{(i + 1) % n}") for i in range(n)]
    trans += [(f"x{i}", "k", f"x{i}") for i in range(1, n)]
    trans += [(f"x{i}", "d", f"x{i}") for i in range(n)] + [("x0", "d", "x1")]
    return Fsa.from_names(states, {"r": "a", "k": "b", "d": "c"}, states, trans)


def timed(run, fsa):
    start = time.perf_counter()
    v = run(fsa)
    return v, time.perf_counter() - start


top = int(sys.argv[1]) if len(sys.argv) > 1 else 12
print(f"{'n':>3} {'observer':>16} {'detector':>16} {'composition':>16}  verdict")
for n in range(3, top + 1):
    fsa = family(n)
    row = [timed(run, fsa) for run in (check_spd_observer, check_spd_detector, check_spd_cc)]
    cells = " ".join(f"{v.stats['nodes']:>7} {t * 1000:>6.1f}ms" for v, t in row)
    verdicts = {v.holds for v, _ in row}
    print(f"{n:>3} {cells}  {verdicts.pop() if len(verdicts) == 1 else 'DISAGREE'}")
