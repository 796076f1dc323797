"""Cross-check every method against the enumerative oracles on random automata.

    python3 demos/fuzz_campaign.py [count] [seed]
"""

import sys
from collections import Counter

from spdetect import check_spd_detector
from spdetect.crosscheck import corpus, crosscheck, random_spec

count = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

verdicts = Counter()
problems = Counter()
for i, (cfg, fsa) in enumerate(corpus(count, seed)):
    v = check_spd_detector(fsa)
    key = "holds" if v.holds else "+".join(c.id for c in v.conditions if c.fired)
    verdicts[key, cfg.silent_fraction] += 1
    for d in crosscheck(fsa, random_spec(fsa, seed + i)):
        problems[d.check] += 1
        if problems[d.check] == 1:
            print(f"case {i} ({d.check}): {d.detail}")

print(f"{count} automata, seed {seed}")
for (key, frac), n in sorted(verdicts.items(), key=lambda kv: (kv[0][1], kv[0][0])):
    print(f"  silent fraction {frac:.1f}  {key:<18} {n}")
print("discrepancies:", dict(problems) or "none")
