"""The H_{5(k-1),k} construction: where the count drops below k(k-1)^2.

The nonnegative count equals 5*C(k+1,3), so it crosses k(k-1)^2 exactly when
5(k+1) < 6(k-1). The sweep confirms this by direct counting.

    python3 demos/pair_sweep.py [k_max]
"""

import sys

from mmslab.counterexample import special_pair_sweep

k_max = int(sys.argv[1]) if len(sys.argv) > 1 else 16
rep = special_pair_sweep(k_max, 4)
print(f"{'k':>3} {'count':>7} {'k(k-1)^2':>9}  below")
for r in rep.rows:
    print(f"{r.k:>3} {r.direct_count:>7} {r.target:>9}  {'yes' if r.below else ''}")
print(f"\nall three counting paths agree: {rep.consistent}; first k below: {rep.first_below}")
