"""Walk through the interval-cover audit for one k.

Shows which (i, j, item) entries fail on the transcribed slot lists, what the
missing positions look like, and that the reconstructed lists close every gap.

    python3 demos/cover_audit_walkthrough.py [k]
"""

import sys

from mmslab.families import audit_interval_covers, audit_pair, slot_triples

k = int(sys.argv[1]) if len(sys.argv) > 1 else 5

rep = audit_interval_covers(k)
print(f"k = {k}: per-item verdict counts on the transcribed lists")
for item, c in rep.counts().items():
    print(f"  ({item})  {c}")

fails = rep.failures()
print(f"\n{len(fails)} failures; the first few:")
for r in fails[:5]:
    print(f"  i={r.i} j={r.j} item ({r.item}) case {r.case_tag}: missing {r.missing[:6]}")

if fails:
    r = fails[0]
    print(f"\ncone check for i={r.i}, j={r.j} (can any nonnegative mix of the family work?)")
    for v in audit_pair(r.i, r.j, k, cone_check=True):
        if v.item == r.item:
            print(f"  item ({v.item}): cone feasible = {v.cone}")
    before, after = slot_triples(r.i, r.j, k), slot_triples(r.i, r.j, k, errata=True)
    for a, b in zip(before, after):
        if a != b:
            print(f"  slot {a[0]}: {a[1:]} -> {b[1:]}")
    if len(after) > len(before):
        print(f"  added slots: {after[len(before):]}")

print(f"\nreconstructed lists verify everything: {audit_interval_covers(k, errata=True).ok}")
