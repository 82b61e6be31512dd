"""Exact minima of nonnegative edges on small hypergraphs.

Compares the certified minimum with the threshold delta (the minimum degree)
and prints the witness assignment that attains it. A Fails verdict stops as
soon as a witness beats delta, so its lower bound stays the trivial one.

    python3 demos/oracle_tour.py
"""

from mmslab.assignments import count_nonnegative
from mmslab.cyclic import build_complete, build_hnk, build_matching, build_tight_cycle
from mmslab.oracle import mms_verdict

cases = {
    "K_8^(2)": build_complete(8, 2),
    "K_7^(3)": build_complete(7, 3),
    "M_3,4": build_matching(3, 4),
    "C_10,3": build_tight_cycle(10, 3),
    "H_12,4": build_hnk(12, 4),
}

for name, H in cases.items():
    v = mms_verdict(H)
    line = f"{name:8s} delta={v.delta:3d}  status={v.status:7s}  bounds=[{v.lower}, {v.upper}]"
    if v.witness is not None:
        recount = count_nonnegative(v.witness, H).nonnegative_count
        line += f"  witness recount={recount}"
    print(line)
    if v.witness is not None and H.n <= 10:
        print("          witness:", [str(x) for x in v.witness])
