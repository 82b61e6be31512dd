"""The edge families E(v,i,j), their reflections, the per-vertex unions E(v),
the global slot numbering F^t, the interval-cover audit and the multiplicity
census.

Slots are transcribed exactly as printed and numbered 1..55 by concatenating
the four case lists (12 + 13 + 15 + 15). Each slot is a formal triple
(offset, a, b) meaning e(v + offset, a, b); a slot whose parameter falls
outside [1, k-1] is kept but flagged invalid.

The printed lists do not contain every edge that the cover identities need.
``ERRATA`` holds a reconstruction that makes all five identities go through;
it is opt-in (``errata=True``) and never applied silently.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .cyclic import DoubleIntervalSpec, formal_edge, hnk_index
from .errors import UsageError
from .lp import solve_nonneg_eq

CASE_TAGS = ("ij_ge_k_i_ge_j", "ij_ge_k_j_lt_i", "ij_lt_k_i_even", "ij_lt_k_i_odd")

# Guards as applied. The second printed guard repeats the first case ("j < i"
# is already covered by "i >= j"), so the only reachable reading is i < j.
CASE_GUARDS = {
    "ij_ge_k_i_ge_j": "i+j >= k and i >= j",
    "ij_ge_k_j_lt_i": "i+j >= k and i < j (printed as 'j < i')",
    "ij_lt_k_i_even": "i+j < k and i even",
    "ij_lt_k_i_odd": "i+j < k and i odd",
}

SLOT_BASE = {"ij_ge_k_i_ge_j": 0, "ij_ge_k_j_lt_i": 12, "ij_lt_k_i_even": 25, "ij_lt_k_i_odd": 40}
NUM_SLOTS = 55
ERRATA_SLOT = 56  # extra case-1 slot used only with errata=True


def case_tag(i: int, j: int, k: int) -> str:
    if i + j >= k:
        return "ij_ge_k_i_ge_j" if i >= j else "ij_ge_k_j_lt_i"
    return "ij_lt_k_i_even" if i % 2 == 0 else "ij_lt_k_i_odd"


def _printed(tag: str, i: int, j: int, k: int) -> list[tuple]:
    """The printed list for one case, as (offset, a, b) triples in order."""
    if tag == "ij_ge_k_i_ge_j":
        return [(0, i, j), (k + j, i, i + j - k), (k + i + j, i + j - k, 2 * k - 2 * i),
                (i, j, k - i), (k + i + 2 * j, k - i, 2 * k - i - j), (i, j, 2 * k - i - j),
                (3 * k - j, i, j), (3 * k - j + i, j, k - i), (i, i + j - k, 2 * k - 2 * i),
                (i + j, k - i, 2 * k - i - j), (2 * k, i, j), (2 * k + i, j, k - i)]
    if tag == "ij_ge_k_j_lt_i":
        return [(0, i, j), (k + j, j, i + j - k), (k + 2 * j, i + j - k, 2 * k - 2 * j),
                (i, j, k - i), (k + i + 2 * j, k - j, 2 * k - i - j), (i, j, 2 * k - i - j),
                (3 * k - j, i, j), (3 * k - j + i, j, k - i), (0, j, i + j - k),
                (j, i + j - k, 2 * k - 2 * j), (i + j, k - j, 2 * k - i - j),
                (2 * k, i, j), (2 * k + i, j, k - i)]
    # i/2 for even i and (i-1)/2 for odd i are both i // 2
    h = i // 2
    return [(0, i, j), (k + j, k - h, i + j), (2 * k + j - h, i + j, i), (0, i + j, h),
            (2 * k + i + 2 * j, h, k - h), (i, j + h, k - i - j), (2 * k - j, k - h, i + j),
            (3 * k - j - h, i + j, i), (3 * k + i, h, k - h), (0, k - h, i + j),
            (k - h, i + j, i), (k + i + j, h, k - i - j), (i, j, k - i), (2 * k, i, j),
            (2 * k + i, j, k - i)]


def _errata(tag: str, i: int, j: int, k: int) -> dict:
    """Replacement (or extra) slots, keyed by global slot number."""
    h, h2 = i // 2, i - i // 2
    if tag == "ij_ge_k_i_ge_j":
        return {ERRATA_SLOT: (0, i, i + j - k)}
    if tag == "ij_lt_k_i_even":
        return {30: (2 * k + i + 2 * j, h, k - i - j), 34: (3 * k + i, h, k - i - j)}
    if tag == "ij_lt_k_i_odd":
        return {45: (2 * k + i + 2 * j, h2, k - i - j), 49: (3 * k + i, h2, k - i - j),
                52: (k + i + j, h2, k - i - j)}
    return {}


ERRATA_DESCRIPTION = {
    "ij_ge_k_i_ge_j": "add e(v, i, i+j-k) as slot 56 (needed for the 3k-cover)",
    "ij_lt_k_i_even": "slots 30, 34: last parameter k-i/2 -> k-i-j",
    "ij_lt_k_i_odd": "slots 45, 49: parameters ((i+1)/2, k-i-j); slot 52: first parameter (i+1)/2",
}


@dataclass(frozen=True)
class Slot:
    t: int                 # global slot number
    offset: int
    a: int
    b: int
    spec: DoubleIntervalSpec
    reflected: bool = False
    base: int = 0          # the family's v; reflection is through this vertex

    @property
    def valid(self) -> bool:
        return self.spec.valid

    def edge(self) -> tuple:
        e = self.spec.edge()
        if self.reflected:
            e = reflect_edge(e, self.base, self.spec.n)
        return e


@dataclass
class EdgeFamily:
    v: int
    i: int
    j: int
    k: int
    n: int
    case_tag: str
    guard: str
    slots: list
    errata: bool = False
    reflected: bool = False

    @property
    def valid_edges(self) -> frozenset:
        return frozenset(s.edge() for s in self.slots if s.valid)

    @property
    def invalid_slots(self) -> list:
        return [s for s in self.slots if not s.valid]

    def slot(self, t: int) -> Slot | None:
        return next((s for s in self.slots if s.t == t), None)


def _check(i, j, k, n):
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    if not (1 <= i <= k - 1 and 1 <= j <= k - 1):
        raise UsageError(f"(i, j) = ({i}, {j}) outside [1, {k - 1}]^2")
    if n < 12 * k:
        raise UsageError(f"n={n} < 12k={12 * k}: family spans would wrap into each other")


def slot_triples(i: int, j: int, k: int, errata: bool = False) -> list[tuple]:
    """(t, offset, a, b) for the slots of E(0,i,j), in global order."""
    tag = case_tag(i, j, k)
    base = SLOT_BASE[tag]
    rows = {base + p + 1: tr for p, tr in enumerate(_printed(tag, i, j, k))}
    if errata:
        rows.update(_errata(tag, i, j, k))
    return [(t,) + rows[t] for t in sorted(rows)]


def evij(v: int, i: int, j: int, k: int, n: int, *, errata: bool = False) -> EdgeFamily:
    """E(v,i,j) with every slot kept; ``valid_edges`` drops the degenerate ones."""
    _check(i, j, k, n)
    tag = case_tag(i, j, k)
    slots = [Slot(t, off, a, b, DoubleIntervalSpec((v + off) % n, a, b, k, n), base=v % n)
             for t, off, a, b in slot_triples(i, j, k, errata)]
    return EdgeFamily(v % n, i, j, k, n, tag, CASE_GUARDS[tag], slots, errata)


def reflect_edge(e, v: int, n: int) -> tuple:
    return tuple(sorted((2 * v - x) % n for x in e))


def evij_reflected(v: int, i: int, j: int, k: int, n: int, *, errata: bool = False) -> EdgeFamily:
    """E^-(v,i,j): every edge of E(v,i,j) mirrored through v (x -> 2v - x)."""
    fam = evij(v, i, j, k, n, errata=errata)
    fam.slots = [Slot(s.t, s.offset, s.a, s.b, s.spec, reflected=True, base=s.base) for s in fam.slots]
    fam.reflected = True
    return fam


def e_of_v(v: int, k: int, n: int, *, errata: bool = False) -> frozenset:
    """E(v): valid edges of E(v,i,j) and E^-(v,i,j) over all i, j."""
    out = set()
    for i in range(1, k):
        for j in range(1, k):
            fwd = evij(v, i, j, k, n, errata=errata).valid_edges
            out |= fwd
            out |= {reflect_edge(e, v, n) for e in fwd}
    return frozenset(out)


# -- cover audit ---------------------------------------------------------------

ITEMS = ("i", "ii", "iii", "iv", "v")
VERIFIED, DEGENERATE, FAILED = "Verified", "DegenerateSkipped", "Failed"


def cover_constituents(item: str, i: int, j: int, k: int) -> tuple[list, int, int]:
    """Constituent edges for one item as (offset, a, b), relative to v.

    Returns (constituents, target_length, p_sign). The identity checked is
        sum of constituent indicators + p_sign * 1_P = 1_[0, target_length-1]
    with P = [i, i+j-1]; p_sign is 0 for items (i)-(iii), +1 for (iv) and
    -1 for (v).
    """
    tag = case_tag(i, j, k)
    h, h2 = i // 2, i - i // 2
    pair = [(0, i, j), (i, j, k - i)]
    if item == "i":
        return pair, 2 * k, 0
    if item == "iii":
        return pair + [(2 * k, i, j), (2 * k + i, j, k - i)], 4 * k, 0
    if tag == "ij_ge_k_i_ge_j":
        ii = [(0, i, i + j - k), (i, i + j - k, 2 * k - 2 * i), (i + j, k - i, 2 * k - i - j)]
        iv = [(0, i, j), (k + j, i, i + j - k), (k + i + j, i + j - k, 2 * k - 2 * i),
              (k + i + 2 * j, k - i, 2 * k - i - j)]
    elif tag == "ij_ge_k_j_lt_i":
        ii = [(0, j, i + j - k), (j, i + j - k, 2 * k - 2 * j), (i + j, k - j, 2 * k - i - j)]
        iv = [(0, i, j), (k + j, j, i + j - k), (k + 2 * j, i + j - k, 2 * k - 2 * j),
              (k + i + 2 * j, k - j, 2 * k - i - j)]
    else:
        ii = [(0, k - h, i + j), (k - h, i + j, i), (k + i + j, h2, k - i - j)]
        iv = [(0, i, j), (k + j, k - h, i + j), (2 * k + j - h, i + j, i),
              (2 * k + i + 2 * j, h2, k - i - j)]
    if item == "ii":
        return ii, 3 * k, 0
    if item == "iv":
        return iv, 4 * k + j, 1
    if item == "v":
        if tag in ("ij_ge_k_i_ge_j", "ij_ge_k_j_lt_i"):
            v = [(0, i, j), (i, j, k - i), (i, j, 2 * k - i - j), (3 * k - j, i, j),
                 (3 * k - j + i, j, k - i)]
        else:
            v = [(0, i + j, h), (i, j + h, k - i - j), (2 * k - j, k - h, i + j),
                 (3 * k - j - h, i + j, i), (3 * k + i, h2, k - i - j)]
        return v, 5 * k - j, -1
    raise UsageError(f"unknown item {item!r}")


def _fmt(c) -> str:
    off, a, b = c
    return f"e(v+{off},{a},{b})" if off else f"e(v,{a},{b})"


@dataclass
class CoverVerdict:
    i: int
    j: int
    item: str
    verdict: str
    case_tag: str
    detail: str = ""
    missing: list = field(default_factory=list)
    degenerate_field: str | None = None
    union: str = ""
    cone: bool | None = None   # whether any nonnegative combination of the family works

    def as_dict(self):
        d = {"i": self.i, "j": self.j, "item": self.item, "verdict": self.verdict,
             "case_tag": self.case_tag}
        for key in ("detail", "missing", "degenerate_field", "union", "cone"):
            val = getattr(self, key)
            if val not in ("", [], None):
                d[key] = val
        return d


@dataclass
class CoverAuditReport:
    k: int
    errata: bool
    verdicts: list

    def by_item(self, item: str) -> list:
        return [r for r in self.verdicts if r.item == item]

    def counts(self) -> dict:
        out = {}
        for item in ITEMS:
            c = Counter(r.verdict for r in self.by_item(item))
            out[item] = {VERIFIED: c[VERIFIED], DEGENERATE: c[DEGENERATE], FAILED: c[FAILED]}
        return out

    def failures(self) -> list:
        return [r for r in self.verdicts if r.verdict == FAILED]

    def degenerate(self) -> list:
        return [r for r in self.verdicts if r.verdict == DEGENERATE]

    @property
    def ok(self) -> bool:
        return not self.failures()

    def as_dict(self) -> dict:
        return {"k": self.k, "errata": self.errata, "counts": self.counts(),
                "failures": [r.as_dict() for r in self.failures()],
                "degenerate": [r.as_dict() for r in self.degenerate()]}


def _indicator(edges, span):
    vec = [0] * span
    for e in edges:
        for x in e:
            vec[x] += 1
    return vec


def cone_feasible(family_triples, k: int, target_len: int, p_sign: int, i: int, j: int) -> bool:
    """Is 1_target (+/- 1_P) a nonnegative combination of the family's edges?

    Exact rational LP. This is the strongest form of the claim: no choice of
    constituents from the family can give the implication if it returns False.
    """
    span = 6 * k
    cols = [_indicator([formal_edge(off, a, b, k, 10 * span)], span) for off, a, b in family_triples]
    if p_sign:
        # (iv) target = sum + mu*P, (v) target = sum - mu*P with mu >= 0
        cols.append([p_sign * (1 if i <= x < i + j else 0) for x in range(span)])
    rhs = [1 if x < target_len else 0 for x in range(span)]
    A = [[col[r] for col in cols] for r in range(span)]
    return solve_nonneg_eq(A, rhs) is not None


def audit_pair(i: int, j: int, k: int, *, errata: bool = False, cone_check: bool = False) -> list:
    tag = case_tag(i, j, k)
    triples = [(off, a, b) for _, off, a, b in slot_triples(i, j, k, errata)]
    valid_triples = [tr for tr in triples if 1 <= tr[1] <= k - 1 and 1 <= tr[2] <= k - 1]
    members = {formal_edge(off, a, b, k, 12 * k) for off, a, b in valid_triples}
    out = []
    for item in ITEMS:
        cons, length, p_sign = cover_constituents(item, i, j, k)
        union = " U ".join(_fmt(c) for c in cons)
        if p_sign > 0:
            union += f" U [v+{i}, v+{i + j - 1}]"
        target = f"[v, v+{length - 1}]"
        bad = next(((c, f) for c in cons for f, val in (("a", c[1]), ("b", c[2])) if not 1 <= val <= k - 1), None)
        if bad is not None:
            c, f = bad
            out.append(CoverVerdict(i, j, item, DEGENERATE, tag,
                                    detail=f"{_fmt(c)} has {f}={c[1] if f == 'a' else c[2]} outside [1,{k - 1}]",
                                    degenerate_field=f, union=union))
            continue
        span = 6 * k
        edges = [formal_edge(off, a, b, k, 12 * k) for off, a, b in cons]
        vec = _indicator(edges, span)
        for x in range(i, i + j):
            vec[x] += p_sign
        identity = vec == [1 if x < length else 0 for x in range(span)]
        missing = [_fmt(c) for c, e in zip(cons, edges) if e not in members]
        cone = cone_feasible(valid_triples, k, length, p_sign, i, j) if cone_check else None
        if identity and not missing:
            out.append(CoverVerdict(i, j, item, VERIFIED, tag, union=f"{union} = {target}", cone=cone))
        else:
            why = [] if identity else [f"union is not {target}"]
            if missing:
                why.append("not in family: " + ", ".join(missing))
            out.append(CoverVerdict(i, j, item, FAILED, tag, detail="; ".join(why), missing=missing,
                                    union=f"{union} vs {target}", cone=cone))
    return out


def audit_interval_covers(k: int, *, errata: bool = False, cone_check: bool = False) -> CoverAuditReport:
    """Check the five cover identities for every (i, j) in [1, k-1]^2."""
    if k < 3:
        raise UsageError(f"cover audit needs k >= 3, got {k}")
    verdicts = []
    for i in range(1, k):
        for j in range(1, k):
            verdicts.extend(audit_pair(i, j, k, errata=errata, cone_check=cone_check))
    return CoverAuditReport(k, errata, verdicts)


# -- multiplicity census ------------------------------------------------------------

@dataclass
class MultiplicityReport:
    n: int
    k: int
    errata: bool
    max_multiplicity: int
    max_forward_multiplicity: int
    histogram: dict
    per_slot_disjointness: dict     # (t, "fwd"/"rev") -> bool
    families: int
    hnk_member_violations: int

    @property
    def all_disjoint(self) -> bool:
        return all(self.per_slot_disjointness.values())

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "errata": self.errata,
                "max_multiplicity": self.max_multiplicity,
                "max_forward_multiplicity": self.max_forward_multiplicity,
                "histogram": {str(m): c for m, c in sorted(self.histogram.items())},
                "all_slots_disjoint": self.all_disjoint,
                "non_disjoint_slots": [f"{t}{'' if d == 'fwd' else '-'}"
                                       for (t, d), ok in sorted(self.per_slot_disjointness.items()) if not ok],
                "families": self.families,
                "non_hnk_slot_edges": self.hnk_member_violations}


def _census_chunk(args):
    vs, k, n, errata = args
    both, fwd_only = Counter(), Counter()
    slot_seen = {}
    for v in vs:
        for i in range(1, k):
            for j in range(1, k):
                fam = evij(v, i, j, k, n, errata=errata)
                fwd = set()
                rev = set()
                for s in fam.slots:
                    if not s.valid:
                        continue
                    e = s.edge()
                    r = reflect_edge(e, v, n)
                    fwd.add(e)
                    rev.add(r)
                    slot_seen.setdefault((s.t, "fwd"), Counter())[e] += 1
                    slot_seen.setdefault((s.t, "rev"), Counter())[r] += 1
                fwd_only.update(fwd)
                both.update(fwd | rev)
    return both, fwd_only, slot_seen


def multiplicity_census(n: int, k: int, *, errata: bool = False, workers: int = 1) -> MultiplicityReport:
    """Count, for every edge, how many families E(v,i,j) U E^-(v,i,j) contain it."""
    if n < 12 * k:
        raise UsageError(f"census needs n >= 12k (got n={n}, k={k})")
    workers = max(1, int(workers))
    chunks = [(list(range(w, n, workers)), k, n, errata) for w in range(workers)]
    if workers == 1:
        parts = [_census_chunk(chunks[0])]
    else:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_census_chunk, chunks))
    both, fwd_only, slots = Counter(), Counter(), {}
    for b, f, s in parts:
        both.update(b)
        fwd_only.update(f)
        for key, cnt in s.items():
            slots.setdefault(key, Counter()).update(cnt)
    index = hnk_index(n, k)
    hist = Counter(both.values())
    disjoint = {key: max(cnt.values()) <= 1 for key, cnt in slots.items()}
    return MultiplicityReport(n, k, errata, max(both.values(), default=0), max(fwd_only.values(), default=0),
                              dict(hist), disjoint, n * (k - 1) ** 2,
                              sum(1 for e in both if e not in index))


__all__ = ["CASE_TAGS", "CASE_GUARDS", "ERRATA_DESCRIPTION", "EdgeFamily", "Slot", "case_tag", "slot_triples",
           "evij", "evij_reflected", "e_of_v", "reflect_edge", "cover_constituents", "audit_pair",
           "audit_interval_covers", "cone_feasible", "CoverAuditReport", "CoverVerdict",
           "MultiplicityReport", "multiplicity_census", "ITEMS", "VERIFIED", "DEGENERATE", "FAILED"]
