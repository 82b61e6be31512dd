"""Pair multiplicities and the H_{5(k-1),k} counting sweep.

With f = k-2 on multiples of k-1 and -1 elsewhere (n = 5(k-1)), an edge is
nonnegative exactly when it holds at least two of the five heavy vertices,
and no edge holds three. So the nonnegative count is
5 p(0, k-1) + 5 p(0, 2(k-1)), where p(a, b) counts edges containing a and b.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .assignments import count_nonnegative, example_assignment
from .cyclic import UniformHypergraph, build_hnk
from .errors import UsageError


@dataclass(frozen=True)
class PairMultiplicity:
    i: int
    j: int
    count: int


def pair_multiplicity(H: UniformHypergraph, i: int, j: int) -> PairMultiplicity:
    """Number of edges containing both i and j (0 when i == j)."""
    i %= H.n
    j %= H.n
    if i == j:
        return PairMultiplicity(i, j, 0)
    c = sum(1 for e in H.iter_edges() if i in e and j in e)
    return PairMultiplicity(i, j, c)


def triple_counts(k: int) -> dict:
    """Count (v, i, j) with i, j in [1, k-1], v >= 0 under the printed and the corrected conditions.

    printed:   i >= v+1, j >= v, i+j >= v+k-1
    corrected: i >= v+1, j >= v, i+j <= v+k-1   (k-1 must sit in the second interval)
    """
    printed = corrected = 0
    for v in range(k):
        for i in range(1, k):
            for j in range(1, k):
                if i >= v + 1 and j >= v:
                    printed += i + j >= v + k - 1
                    corrected += i + j <= v + k - 1
    return {"printed": printed, "corrected": corrected}


def heavy_vertices(k: int) -> list[int]:
    return [t * (k - 1) for t in range(5)]


def max_heavy_per_edge(H: UniformHypergraph, k: int) -> int:
    heavy = set(heavy_vertices(k))
    return max(len(heavy.intersection(e)) for e in H.iter_edges())


@dataclass
class SweepRow:
    k: int
    n: int
    p_adjacent: int            # p(0, k-1)
    p_skip: int                # p(0, 2(k-1))
    formula_total: int         # 5 p(0,k-1) + 5 p(0,2(k-1))
    pair_total: int            # half the sum of p over ordered heavy pairs
    direct_count: int          # count_nonnegative under h5k_mod
    target: int                # k (k-1)^2
    max_heavy: int
    triples_printed: int
    triples_corrected: int

    @property
    def below(self) -> bool:
        return self.direct_count < self.target

    @property
    def consistent(self) -> bool:
        return (self.formula_total == self.pair_total == self.direct_count
                and self.p_skip == self.k - 1 and self.max_heavy <= 2
                and self.triples_corrected == self.p_adjacent)

    def as_dict(self):
        d = dict(self.__dict__)
        d["below"] = self.below
        d["consistent"] = self.consistent
        return d


@dataclass
class SweepReport:
    k_min: int
    k_max: int
    rows: list = field(default_factory=list)

    @property
    def first_below(self) -> int | None:
        return next((r.k for r in self.rows if r.below), None)

    @property
    def consistent(self) -> bool:
        return all(r.consistent for r in self.rows)

    def as_dict(self):
        return {"k_min": self.k_min, "k_max": self.k_max, "first_k_below": self.first_below,
                "consistent": self.consistent, "rows": [r.as_dict() for r in self.rows]}


def special_pair_row(k: int) -> SweepRow:
    if k < 4:
        raise UsageError(f"the sweep starts at k = 4, got {k}")
    n = 5 * (k - 1)
    H = build_hnk(n, k)
    heavy = heavy_vertices(k)
    p1 = pair_multiplicity(H, 0, k - 1).count
    p2 = pair_multiplicity(H, 0, 2 * (k - 1)).count
    # all ordered pairs, halved: the left side of the counting bound
    pair_total = sum(pair_multiplicity(H, a, b).count for a in heavy for b in heavy) // 2
    direct = count_nonnegative(example_assignment("h5k_mod", n, k), H).nonnegative_count
    tc = triple_counts(k)
    return SweepRow(k, n, p1, p2, 5 * p1 + 5 * p2, pair_total, direct, k * (k - 1) ** 2,
                    max_heavy_per_edge(H, k), tc["printed"], tc["corrected"])


def special_pair_sweep(k_max: int = 30, k_min: int = 4, stop_at_first: bool = False) -> SweepReport:
    """Exact nonnegative counts on H_{5(k-1),k} under h5k_mod for k_min..k_max."""
    rep = SweepReport(k_min, k_max)
    for k in range(k_min, k_max + 1):
        rep.rows.append(special_pair_row(k))
        if stop_at_first and rep.rows[-1].below:
            break
    return rep


__all__ = ["PairMultiplicity", "pair_multiplicity", "triple_counts", "heavy_vertices", "SweepRow",
           "SweepReport", "special_pair_row", "special_pair_sweep", "max_heavy_per_edge"]
