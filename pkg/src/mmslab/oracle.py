"""Minimum number of nonnegative edges over assignments with nonnegative total.

The core question is linear: given a set N of edges, is there a rational f with
sum(f) >= 0 and f(e) < 0 for every e in N? The system is homogeneous, so the
strict inequalities may be replaced by f(e) <= -1 (scale any solution up).
The minimum of e^+_f(H) is |E(H)| minus the largest feasible N.

Three entry points:
  * ``min_nonnegative_exact``: branch and bound over N (general H) or over
    down-sets of the dominance order (complete hypergraphs).
  * ``min_nonnegative_upper``: a deterministic witness portfolio.
  * ``mms_verdict``: combines both into Holds / Fails / Unknown.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .assignments import Assignment, count_nonnegative, example_assignment, fmt_fraction
from .cyclic import CompleteHypergraph, UniformHypergraph, degree_profile
from .errors import UsageError
from .lp import check_farkas, solve_leq

HOLDS, FAILS, UNKNOWN = "Holds", "Fails", "Unknown"


@dataclass
class FeasibilityWitness:
    feasible: bool
    assignment: Assignment | None = None
    certificate: list | None = None   # Farkas multipliers when infeasible


def _pattern_system(n: int, N, extra_rows=()):
    """Rows of A f <= b for: -sum(f) <= 0, f(e) <= -1 (e in N), plus extra rows."""
    A = [[-1] * n]
    b = [0]
    for e in N:
        row = [0] * n
        for x in e:
            row[x] += 1
        A.append(row)
        b.append(-1)
    for row, rhs in extra_rows:
        A.append(list(row))
        b.append(rhs)
    return A, b


def feasible_negative_pattern(H: UniformHypergraph, N) -> FeasibilityWitness:
    """Decide whether every edge of N can be negative while sum(f) >= 0."""
    N = [tuple(e) for e in N]
    for e in N:
        if e not in H:
            raise UsageError(f"{e} is not an edge of {H.label}")
    A, b = _pattern_system(H.n, N)
    res = solve_leq(A, b)
    if res.feasible:
        return FeasibilityWitness(True, Assignment(tuple(res.point)))
    assert check_farkas(A, b, res.certificate)
    return FeasibilityWitness(False, None, res.certificate)


@dataclass
class MmsVerdict:
    status: str
    lower: int
    upper: int
    delta: int
    witness: Assignment | None = None
    exact: bool = False
    nodes: int = 0
    budget_exhausted: bool = False
    strategy: str = ""
    notes: list = field(default_factory=list)

    @property
    def min_nonnegative(self) -> int | None:
        return self.lower if self.lower == self.upper else None

    def as_dict(self) -> dict:
        d = {"status": self.status, "delta": self.delta, "exact": self.exact,
             "min_nonnegative": self.min_nonnegative if self.exact else [self.lower, self.upper],
             "nodes": self.nodes, "budget_exhausted": self.budget_exhausted, "strategy": self.strategy}
        if self.witness is not None:
            d["witness"] = [fmt_fraction(x) for x in self.witness]
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def _status(lower, upper, delta):
    if upper < delta:
        return FAILS
    if lower >= delta:
        return HOLDS
    return UNKNOWN


# -- general branch and bound ------------------------------------------------------

def _overlap_order(edges) -> list[int]:
    """Greedy order: next edge shares the most vertices with those already placed."""
    m = len(edges)
    sets = [set(e) for e in edges]
    weight = [0] * m
    order, left = [], set(range(m))
    while left:
        nxt = max(left, key=lambda t: (weight[t], -t))
        order.append(nxt)
        left.discard(nxt)
        for t in left:
            weight[t] += len(sets[t] & sets[nxt])
    return order


def _exact_general(H: UniformHypergraph, budget: int):
    edges = list(H.edges)
    m, n = len(edges), H.n

    def feasible(N):
        A, b = _pattern_system(n, [edges[t] for t in N])
        res = solve_leq(A, b)
        return Assignment(tuple(res.point)) if res.feasible else None

    nodes = 1
    everything = feasible(range(m))
    if everything is not None:
        return 0, 0, everything, nodes, False
    order = _overlap_order(edges)
    best_size, best_f = 0, Assignment((0,) * n)
    # with edge transitivity some optimum leaves the first edge nonnegative
    first = 1 if H.edge_transitive else 0
    stack = [(first, ())]
    exhausted = False
    while stack:
        pos, chosen = stack.pop()
        if len(chosen) + (m - pos) <= best_size:
            continue
        if pos == m:
            continue
        if nodes >= budget:
            stack.append((pos, chosen))
            exhausted = True
            break
        nodes += 1
        cand = chosen + (order[pos],)
        f = feasible(cand)
        # exclude branch goes underneath so the include branch is explored first
        stack.append((pos + 1, chosen))
        if f is not None:
            if len(cand) > best_size:
                best_size, best_f = len(cand), f
            stack.append((pos + 1, cand))
    upper = m - best_size
    if exhausted:
        frontier = max(len(c) + (m - p) for p, c in stack)
        lower = m - max(best_size, min(frontier, m - 1))
    else:
        lower = upper
    return lower, upper, best_f, nodes, exhausted


# -- complete hypergraphs: sorted assignments and down-sets -------------------------

def _dominance_cover_down(e, n):
    """k-sets obtained from e by raising one index by one (one step down in value)."""
    out = []
    k = len(e)
    for t in range(k):
        nxt = e[t] + 1
        limit = e[t + 1] if t + 1 < k else n
        if nxt < limit:
            out.append(e[:t] + (nxt,) + e[t + 1:])
    return out


def _exact_complete(n: int, k: int, budget: int):
    """Largest down-set D of k-sets (sorted f descending) that can be all negative.

    With f_0 >= f_1 >= ... the edge sums decrease when an index is raised, so
    the negative edges form a down-set in this order and it suffices to force
    the maximal elements of D. Down-sets are generated once each by deciding
    elements along a linear extension starting from the bottom.
    """
    elems = sorted(itertools.combinations(range(n), k), key=lambda e: (-sum(e), tuple(-x for x in e)))
    idx = {e: t for t, e in enumerate(elems)}
    below = [[idx[d] for d in _dominance_cover_down(e, n)] for e in elems]
    above = [[] for _ in elems]
    for t, bs in enumerate(below):
        for s in bs:
            above[s].append(t)
    m = len(elems)
    sorted_rows = []
    for x in range(n - 1):
        row = [0] * n
        row[x + 1], row[x] = 1, -1     # f_{x+1} - f_x <= 0
        sorted_rows.append((row, 0))

    def feasible(D):
        Dset = set(D)
        tops = [elems[t] for t in D if not any(a in Dset for a in above[t])]
        A, b = _pattern_system(n, tops, sorted_rows)
        res = solve_leq(A, b)
        return Assignment(tuple(res.point)) if res.feasible else None

    nodes = 1
    if feasible(range(m)) is not None:
        return 0, 0, feasible(range(m)), nodes, False
    best_size, best_f = 0, Assignment((0,) * n)
    # state: position in linear extension, included tuple, excluded set
    stack = [(0, (), frozenset())]
    exhausted = False
    while stack:
        pos, D, out = stack.pop()
        while pos < m and pos in out:
            pos += 1
        free = m - pos - sum(1 for t in out if t >= pos)
        if len(D) + free <= best_size or pos == m:
            continue
        if nodes >= budget:
            stack.append((pos, D, out))
            exhausted = True
            break
        Dset = set(D)
        if not all(b in Dset for b in below[pos]):
            # cannot include: its lower covers are missing
            stack.append((pos + 1, D, out))
            continue
        nodes += 1
        cand = D + (pos,)
        f = feasible(cand)
        # excluding pos excludes everything above it
        closure, todo = set(out), [pos]
        while todo:
            t = todo.pop()
            if t not in closure:
                closure.add(t)
                todo.extend(above[t])
        stack.append((pos + 1, D, frozenset(closure)))
        if f is not None:
            if len(cand) > best_size:
                best_size, best_f = len(cand), f
            stack.append((pos + 1, cand, out))
    upper = m - best_size
    if exhausted:
        frontier = max(len(D) + m - p - sum(1 for t in o if t >= p) for p, D, o in stack)
        lower = m - max(best_size, min(frontier, m - 1))
    else:
        lower = upper
    return lower, upper, best_f, nodes, exhausted


def min_nonnegative_exact(H: UniformHypergraph, budget: int = 200_000) -> MmsVerdict:
    """Exact min of e^+_f(H) over sum(f) >= 0, or bounds when the budget runs out.

    The witness is re-counted exactly; the reported upper bound is that count.
    """
    if budget <= 0:
        raise UsageError("budget must be positive")
    delta = degree_profile(H).min_degree
    if isinstance(H, CompleteHypergraph):
        lower, upper, f, nodes, exhausted = _exact_complete(H.n, H.k, budget)
        strategy = "complete-downsets"
    else:
        lower, upper, f, nodes, exhausted = _exact_general(H, budget)
        strategy = "branch-and-bound"
    counted = count_nonnegative(f, H).nonnegative_count
    if counted > upper:
        raise AssertionError(f"witness gives {counted} nonnegative edges, search claimed {upper}")
    upper = counted
    lower = min(lower, upper)
    return MmsVerdict(_status(lower, upper, delta), lower, upper, delta, f, not exhausted,
                      nodes, exhausted, strategy)


# -- witness portfolio ----------------------------------------------------------------

def _count_int(vals: np.ndarray, arr: np.ndarray) -> int:
    return int(np.count_nonzero(vals[arr].sum(axis=1) >= 0))


def _named_candidates(H: UniformHypergraph):
    n, k = H.n, H.k
    for kind in ("star", "three_heavy", "tight_cycle_k3", "h5k_mod"):
        try:
            if kind == "tight_cycle_k3" and H.label != "tight_cycle":
                continue
            if kind == "h5k_mod" and H.label != "hnk":
                continue
            yield kind, example_assignment(kind, n, k)
        except UsageError:
            continue


def _support_sets(n: int, s: int, rng, cap: int = 400):
    if comb(n, s) <= cap:
        yield from itertools.combinations(range(n), s)
        return
    yield tuple(range(s))
    yield tuple(t * (n // s) for t in range(s))
    for _ in range(cap):
        yield tuple(sorted(rng.choice(n, size=s, replace=False).tolist()))


def min_nonnegative_upper(H: UniformHypergraph, strategies=("named", "few_large", "local"),
                          seed: int = 0, iterations: int = 2000) -> tuple[int, Assignment, str]:
    """Smallest e^+ found by a deterministic portfolio; always >= the true minimum."""
    rng = np.random.default_rng(seed)
    n, k = H.n, H.k
    arr = H.edge_array() if not isinstance(H, CompleteHypergraph) else np.array(H.edges, dtype=np.int64)
    best = (len(arr) + 1, None, "")

    def consider(vals, tag):
        nonlocal best
        if vals.sum() < 0:
            return
        c = _count_int(vals, arr)
        if c < best[0]:
            best = (c, vals.copy(), tag)

    if "named" in strategies:
        for kind, f in _named_candidates(H):
            ints, _ = f.integer_scaling()
            consider(np.array(ints, dtype=np.int64), kind)
    if "few_large" in strategies:
        for s in range(1, min(k, n - 1) + 1):
            for sup in _support_sets(n, s, rng):
                sup = list(sup)
                # s vertices at -(n - s), the rest at s: total zero
                v = np.full(n, s, dtype=np.int64)
                v[sup] = -(n - s)
                consider(v, f"few_large_negative(s={s})")
                v = np.full(n, -s, dtype=np.int64)
                v[sup] = n - s
                consider(v, f"few_large_positive(s={s})")
    if best[1] is None:
        consider(np.zeros(n, dtype=np.int64), "zero")
    if "local" in strategies:
        cur = best[1].copy() * 4
        cur_c = _count_int(cur, arr)
        scale = max(1, int(np.abs(cur).max()))
        for _ in range(iterations):
            a, b = rng.choice(n, size=2, replace=False)
            step = int(rng.integers(1, scale + 1))
            cand = cur.copy()
            cand[a] += step
            cand[b] -= step
            c = _count_int(cand, arr)
            if c <= cur_c:
                cur, cur_c = cand, c
                if c < best[0]:
                    best = (c, cand.copy(), "local_search")
    count, vals, tag = best
    return count, Assignment(tuple(int(x) for x in vals)), tag


def mms_verdict(H: UniformHypergraph, effort: int = 20_000, seed: int = 0,
                exact_edge_limit: int = 64) -> MmsVerdict:
    """Fails on a witness below delta, Holds on an exact min >= delta, else Unknown."""
    delta = degree_profile(H).min_degree
    upper, witness, tag = min_nonnegative_upper(H, seed=seed)
    # on a regular H the edge sums add up to d * sum(f) >= 0, so some edge is nonnegative
    floor = 1 if H.num_edges and degree_profile(H).regular else 0
    if upper < delta:
        lower = min(floor, upper)
        return MmsVerdict(FAILS, lower, upper, delta, witness, lower == upper, 0, False, f"witness:{tag}")
    # the complete-hypergraph search works on down-sets and is budget-bounded, so it always runs
    if isinstance(H, CompleteHypergraph) or H.num_edges <= exact_edge_limit:
        v = min_nonnegative_exact(H, budget=effort)
        if v.upper > upper:
            v.upper, v.witness = upper, witness
            v.lower = min(v.lower, upper)
        v.status = _status(v.lower, v.upper, delta)
        return v
    return MmsVerdict(UNKNOWN, min(floor, upper), upper, delta, witness, False, 0, False,
                      f"witness:{tag}", ["too many edges for the exact search"])


def is_up_closed(H: CompleteHypergraph, f: Assignment) -> bool:
    """For sorted (descending) f, the nonnegative k-sets are closed under lowering an index."""
    vals = list(f.values)
    if any(vals[t] < vals[t + 1] for t in range(len(vals) - 1)):
        raise UsageError("assignment is not sorted in descending order")
    nonneg = {e for e in H.iter_edges() if sum(vals[x] for x in e) >= 0}
    for e in nonneg:
        for t in range(len(e)):
            lo = e[t - 1] + 1 if t else 0
            if e[t] > lo:
                up = e[:t] + (e[t] - 1,) + e[t + 1:]
                if up not in nonneg:
                    return False
    return True


def sorted_witness(f: Assignment) -> Assignment:
    return Assignment(tuple(sorted(f.values, reverse=True)))


__all__ = ["FeasibilityWitness", "MmsVerdict", "feasible_negative_pattern", "min_nonnegative_exact",
           "min_nonnegative_upper", "mms_verdict", "is_up_closed", "sorted_witness", "HOLDS", "FAILS",
           "UNKNOWN"]
