import itertools
import random

import pytest

from mmslab.assignments import Assignment, count_nonnegative, example_assignment
from mmslab.cyclic import UniformHypergraph, build_complete, build_hnk, build_matching, build_tight_cycle
from mmslab.errors import UsageError
from mmslab.lp import check_farkas
from mmslab.oracle import (FAILS, HOLDS, UNKNOWN, feasible_negative_pattern, is_up_closed, min_nonnegative_exact,
                           min_nonnegative_upper, mms_verdict, sorted_witness)


def scipy_feasible(n, N):
    """Float LP reference: is there f with sum f >= 0 and f(e) <= -1 on N?"""
    linprog = pytest.importorskip("scipy.optimize").linprog
    A = [[-1] * n] + [[1 if x in e else 0 for x in range(n)] for e in N]
    b = [0] + [-1] * len(N)
    return linprog([0] * n, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs").status == 0


def brute_min(H):
    edges = list(H.edges)
    m = len(edges)
    for size in range(m, -1, -1):
        if any(scipy_feasible(H.n, N) for N in itertools.combinations(edges, size)):
            return m - size
    raise AssertionError


class TestPattern:
    def test_matching_both_edges(self):
        H = build_matching(2, 2)
        w = feasible_negative_pattern(H, H.edges)
        assert not w.feasible and w.certificate is not None

    def test_matching_one_edge(self):
        H = build_matching(2, 2)
        w = feasible_negative_pattern(H, [(0, 1)])
        f = w.assignment
        assert w.feasible and f.total >= 0 and f[0] + f[1] <= -1
        # the documented witness also works by substitution
        g = Assignment.of([-1, 0, 1, 1])
        assert g.total >= 0 and g[0] + g[1] < 0

    def test_k4_all_edges(self):
        H = build_complete(4, 2)
        assert not feasible_negative_pattern(H, H.edges).feasible

    def test_stray_edge(self):
        with pytest.raises(UsageError):
            feasible_negative_pattern(build_matching(2, 2), [(0, 2)])


class TestExact:
    # n=5 sits below n >= 4k: (2,2,2,-3,-3) leaves only the three positive pairs
    @pytest.mark.parametrize("n,want", [(4, 3), (5, 3), (6, 5), (8, 7), (10, 9)])
    def test_complete_graphs(self, n, want):
        v = min_nonnegative_exact(build_complete(n, 2))
        assert v.exact and v.min_nonnegative == want
        assert v.status == (HOLDS if want >= n - 1 else FAILS)
        assert count_nonnegative(v.witness, build_complete(n, 2)).nonnegative_count == want
        assert v.witness.total >= 0

    @pytest.mark.parametrize("t,k", [(t, k) for t in range(1, 7) for k in range(1, 7) if t * k <= 12])
    def test_matchings(self, t, k):
        H = build_matching(t, k)
        v = min_nonnegative_exact(H)
        assert v.min_nonnegative == 1 and v.status == HOLDS
        assert count_nonnegative(v.witness, H).nonnegative_count == 1

    def test_tight_cycle(self):
        H = build_tight_cycle(10, 3)
        v = min_nonnegative_exact(H)
        assert v.min_nonnegative == 1 and v.status == FAILS and v.delta == 3
        assert count_nonnegative(v.witness, H).nonnegative_count == 1

    @pytest.mark.parametrize("n,lo", [(6, 10), (7, 10), (8, 16)])
    def test_complete_triple_systems(self, n, lo):
        v = min_nonnegative_exact(build_complete(n, 3))
        assert v.exact and v.min_nonnegative == lo

    @pytest.mark.parametrize("seed", range(12))
    def test_random_small_hypergraphs_against_brute_force(self, seed):
        rng = random.Random(seed)
        n, k = rng.randint(4, 7), rng.randint(2, 3)
        pool = list(itertools.combinations(range(n), k))
        H = UniformHypergraph(n, k, rng.sample(pool, min(len(pool), rng.randint(2, 9))))
        v = min_nonnegative_exact(H)
        assert v.exact and v.min_nonnegative == brute_min(H)
        assert count_nonnegative(v.witness, H).nonnegative_count == v.min_nonnegative

    def test_monotone_under_edge_addition(self):
        rng = random.Random(4)
        pool = list(itertools.combinations(range(6), 3))
        rng.shuffle(pool)
        prev = 0
        for m in range(1, 11):
            cur = min_nonnegative_exact(UniformHypergraph(6, 3, pool[:m])).min_nonnegative
            assert cur >= prev
            prev = cur

    def test_budget_exhaustion_gives_bounds(self):
        v = min_nonnegative_exact(build_hnk(12, 4), budget=50)
        assert v.budget_exhausted and not v.exact and v.lower <= v.upper
        assert count_nonnegative(v.witness, build_hnk(12, 4)).nonnegative_count == v.upper

    def test_bad_budget(self):
        with pytest.raises(UsageError):
            min_nonnegative_exact(build_matching(2, 2), budget=0)


class TestUpperAndVerdict:
    def test_star_on_k10_3(self):
        c, f, _ = min_nonnegative_upper(build_complete(10, 3), strategies=("named",))
        assert c <= 36 and f.total >= 0

    def test_h15_4(self):
        H = build_hnk(15, 4)
        named = count_nonnegative(example_assignment("h5k_mod", 15, 4), H).nonnegative_count
        c, f, _ = min_nonnegative_upper(H, strategies=("named",))
        assert c <= named and count_nonnegative(f, H).nonnegative_count == c

    def test_c10_3_upper(self):
        c, f, _ = min_nonnegative_upper(build_tight_cycle(10, 3))
        assert c == 1 and count_nonnegative(f, build_tight_cycle(10, 3)).nonnegative_count == 1

    def test_verdicts(self):
        assert mms_verdict(build_matching(3, 3)).status == HOLDS
        v = mms_verdict(build_tight_cycle(10, 3))
        assert v.status == FAILS and count_nonnegative(v.witness, build_tight_cycle(10, 3)).nonnegative_count < 3

    def test_unknown_when_too_big(self):
        v = mms_verdict(build_hnk(36, 3), effort=100, exact_edge_limit=10)
        assert v.status in (UNKNOWN, FAILS)
        if v.status == UNKNOWN:
            assert v.lower <= v.upper and v.upper >= v.delta

    def test_deterministic(self):
        a = min_nonnegative_upper(build_hnk(12, 3), seed=3)
        b = min_nonnegative_upper(build_hnk(12, 3), seed=3)
        assert a[0] == b[0] and a[1] == b[1]


class TestUpClosed:
    @pytest.mark.parametrize("seed", range(10))
    def test_sorted_assignments(self, seed):
        rng = random.Random(seed)
        f = sorted_witness(Assignment.of([rng.randint(-5, 5) for _ in range(7)]))
        assert is_up_closed(build_complete(7, 3), f)

    def test_witness_of_exact_search(self):
        v = min_nonnegative_exact(build_complete(8, 3))
        assert is_up_closed(build_complete(8, 3), sorted_witness(v.witness))

    def test_unsorted_rejected(self):
        with pytest.raises(UsageError):
            is_up_closed(build_complete(4, 2), Assignment.of([0, 1, 0, 0]))


def test_farkas_certificate_checks():
    H = build_complete(4, 2)
    w = feasible_negative_pattern(H, H.edges)
    A = [[-1] * 4] + [[1 if x in e else 0 for x in range(4)] for e in H.edges]
    assert check_farkas(A, [0] + [-1] * 6, w.certificate)
