import itertools
import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from mmslab.cyclic import (ClockwiseInterval, CyclicIndex, build, build_complete, build_hnk,
                           build_matching, build_tight_cycle, degree_profile, double_interval_edge,
                           dumps, formal_edge, from_document, interval, loads)
from mmslab.errors import InvalidSpecError, UsageError


def runs_and_gaps(S, n):
    """Cyclic maximal runs of S and the gaps between them (independent of formal_edge)."""
    S = set(S)
    starts = [x for x in S if (x - 1) % n not in S]
    runs, gaps = [], []
    for s in sorted(starts):
        L = 0
        while (s + L) % n in S:
            L += 1
        g = 0
        while (s + L + g) % n not in S:
            g += 1
        runs.append(L)
        gaps.append(g)
    return runs, gaps


def is_double_interval(S, n, k):
    runs, gaps = runs_and_gaps(S, n)
    return len(runs) == 2 and min(gaps) <= k - 1


class TestInterval:
    def test_wraps(self):
        assert list(interval(18, 2, 20)) == [18, 19, 0, 1, 2]

    def test_singleton(self):
        assert list(interval(5, 5, 20)) == [5]

    def test_full_cycle(self):
        assert set(interval(0, 19, 20)) == set(range(20))
        assert len(interval(0, 19, 20)) == 20

    def test_mismatched_moduli(self):
        with pytest.raises(UsageError):
            interval(CyclicIndex(1, 5), CyclicIndex(2, 7))

    def test_cyclic_index_arithmetic(self):
        a = CyclicIndex(18, 20)
        assert (a + 5).value == 3
        assert (a - 19).value == 19
        assert interval(a, CyclicIndex(1, 20)).length == 4

    def test_empty_interval(self):
        I = ClockwiseInterval(3, 0, 10)
        assert list(I) == [] and 3 not in I
        with pytest.raises(UsageError):
            I.end

    @given(st.integers(2, 40), st.data())
    def test_split_union(self, n, data):
        a = data.draw(st.integers(0, n - 1))
        l1 = data.draw(st.integers(1, n - 1))
        l2 = data.draw(st.integers(1, n - l1))
        b, c = (a + l1 - 1) % n, (a + l1 + l2 - 1) % n
        left, right = set(interval(a, b, n)), set(interval(b + 1, c, n))
        assert not left & right
        assert left | right == set(interval(a, c, n)) or l1 + l2 == n and left | right == set(range(n))


class TestDoubleInterval:
    def test_examples(self):
        assert double_interval_edge(0, 2, 1, 3, 20) == (0, 1, 3)
        assert double_interval_edge(19, 1, 2, 3, 20) == (2, 3, 19)
        assert double_interval_edge(0, 4, 2, 5, 30) == (0, 1, 2, 3, 6)

    @pytest.mark.parametrize("i,j,field", [(0, 1, "i"), (3, 1, "i"), (1, 0, "j"), (1, 3, "j")])
    def test_invalid(self, i, j, field):
        with pytest.raises(InvalidSpecError) as exc:
            double_interval_edge(0, i, j, 3, 20)
        assert exc.value.field == field

    def test_small_n_refused(self):
        with pytest.raises(InvalidSpecError) as exc:
            double_interval_edge(0, 1, 1, 3, 8)
        assert exc.value.field == "n"

    def test_degenerate_formal_edge_is_interval(self):
        assert formal_edge(2, 0, 1, 3, 20) == (3, 4, 5)


class TestHnk:
    @pytest.mark.parametrize("n,k,edges,deg", [(20, 3, 80, 12), (15, 4, 135, 36), (9, 3, 36, 12)])
    def test_counts(self, n, k, edges, deg):
        H = build_hnk(n, k)
        assert H.num_edges == edges
        prof = degree_profile(H)
        assert prof.regular and prof.min_degree == deg

    @pytest.mark.parametrize("n,k", [(9, 3), (10, 3), (12, 4), (15, 4), (15, 5)])
    def test_matches_brute_force_characterisation(self, n, k):
        brute = {S for S in itertools.combinations(range(n), k) if is_double_interval(S, n, k)}
        assert set(build_hnk(n, k).edges) == brute

    def test_refuses_small_n(self):
        with pytest.raises(UsageError):
            build_hnk(8, 3)

    @pytest.mark.parametrize("n,k", [(12, 3), (21, 4)])
    def test_rotation_invariant(self, n, k):
        H = build_hnk(n, k)
        for c in range(n):
            assert set(H.rotated(c).edges) == set(H.edges)

    def test_injective(self):
        for k in range(2, 7):
            n = 3 * k
            seen = [formal_edge(v, i, j, k, n) for v in range(n) for i in range(1, k) for j in range(1, k)]
            assert len(seen) == len(set(seen))


class TestOtherConstructions:
    def test_complete(self):
        assert build_complete(4, 2).num_edges == 6
        assert set(degree_profile(build_complete(4, 2)).degrees) == {3}
        assert build_complete(10, 3).num_edges == 120
        assert degree_profile(build_complete(10, 3)).min_degree == comb(9, 2) == 36
        assert list(build_complete(5, 5).iter_edges()) == [(0, 1, 2, 3, 4)]
        with pytest.raises(UsageError):
            build_complete(3, 4)

    def test_complete_degrees_by_enumeration(self):
        H = build_complete(7, 3)
        deg = [0] * 7
        for e in H.iter_edges():
            for x in e:
                deg[x] += 1
        assert deg == list(H.degrees()) == list(degree_profile(build(kind="complete", n=7, k=3)).degrees)

    @pytest.mark.parametrize("n,k", [(10, 3), (6, 3), (5, 4)])
    def test_tight_cycle(self, n, k):
        H = build_tight_cycle(n, k)
        assert H.num_edges == n
        assert degree_profile(H).regular and degree_profile(H).min_degree == k

    def test_tight_cycle_refused(self):
        with pytest.raises(UsageError):
            build_tight_cycle(3, 3)

    def test_matching(self):
        assert build_matching(2, 2).edges == ((0, 1), (2, 3))
        H = build_matching(3, 3)
        assert H.n == 9 and H.num_edges == 3 and set(H.degrees()) == {1}
        assert build_matching(1, 5).num_edges == 1

    def test_handshake(self):
        for H in (build_hnk(12, 4), build_tight_cycle(11, 4), build_matching(3, 4), build_complete(7, 3)):
            assert sum(H.degrees()) == H.k * H.num_edges

    def test_duplicate_edges_removed_and_bad_arity_rejected(self):
        from mmslab.cyclic import UniformHypergraph
        H = UniformHypergraph(5, 2, [(0, 1), (1, 0), (2, 3)])
        assert H.num_edges == 2
        with pytest.raises(UsageError):
            UniformHypergraph(5, 2, [(0, 0)])


class TestExport:
    def test_roundtrip_sorted(self):
        H = build_hnk(9, 3)
        doc = json.loads(dumps(H))
        assert doc["n"] == 9 and doc["k"] == 3 and doc["label"] == "hnk"
        assert doc["edges"] == sorted(doc["edges"])
        assert set(loads(dumps(H)).edges) == set(H.edges)

    def test_bad_vertex(self):
        with pytest.raises(UsageError):
            from_document({"n": 3, "k": 2, "edges": [[0, 5]]})


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 6))
def test_hnk_every_edge_is_double_interval(k, extra):
    n = 3 * k + extra
    for e in build_hnk(n, k).edges:
        assert is_double_interval(e, n, k)
