"""Exact rational vertex assignments, nonnegative-edge counts, the named example
assignments, and the interval diagnostics (good/bad vertices, R(v), R^-(v),
the Q-sets and negative interval covers).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, lcm
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cyclic import (ClockwiseInterval, CompleteHypergraph, UniformHypergraph, formal_edge, interval,
                     min_degree)
from .errors import UsageError


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            q = int(q)
            if q <= 0:
                raise UsageError(f"denominator must be positive in {x!r}")
            return Fraction(int(p), q)
        return Fraction(int(s))
    if isinstance(x, (np.integer,)):
        return Fraction(int(x))
    raise UsageError(f"not an exact rational: {x!r}")


@dataclass(frozen=True)
class Assignment:
    """One exact rational value per vertex of Z_n."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(to_fraction(x) for x in self.values))

    @classmethod
    def of(cls, values: Iterable) -> "Assignment":
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.values)

    def __getitem__(self, v):
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def scaled(self, c) -> "Assignment":
        c = to_fraction(c)
        return Assignment(tuple(c * x for x in self.values))

    def rotated(self, c: int) -> "Assignment":
        """g(x) = f(x - c): the assignment carried along the rotation x -> x + c."""
        n = self.n
        return Assignment(tuple(self.values[(x - c) % n] for x in range(n)))

    def permuted(self, sigma: Sequence[int]) -> "Assignment":
        """f_sigma(x) = f(sigma(x))."""
        return Assignment(tuple(self.values[sigma[x]] for x in range(self.n)))

    def integer_scaling(self) -> tuple[list[int], int]:
        """Integers m_v and a positive D with f(v) = m_v / D."""
        d = 1
        for x in self.values:
            d = lcm(d, x.denominator)
        return [int(x * d) for x in self.values], d

    def int_array(self, k: int = 1) -> np.ndarray:
        """Integer-scaled values; object dtype when k-sums could overflow int64."""
        ints, _ = self.integer_scaling()
        bound = max((abs(x) for x in ints), default=0) * max(k, 1)
        return np.array(ints, dtype=np.int64 if bound < 2 ** 62 else object)

    def to_text(self) -> str:
        return "".join(f"{fmt_fraction(x)}\n" for x in self.values)


def fmt_fraction(x: Fraction) -> str:
    x = to_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_assignment(text: str) -> Assignment:
    """One value per line (integer or p/q); blank lines and '#' comments skipped."""
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            values.append(to_fraction(line))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"line {lineno}: cannot parse {line!r} ({exc})") from None
    return Assignment(tuple(values))


def read_assignment(path) -> Assignment:
    return parse_assignment(Path(path).read_text())


def write_assignment(f: Assignment, path) -> None:
    Path(path).write_text(f.to_text())


def edge_sum(f: Assignment, A: Iterable[int]) -> Fraction:
    s = Fraction(0)
    for v in A:
        if not 0 <= v < f.n:
            raise UsageError(f"vertex {v} outside [0, {f.n})")
        s += f.values[v]
    return s


def interval_sum(f: Assignment, I: ClockwiseInterval) -> Fraction:
    return sum((f.values[x] for x in I), Fraction(0))


@dataclass
class NonnegativityReport:
    nonnegative_count: int
    negative_edges_count: int
    threshold: int
    total_edges: int
    nonnegative_edges: list | None = None

    @property
    def below_threshold(self) -> bool:
        return self.nonnegative_count < self.threshold


def edge_sums_scaled(f: Assignment, H: UniformHypergraph, chunk: int = 200_000):
    """Yield (edges, sums*D) chunks; signs of the scaled sums equal signs of f(e)."""
    vals = f.int_array(H.k)
    if H.n != f.n:
        raise UsageError(f"assignment has {f.n} values but H has {H.n} vertices")
    if isinstance(H, CompleteHypergraph):
        it = H.iter_edges()
        while True:
            block = list(_take(it, chunk))
            if not block:
                break
            arr = np.array(block, dtype=np.int64).reshape(-1, H.k)
            yield arr, vals[arr].sum(axis=1)
    else:
        arr = H.edge_array()
        for s in range(0, len(arr), chunk):
            a = arr[s:s + chunk]
            yield a, vals[a].sum(axis=1)


def _take(it, m):
    for _, x in zip(range(m), it):
        yield x


def count_nonnegative(f: Assignment, H: UniformHypergraph, collect: bool = False) -> NonnegativityReport:
    """e^+_f(H): number of edges with f(e) >= 0."""
    nonneg = 0
    total = 0
    kept = [] if collect else None
    for arr, sums in edge_sums_scaled(f, H):
        mask = sums >= 0
        nonneg += int(np.count_nonzero(mask))
        total += len(arr)
        if collect:
            kept.extend(tuple(int(x) for x in e) for e in arr[np.asarray(mask, dtype=bool)])
    return NonnegativityReport(nonneg, total - nonneg, min_degree(H), total, kept)


def nonnegative_count(f: Assignment, H: UniformHypergraph) -> int:
    return count_nonnegative(f, H).nonnegative_count


# -- named example assignments -------------------------------------------------

EXAMPLE_KINDS = ("star", "three_heavy", "tight_cycle_k3", "h5k_mod")


def example_assignment(kind: str, n: int | None = None, k: int | None = None) -> Assignment:
    kind = kind.replace("-", "_")
    if kind == "star":
        if n is None or n < 1:
            raise UsageError("star needs n >= 1")
        return Assignment((n - 1,) + (-1,) * (n - 1))
    if kind == "three_heavy":
        if k is None or k < 1:
            raise UsageError("three_heavy needs k")
        if n is not None and n != 3 * k + 1:
            raise UsageError(f"three_heavy needs n = 3k+1 = {3 * k + 1}, got n={n}")
        return Assignment((2 - 3 * k,) * 3 + (3,) * (3 * k - 2))
    if kind == "tight_cycle_k3":
        if k is not None and k != 3:
            raise UsageError(f"tight_cycle_k3 needs k = 3, got k={k}")
        if n is None or n % 3 != 1 or n < 4:
            raise UsageError(f"tight_cycle_k3 needs n = 1 mod 3, got n={n}")
        if n > 151:
            raise UsageError(f"tight_cycle_k3 has negative total for n > 151 (got n={n})")
        # 50, 50, 50, -101, 50, 50, -101, ... read from vertex 0
        return Assignment(tuple(-101 if x >= 3 and x % 3 == 0 else 50 for x in range(n)))
    if kind == "h5k_mod":
        if k is None or k < 3:
            raise UsageError("h5k_mod needs k >= 3")
        if n is not None and n != 5 * (k - 1):
            raise UsageError(f"h5k_mod needs n = 5(k-1) = {5 * (k - 1)}, got n={n}")
        n = 5 * (k - 1)
        return Assignment(tuple(k - 2 if x % (k - 1) == 0 else -1 for x in range(n)))
    raise UsageError(f"unknown example assignment {kind!r}; choose from {', '.join(EXAMPLE_KINDS)}")


# -- diagnostic sets -------------------------------------------------------------

@dataclass
class DiagnosticSets:
    good_vertices: frozenset | None = None
    bad_vertices: frozenset | None = None
    r_set: frozenset | None = None
    r_minus_set: frozenset | None = None
    q_plus: frozenset | None = None
    q_minus: frozenset | None = None
    q_full: frozenset | None = None
    epsilon: Fraction | None = None
    threshold: int | None = None
    notes: list = field(default_factory=list)


def nonnegative_counts_per_vertex(f: Assignment, k: int, *, errata: bool = False) -> list[int]:
    """Number of nonnegative edges of E(v), for every v."""
    from .families import e_of_v

    n = f.n
    # E(v) is the translate of E(0)
    base = np.array(sorted(e_of_v(0, k, n, errata=errata)), dtype=np.int64)
    vals = f.int_array(k)
    counts = []
    for v in range(n):
        sums = vals[(base + v) % n].sum(axis=1)
        counts.append(int(np.count_nonzero(sums >= 0)))
    return counts


def good_bad_partition(f: Assignment, k: int, eps0, *, errata: bool = False) -> DiagnosticSets:
    """A vertex is bad when at least eps0*k^2 edges of E(v) are nonnegative."""
    eps0 = to_fraction(eps0)
    limit = eps0 * k * k
    counts = nonnegative_counts_per_vertex(f, k, errata=errata)
    bad = frozenset(v for v, c in enumerate(counts) if c >= limit)
    good = frozenset(range(f.n)) - bad
    return DiagnosticSets(good_vertices=good, bad_vertices=bad, epsilon=eps0)


def _as_interval(I, n):
    if isinstance(I, ClockwiseInterval):
        return I
    a, b = I
    return interval(a, b, n)


def r_set(f: Assignment, I, v: int, good: Iterable[int] | None = None) -> frozenset:
    """R(v) = {u in I after v : f([v, u-1]) < 0 and u good}."""
    I = _as_interval(I, f.n)
    good = frozenset(range(f.n)) if good is None else frozenset(good)
    p = I.position(v)
    out = set()
    running = Fraction(0)
    for q in range(p + 1, len(I)):
        running += f.values[(I.start + q - 1) % f.n]
        u = (I.start + q) % f.n
        if running < 0 and u in good:
            out.add(u)
    return frozenset(out)


def r_minus_set(f: Assignment, I, v: int, good: Iterable[int] | None = None) -> frozenset:
    """R^-(v) = {u in I before v : f([u+1, v]) < 0 and u good}."""
    I = _as_interval(I, f.n)
    good = frozenset(range(f.n)) if good is None else frozenset(good)
    p = I.position(v)
    out = set()
    running = Fraction(0)
    for q in range(p - 1, -1, -1):
        running += f.values[(I.start + q + 1) % f.n]
        u = (I.start + q) % f.n
        if running < 0 and u in good:
            out.add(u)
    return frozenset(out)


def witness_threshold(eps, k: int) -> int:
    """Smallest integer count c with c >= eps*k."""
    return ceil(to_fraction(eps) * k)


def q_sets(f: Assignment, v: int, eps, k: int) -> DiagnosticSets:
    """Q^+_eps(v), Q^-_eps(v) and Q_eps(v) = Q^+ U Q^- U {0}.

    j is in Q^+ when f([v+i, v+i+j-1]) < 0 for at least eps*k values of
    i in [1, k-1]; k-j is in Q^- when at least eps*k of those windows are
    nonnegative.
    """
    eps = to_fraction(eps)
    if not 0 < eps <= 1:
        raise UsageError(f"eps must lie in (0, 1], got {eps}")
    n = f.n
    need = witness_threshold(eps, k)
    prefix = [Fraction(0)]
    for t in range(2 * k):
        prefix.append(prefix[-1] + f.values[(v + t) % n])
    plus, minus = set(), set()
    for j in range(1, k):
        neg = sum(1 for i in range(1, k) if prefix[i + j] - prefix[i] < 0)
        if neg >= need:
            plus.add(j)
        if (k - 1) - neg >= need:
            minus.add(k - j)
    notes = []
    if need > k - 1:
        notes.append(f"threshold ceil(eps*k)={need} exceeds the k-1={k - 1} available windows; "
                     "Q^+ and Q^- are necessarily empty")
    return DiagnosticSets(q_plus=frozenset(plus), q_minus=frozenset(minus),
                          q_full=frozenset(plus | minus | {0}), epsilon=eps, threshold=need, notes=notes)


# -- negative interval covers ------------------------------------------------------

@dataclass
class NegativeCover:
    J: ClockwiseInterval
    offset: int
    i: int
    j: int
    pairs: int
    edges: list
    total: Fraction
    oversize_chains: int = 0


def chain_edges(start: int, i: int, j: int, pairs: int, k: int, n: int) -> list:
    """e(s+2tk, i, j) and e(s+2tk+i, j, k-i) for t < pairs; each pair tiles 2k vertices."""
    out = []
    for t in range(pairs):
        s = start + 2 * t * k
        out.append(formal_edge(s, i, j, k, n))
        out.append(formal_edge(s + i, j, k - i, k, n))
    return out


def find_negative_cover(f: Assignment, I, k: int) -> NegativeCover | None:
    """Look for an all-negative chain of paired double intervals covering I.

    Chains start at I.start - v for v in [0, 2k) and use as few pairs as cover
    I; (v, i, j) is scanned lexicographically and the first chain with every
    edge negative and |J| <= |I| + 2k wins. None when every chain is blocked.
    """
    n = f.n
    I = _as_interval(I, n)
    L = len(I)
    if L == 0:
        raise UsageError("cannot cover an empty interval")
    if L > n - 2 * k:
        raise UsageError(f"|I| = {L} exceeds n - 2k = {n - 2 * k}")
    vals = f.int_array(k)
    oversize = 0
    for v in range(2 * k):
        start = I.start - v
        pairs = -(-(L + v) // (2 * k))
        length = 2 * k * pairs
        for i in range(1, k):
            for j in range(1, k):
                edges = chain_edges(start, i, j, pairs, k, n)
                arr = np.array(edges, dtype=np.int64)
                if np.any(vals[arr].sum(axis=1) >= 0):
                    continue
                if length > L + 2 * k:
                    oversize += 1
                    continue
                J = ClockwiseInterval(start, length, n)
                return NegativeCover(J, v, i, j, pairs, edges, interval_sum(f, J), oversize)
    return None
