"""Vertices of Z_n, clockwise intervals, canonical k-edges and the hypergraph
constructions: double-interval hypergraphs H_{n,k}, complete hypergraphs,
tight cycles and matchings.

Edges are plain tuples of residues sorted ascending, so equal sets compare and
hash equal.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator

import numpy as np

from .errors import InvalidSpecError, UsageError

KEdge = tuple  # sorted tuple of residues


@dataclass(frozen=True)
class CyclicIndex:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise UsageError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __add__(self, other):
        other = _residue(other, self.modulus)
        return CyclicIndex(self.value + other, self.modulus)

    def __sub__(self, other):
        other = _residue(other, self.modulus)
        return CyclicIndex(self.value - other, self.modulus)

    def __int__(self):
        return self.value


def _residue(x, n):
    if isinstance(x, CyclicIndex):
        if x.modulus != n:
            raise UsageError(f"moduli differ: {x.modulus} != {n}")
        return x.value
    return int(x)


@dataclass(frozen=True)
class ClockwiseInterval:
    """The vertices start, start+1, ..., start+length-1 (mod n)."""

    start: int
    length: int
    n: int

    def __post_init__(self):
        if not 0 <= self.length <= self.n:
            raise UsageError(f"interval length {self.length} outside [0, {self.n}]")
        object.__setattr__(self, "start", self.start % self.n)

    @property
    def end(self) -> int:
        """Last vertex; undefined (raises) for the empty interval."""
        if self.length == 0:
            raise UsageError("empty interval has no end")
        return (self.start + self.length - 1) % self.n

    def __len__(self):
        return self.length

    def __iter__(self) -> Iterator[int]:
        for t in range(self.length):
            yield (self.start + t) % self.n

    def __contains__(self, x) -> bool:
        return (int(x) - self.start) % self.n < self.length

    def position(self, x) -> int:
        """Offset of x from the start of the interval."""
        p = (int(x) - self.start) % self.n
        if p >= self.length:
            raise UsageError(f"{x} not in {self}")
        return p

    def vertices(self) -> frozenset:
        return frozenset(self)

    def sub(self, first: int, last: int) -> "ClockwiseInterval":
        """Sub-interval from offset first to offset last inclusive (empty if last < first)."""
        return ClockwiseInterval(self.start + first, max(0, last - first + 1), self.n)


def interval(a, b, n: int | None = None) -> ClockwiseInterval:
    """Clockwise interval [a, b] = {a, a+1, ..., b} mod n."""
    if n is None:
        if not isinstance(a, CyclicIndex):
            raise UsageError("n is required when a is a plain integer")
        n = a.modulus
    a = _residue(a, n)
    b = _residue(b, n)
    return ClockwiseInterval(a, (b - a) % n + 1, n)


def canonical(vertices: Iterable[int], n: int) -> KEdge:
    return tuple(sorted(int(x) % n for x in vertices))


def formal_edge(v: int, a: int, b: int, k: int, n: int) -> KEdge:
    """[v, v+a-1] U [v+a+b, v+b+k-1] mod n without any range checks.

    Degenerate parameters (a or b equal to 0 or k) still give k vertices, but
    the result is a plain interval rather than an edge of H_{n,k}.
    """
    first = range(v, v + a)
    second = range(v + a + b, v + b + k)
    return canonical(itertools.chain(first, second), n)


@dataclass(frozen=True)
class DoubleIntervalSpec:
    v: int
    i: int
    j: int
    k: int
    n: int

    @property
    def invalid_field(self) -> str | None:
        """Name of the first parameter outside [1, k-1], or None."""
        if not 1 <= self.i <= self.k - 1:
            return "i"
        if not 1 <= self.j <= self.k - 1:
            return "j"
        return None

    @property
    def valid(self) -> bool:
        return self.invalid_field is None

    def edge(self) -> KEdge:
        return formal_edge(self.v, self.i, self.j, self.k, self.n)


def double_interval_edge(v, i, j, k, n) -> KEdge:
    """The edge e(v,i,j) of H_{n,k}: an i-long interval at v, a gap of j, then k-i more."""
    spec = DoubleIntervalSpec(_residue(v, n), i, j, k, n)
    bad = spec.invalid_field
    if bad is not None:
        raise InvalidSpecError(bad, getattr(spec, bad), f"{bad}={getattr(spec, bad)} not in [1, {k - 1}]")
    if n < 3 * k:
        raise InvalidSpecError("n", n, f"n={n} < 3k={3 * k}: double-interval representation not unique")
    return spec.edge()


class UniformHypergraph:
    """k-uniform hypergraph on Z_n with a fixed, duplicate-free edge list."""

    def __init__(self, n: int, k: int, edges: Iterable[Iterable[int]], label: str = "custom",
                 params: dict | None = None, edge_transitive: bool = False):
        self.n = n
        self.k = k
        self.label = label
        self.params = dict(params or {})
        # rotations or block permutations act transitively on edges
        self.edge_transitive = edge_transitive
        seen = {}
        for e in edges:
            e = canonical(e, n)
            if len(set(e)) != k:
                raise UsageError(f"edge {e} does not have {k} distinct vertices")
            seen.setdefault(e, None)
        self._edges = tuple(seen)

    @property
    def edges(self) -> tuple:
        return self._edges

    def iter_edges(self) -> Iterator[KEdge]:
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return canonical(e, self.n) in self.edge_set

    @property
    def edge_set(self) -> frozenset:
        s = getattr(self, "_edge_set", None)
        if s is None:
            s = self._edge_set = frozenset(self.edges)
        return s

    def edge_array(self) -> np.ndarray:
        """Edges as an (m, k) integer array."""
        arr = getattr(self, "_array", None)
        if arr is None:
            arr = np.array(self.edges, dtype=np.int64).reshape(-1, self.k)
            self._array = arr
        return arr

    def degrees(self) -> list[int]:
        deg = np.bincount(self.edge_array().ravel(), minlength=self.n)
        return [int(d) for d in deg]

    def rotated(self, c: int) -> "UniformHypergraph":
        return UniformHypergraph(self.n, self.k, ([x + c for x in e] for e in self.edges),
                                 self.label, self.params, self.edge_transitive)

    def __repr__(self):
        return f"UniformHypergraph(label={self.label!r}, n={self.n}, k={self.k}, edges={self.num_edges})"


class CompleteHypergraph(UniformHypergraph):
    """K_n^(k); edges are produced lazily in lexicographic order."""

    def __init__(self, n: int, k: int):
        self.n = n
        self.k = k
        self.label = "complete"
        self.params = {"n": n, "k": k}
        self.edge_transitive = True

    @property
    def edges(self) -> tuple:
        e = getattr(self, "_edges", None)
        if e is None:
            e = self._edges = tuple(itertools.combinations(range(self.n), self.k))
        return e

    def iter_edges(self):
        return itertools.combinations(range(self.n), self.k)

    @property
    def num_edges(self) -> int:
        return comb(self.n, self.k)

    def __len__(self):
        return self.num_edges

    def __contains__(self, e) -> bool:
        e = canonical(e, self.n)
        return len(set(e)) == self.k

    def degrees(self) -> list[int]:
        return [comb(self.n - 1, self.k - 1)] * self.n


def build_hnk(n: int, k: int) -> UniformHypergraph:
    """H_{n,k}: all e(v,i,j) with v in Z_n and i, j in [1, k-1]."""
    if k < 2:
        raise UsageError(f"H_(n,k) needs k >= 2, got k={k}")
    if n < 3 * k:
        raise UsageError(f"H_(n,k) needs n >= 3k (got n={n}, k={k}); below that e(v,i,j) is not unique")
    edges = [formal_edge(v, i, j, k, n)
             for v in range(n) for i in range(1, k) for j in range(1, k)]
    H = UniformHypergraph(n, k, edges, "hnk", {"n": n, "k": k})
    if H.num_edges != n * (k - 1) ** 2:
        raise AssertionError("double intervals collided")  # excluded by n >= 3k
    return H


def hnk_index(n: int, k: int) -> dict:
    """Map edge -> (v, i, j) for H_{n,k}."""
    return {formal_edge(v, i, j, k, n): (v, i, j)
            for v in range(n) for i in range(1, k) for j in range(1, k)}


def build_complete(n: int, k: int) -> CompleteHypergraph:
    if not 1 <= k <= n:
        raise UsageError(f"complete hypergraph needs 1 <= k <= n (got n={n}, k={k})")
    return CompleteHypergraph(n, k)


def build_tight_cycle(n: int, k: int) -> UniformHypergraph:
    """C_{n,k}: the n cyclic intervals of length k."""
    if n <= k:
        raise UsageError(f"tight cycle needs n >= k+1 (got n={n}, k={k})")
    edges = [[(s + t) % n for t in range(k)] for s in range(n)]
    return UniformHypergraph(n, k, edges, "tight_cycle", {"n": n, "k": k}, edge_transitive=True)


def build_matching(t: int, k: int) -> UniformHypergraph:
    """M_{t,k}: t disjoint blocks of k consecutive vertices on tk vertices."""
    if t < 1 or k < 1:
        raise UsageError(f"matching needs t, k >= 1 (got t={t}, k={k})")
    edges = [range(b * k, (b + 1) * k) for b in range(t)]
    return UniformHypergraph(t * k, k, edges, "matching", {"t": t, "k": k}, edge_transitive=True)


@dataclass(frozen=True)
class DegreeProfile:
    degrees: tuple
    min_degree: int
    max_degree: int
    regular: bool

    def as_dict(self):
        return {v: d for v, d in enumerate(self.degrees)}


def degree_profile(H: UniformHypergraph) -> DegreeProfile:
    deg = tuple(H.degrees())
    lo, hi = min(deg), max(deg)
    return DegreeProfile(deg, lo, hi, lo == hi)


def min_degree(H: UniformHypergraph) -> int:
    return min(H.degrees())


def build(kind: str, n: int | None = None, k: int | None = None, t: int | None = None) -> UniformHypergraph:
    """Construct a hypergraph by name: hnk, complete, tight_cycle or matching."""
    kind = kind.replace("-", "_")
    if kind == "hnk":
        return build_hnk(n, k)
    if kind == "complete":
        return build_complete(n, k)
    if kind == "tight_cycle":
        return build_tight_cycle(n, k)
    if kind == "matching":
        if t is None:
            if n is None or k is None or n % k:
                raise UsageError("matching needs --t, or --n divisible by --k")
            t = n // k
        return build_matching(t, k)
    raise UsageError(f"unknown hypergraph kind {kind!r}")


# -- export / import ---------------------------------------------------------

def to_document(H: UniformHypergraph) -> dict:
    return {"n": H.n, "k": H.k, "label": H.label, "edges": [list(e) for e in sorted(H.iter_edges())]}


def from_document(doc: dict) -> UniformHypergraph:
    try:
        n, k, edges = int(doc["n"]), int(doc["k"]), doc["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed hypergraph document: {exc}") from None
    for e in edges:
        if any(not 0 <= int(x) < n for x in e):
            raise UsageError(f"edge {e} has a vertex outside [0, {n})")
    return UniformHypergraph(n, k, edges, doc.get("label", "custom"))


def dumps(H: UniformHypergraph) -> str:
    return json.dumps(to_document(H), indent=1)


def loads(text: str) -> UniformHypergraph:
    return from_document(json.loads(text))
