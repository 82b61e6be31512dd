"""Sumsets in Z_k and empirical audits of three sumset inequalities.

Sets are stored as Python integer bitmasks (bit x set iff x is a member), so
any modulus works and translation is a bit rotation.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class ResidueSet:
    k: int
    mask: int

    def __post_init__(self):
        if self.k < 1:
            raise UsageError(f"modulus must be positive, got {self.k}")
        object.__setattr__(self, "mask", self.mask & ((1 << self.k) - 1))

    @classmethod
    def of(cls, elements: Iterable[int], k: int) -> "ResidueSet":
        m = 0
        for x in elements:
            m |= 1 << (int(x) % k)
        return cls(k, m)

    @classmethod
    def full(cls, k: int) -> "ResidueSet":
        return cls(k, (1 << k) - 1)

    def __iter__(self):
        m, x = self.mask, 0
        while m:
            if m & 1:
                yield x
            m >>= 1
            x += 1

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, x) -> bool:
        return bool(self.mask >> (int(x) % self.k) & 1)

    def __or__(self, other):
        _same(self, other)
        return ResidueSet(self.k, self.mask | other.mask)

    def __le__(self, other):
        _same(self, other)
        return self.mask & ~other.mask == 0

    def elements(self) -> list[int]:
        return list(self)

    def negated(self) -> "ResidueSet":
        return ResidueSet.of((-x for x in self), self.k)

    def __repr__(self):
        return f"ResidueSet(k={self.k}, {sorted(self)})"


def _same(A: ResidueSet, B: ResidueSet):
    if A.k != B.k:
        raise UsageError(f"moduli differ: {A.k} != {B.k}")


def _rot(mask: int, x: int, k: int) -> int:
    x %= k
    full = (1 << k) - 1
    return ((mask << x) | (mask >> (k - x))) & full


def translate(A: ResidueSet, x: int) -> ResidueSet:
    return ResidueSet(A.k, _rot(A.mask, x, A.k))


def sumset(A: ResidueSet, B: ResidueSet) -> ResidueSet:
    _same(A, B)
    out = 0
    for a in A:
        out |= _rot(B.mask, a, A.k)
    return ResidueSet(A.k, out)


def mod_project(A: Iterable[int], k: int) -> ResidueSet:
    return ResidueSet.of(A, k)


def representation_counts(A: ResidueSet, B: ResidueSet) -> list[int]:
    _same(A, B)
    cnt = [0] * A.k
    for a in A:
        for b in B:
            cnt[(a + b) % A.k] += 1
    return cnt


def multiplicity_sumset(A: ResidueSet, B: ResidueSet, i: int) -> ResidueSet:
    """(A+B)_i: elements with at least i representations a + b."""
    if i < 1:
        raise UsageError(f"i must be at least 1, got {i}")
    cnt = representation_counts(A, B)
    return ResidueSet.of((x for x in range(A.k) if cnt[x] >= i), A.k)


def restricted_sumset(A: ResidueSet, B: ResidueSet, S: Iterable[tuple]) -> ResidueSet:
    """A +_S B = {a + b : (a, b) in S}; every pair must lie in A x B."""
    _same(A, B)
    out = set()
    for a, b in S:
        if a not in A or b not in B or not (0 <= a < A.k and 0 <= b < A.k):
            raise UsageError(f"pair ({a}, {b}) is not in A x B")
        out.add((a + b) % A.k)
    return ResidueSet.of(out, A.k)


def divisors(k: int) -> list[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


def stabilizer(X: ResidueSet) -> ResidueSet:
    """Stab(X) = {y : y + X = X}, the subgroup generated by the smallest fixing divisor."""
    k = X.k
    for d in divisors(k):
        if _rot(X.mask, d, k) == X.mask:
            return ResidueSet.of(range(0, k, d), k)
    raise AssertionError("unreachable: d = k always fixes X")


# -- Kneser ---------------------------------------------------------------------

@dataclass
class KneserRecord:
    sumset_size: int
    stabilizer_size: int
    a_plus_h: int
    b_plus_h: int

    @property
    def bound(self) -> int:
        return self.a_plus_h + self.b_plus_h - self.stabilizer_size

    @property
    def holds(self) -> bool:
        return self.sumset_size >= self.bound

    @property
    def equality(self) -> bool:
        return self.sumset_size == self.bound


def kneser_check(A: ResidueSet, B: ResidueSet) -> KneserRecord:
    """|A+B| >= |A+H| + |B+H| - |H| with H = Stab(A+B)."""
    if not len(A) or not len(B):
        raise UsageError("A and B must be nonempty")
    S = sumset(A, B)
    H = stabilizer(S)
    return KneserRecord(len(S), len(H), len(sumset(A, H)), len(sumset(B, H)))


@dataclass
class AuditSummary:
    name: str
    params: dict
    tested: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        d = {"audit": self.name, "params": self.params, "tested": self.tested,
             "failures": self.failures[:20], "failure_count": len(self.failures)}
        if self.notes:
            d["notes"] = self.notes
        if self.extra:
            d.update(self.extra)
        return d


def _kneser_chunk(args):
    k, masks = args
    full = (1 << k) - 1
    fails = []
    count = 0
    for am in masks:
        A = ResidueSet(k, am)
        for bm in range(1, full + 1):
            rec = kneser_check(A, ResidueSet(k, bm))
            count += 1
            if not rec.holds:
                fails.append((k, sorted(A), sorted(ResidueSet(k, bm))))
    return count, fails


def exhaustive_kneser_audit(k_max: int, workers: int = 1) -> AuditSummary:
    """Every pair of nonempty A, B in Z_k for 1 <= k <= k_max."""
    out = AuditSummary("kneser_exhaustive", {"k_max": k_max})
    jobs = []
    for k in range(1, k_max + 1):
        masks = list(range(1, 1 << k))
        step = max(1, len(masks) // max(1, workers))
        jobs.extend((k, masks[s:s + step]) for s in range(0, len(masks), step))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_kneser_chunk, jobs))
    else:
        parts = [_kneser_chunk(j) for j in jobs]
    for count, fails in parts:
        out.tested += count
        out.failures.extend(fails)
    out.failures.sort()
    return out


def random_kneser_audit(instances: int, k_max: int, seed: int = 0) -> AuditSummary:
    """Random nonempty A, B in Z_k with k uniform in [1, k_max] and random densities."""
    rng = np.random.default_rng(seed)
    out = AuditSummary("kneser_random", {"instances": instances, "k_max": k_max, "seed": seed})
    for _ in range(instances):
        k = int(rng.integers(1, k_max + 1))
        sets = []
        for _ in range(2):
            p = rng.random()
            bits = rng.random(k) < p
            if not bits.any():
                bits[rng.integers(k)] = True
            sets.append(ResidueSet.of(np.flatnonzero(bits).tolist(), k))
        rec = kneser_check(*sets)
        out.tested += 1
        if not rec.holds:
            out.failures.append((k, sorted(sets[0]), sorted(sets[1])))
    return out


# -- Grynkiewicz ------------------------------------------------------------------------

@dataclass
class GrynkiewiczRecord:
    t: int
    lhs: int
    rhs: int
    branch_i: bool
    branch_ii: bool | None          # None: search stopped at the effort cap
    removal: tuple | None = None    # (removed from A, removed from B) when branch (ii) holds

    @property
    def certified(self) -> bool:
        return self.branch_i or bool(self.branch_ii)


def grynkiewicz_audit(A: ResidueSet, B: ResidueSet, t: int, max_checks: int = 200_000,
                      search_always: bool = False) -> GrynkiewiczRecord:
    """Which alternative of Grynkiewicz's dichotomy holds for (A, B, t).

    (i)  sum_{i<=t} |(A+B)_i| >= t|A| + t|B| - 2t^2 + 1
    (ii) A' + B' = (A+B)_t for some A', B' with |A - A'| + |B - B'| <= t - 1
    Branch (ii) is searched by increasing removal size, stopping at the first hit.
    """
    _same(A, B)
    k = A.k
    if not 1 <= t <= k:
        raise UsageError(f"t must lie in [1, {k}], got {t}")
    cnt = representation_counts(A, B)
    lhs = sum(sum(1 for c in cnt if c >= i) for i in range(1, t + 1))
    rhs = t * len(A) + t * len(B) - 2 * t * t + 1
    branch_i = lhs >= rhs
    if branch_i and not search_always:
        return GrynkiewiczRecord(t, lhs, rhs, True, None)
    target = ResidueSet.of((x for x in range(k) if cnt[x] >= t), k)
    a_el, b_el = sorted(A), sorted(B)
    checks = 0
    for size in range(t):
        for ra in range(size + 1):
            rb = size - ra
            if ra > len(a_el) or rb > len(b_el):
                continue
            for drop_a in itertools.combinations(a_el, ra):
                A2 = ResidueSet(k, A.mask & ~ResidueSet.of(drop_a, k).mask)
                for drop_b in itertools.combinations(b_el, rb):
                    checks += 1
                    if checks > max_checks:
                        return GrynkiewiczRecord(t, lhs, rhs, branch_i, None)
                    B2 = ResidueSet(k, B.mask & ~ResidueSet.of(drop_b, k).mask)
                    if sumset(A2, B2) == target:
                        return GrynkiewiczRecord(t, lhs, rhs, branch_i, True, (drop_a, drop_b))
    return GrynkiewiczRecord(t, lhs, rhs, branch_i, False)


def exhaustive_grynkiewicz_audit(k_max: int, t_max: int) -> AuditSummary:
    out = AuditSummary("grynkiewicz_exhaustive", {"k_max": k_max, "t_max": t_max})
    branches = {"i": 0, "ii_only": 0}
    for k in range(1, k_max + 1):
        for am in range(1, 1 << k):
            A = ResidueSet(k, am)
            for bm in range(1, 1 << k):
                B = ResidueSet(k, bm)
                for t in range(1, min(t_max, k) + 1):
                    rec = grynkiewicz_audit(A, B, t)
                    out.tested += 1
                    if rec.branch_i:
                        branches["i"] += 1
                    elif rec.branch_ii:
                        branches["ii_only"] += 1
                    else:
                        out.failures.append((k, t, sorted(A), sorted(B)))
    out.extra["branch_counts"] = branches
    return out


# -- growth under the symmetric-cover hypothesis ----------------------------------------------

def symmetric_cover_failure(A: ResidueSet) -> int | None:
    """Smallest x with neither x nor -x in A, or None when A covers every pair."""
    for x in range(A.k):
        if x not in A and (-x) % A.k not in A:
            return x
    return None


def symmetric_cover_sets(k: int):
    """All A in Z_k containing x or -x for every x."""
    classes = []
    for x in range(k):
        y = (-x) % k
        if x <= y:
            classes.append((x, y))
    choices = []
    for x, y in classes:
        if x == y:
            choices.append([1 << x])
        else:
            choices.append([1 << x, 1 << y, (1 << x) | (1 << y)])
    for combo in itertools.product(*choices):
        yield ResidueSet(k, sum(combo))


@dataclass
class GrowthRecord:
    k: int
    size: int
    threshold: Fraction
    holds: bool
    tie: bool


def growth_check(A: ResidueSet, B: ResidueSet, S=None, eps3=Fraction(1, 100),
                 eps4=Fraction(1, 10)) -> GrowthRecord:
    """|A +_S B| >= (1/2 + eps4) k under the symmetric-cover hypothesis."""
    _same(A, B)
    k = A.k
    for name, X in (("A", A), ("B", B)):
        x = symmetric_cover_failure(X)
        if x is not None:
            raise UsageError(f"hypothesis fails for {name}: neither {x} nor {(-x) % k} is a member")
    eps3, eps4 = Fraction(eps3), Fraction(eps4)
    if S is None:
        C = sumset(A, B)
    else:
        S = list(S)
        if len(S) < len(A) * len(B) - eps3 * eps3 * k * k:
            raise UsageError(f"|S| = {len(S)} < |A x B| - eps3^2 k^2")
        C = restricted_sumset(A, B, S)
    thr = (Fraction(1, 2) + eps4) * k
    return GrowthRecord(k, len(C), thr, len(C) >= thr, len(C) == thr)


def exhaustive_growth_audit(k_max: int, eps3=Fraction(1, 100), eps4=Fraction(1, 10),
                            max_removal_checks: int = 100_000) -> AuditSummary:
    """All hypothesis-satisfying (A, B) for 1 <= k <= k_max.

    When eps3^2 k^2 < 1 the only admissible S is A x B. Otherwise every S with
    up to floor(eps3^2 k^2) pairs removed is tried, within the check cap.
    """
    eps3, eps4 = Fraction(eps3), Fraction(eps4)
    out = AuditSummary("growth_exhaustive", {"k_max": k_max, "eps3": str(eps3), "eps4": str(eps4)})
    ties = 0
    min_margin = None
    for k in range(1, k_max + 1):
        drop = int(eps3 * eps3 * k * k)
        sets = list(symmetric_cover_sets(k))
        for A in sets:
            assert 2 * len(A) >= k
            for B in sets:
                pairs = [(a, b) for a in A for b in B]
                S_options = [None]
                if drop:
                    S_options = []
                    for r in range(drop + 1):
                        for rem in itertools.combinations(range(len(pairs)), r):
                            S_options.append([p for q, p in enumerate(pairs) if q not in rem])
                            if len(S_options) > max_removal_checks:
                                break
                    if len(S_options) > max_removal_checks:
                        out.notes.append(f"k={k}: removal sets truncated at {max_removal_checks}")
                for S in S_options:
                    rec = growth_check(A, B, S, eps3, eps4)
                    out.tested += 1
                    ties += rec.tie
                    margin = rec.size - rec.threshold
                    min_margin = margin if min_margin is None else min(min_margin, margin)
                    if not rec.holds:
                        out.failures.append((k, sorted(A), sorted(B)))
    out.extra["ties"] = ties
    out.extra["min_margin"] = str(min_margin)
    return out


__all__ = ["ResidueSet", "translate", "sumset", "mod_project", "multiplicity_sumset", "restricted_sumset",
           "representation_counts", "stabilizer", "divisors", "kneser_check", "KneserRecord",
           "exhaustive_kneser_audit", "random_kneser_audit", "grynkiewicz_audit", "GrynkiewiczRecord",
           "exhaustive_grynkiewicz_audit", "symmetric_cover_failure", "symmetric_cover_sets",
           "growth_check", "GrowthRecord", "exhaustive_growth_audit", "AuditSummary"]
