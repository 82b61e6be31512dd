"""Averaging over vertex permutations.

For a d-regular k-uniform H on n vertices and any f, the expected number of
nonnegative edges of H under a uniformly random relabelling f_sigma equals

    e^+_f(K_n^(k)) * d / C(n-1, k-1).

This module computes the left side exactly (enumeration), the right side in
closed form, and a seeded Monte Carlo estimate of the left side.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, prod

import numpy as np

from .assignments import Assignment, count_nonnegative, fmt_fraction
from .cyclic import CompleteHypergraph, UniformHypergraph, build_complete, degree_profile
from .errors import UsageError

MAX_ARRANGEMENTS = 40320  # 8!
MC_BLOCK = 10_000


@dataclass
class AveragingResult:
    expectation: Fraction | float
    formula_value: Fraction | None = None
    standard_error: float | None = None
    samples: int | None = None
    seed: int | None = None
    arrangements: int | None = None
    se_squared: Fraction | None = None   # exact squared standard error (MC only)

    @property
    def matches(self) -> bool | None:
        if self.formula_value is None or not isinstance(self.expectation, Fraction):
            return None
        return self.expectation == self.formula_value

    def as_dict(self) -> dict:
        d = {}
        for key in ("expectation", "formula_value"):
            val = getattr(self, key)
            if isinstance(val, Fraction):
                d[key] = fmt_fraction(val)
            elif val is not None:
                d[key] = repr(float(val))
        for key in ("standard_error", "samples", "seed", "arrangements"):
            val = getattr(self, key)
            if val is not None:
                d[key] = repr(val) if isinstance(val, float) else val
        if self.matches is not None:
            d["exact_equals_formula"] = self.matches
        return d


def _edge_array(H: UniformHypergraph) -> np.ndarray:
    if isinstance(H, CompleteHypergraph):
        return np.array(list(H.iter_edges()), dtype=np.int64).reshape(-1, H.k)
    return H.edge_array()


def _multiset_permutations(items):
    """Distinct orderings of a multiset, in lexicographic order."""
    counts = Counter(items)
    keys = sorted(counts)
    n = len(items)
    out = [None] * n

    def rec(pos):
        if pos == n:
            yield tuple(out)
            return
        for key in keys:
            if counts[key]:
                counts[key] -= 1
                out[pos] = key
                yield from rec(pos + 1)
                counts[key] += 1

    yield from rec(0)


def arrangement_count(f: Assignment) -> int:
    return factorial(f.n) // prod(factorial(c) for c in Counter(f.values).values())


def _count_rows(rows: np.ndarray, arr: np.ndarray) -> np.ndarray:
    """Nonnegative edge count for each row of integer values."""
    return np.count_nonzero(rows[:, arr].sum(axis=2) >= 0, axis=1)


def permutation_expectation_exact(f: Assignment, H: UniformHypergraph) -> AveragingResult:
    """Average of e^+_{f_sigma}(H) over all n! relabellings, computed exactly.

    Repeated values make many relabellings identical; each distinct arrangement
    stands for the same number of permutations, so a plain average over
    arrangements is the permutation average.
    """
    if f.n != H.n:
        raise UsageError(f"assignment has {f.n} values, H has {H.n} vertices")
    total_arr = arrangement_count(f)
    if total_arr > MAX_ARRANGEMENTS:
        raise UsageError(f"{total_arr} distinct arrangements exceed {MAX_ARRANGEMENTS}; use Monte Carlo")
    ints, _ = f.integer_scaling()
    arr = _edge_array(H)
    total = 0
    block = []
    for p in _multiset_permutations(ints):
        block.append(p)
        if len(block) == 4096:
            total += int(_count_rows(np.array(block, dtype=np.int64), arr).sum())
            block = []
    if block:
        total += int(_count_rows(np.array(block, dtype=np.int64), arr).sum())
    exp = Fraction(total, total_arr)
    formula = None
    prof = degree_profile(H)
    if prof.regular:
        formula = permutation_expectation_formula(f, H)
    return AveragingResult(exp, formula, arrangements=total_arr)


def permutation_expectation_formula(f: Assignment, H: UniformHypergraph) -> Fraction:
    """e^+_f(K_n^(k)) * d / C(n-1, k-1) for d-regular H."""
    prof = degree_profile(H)
    if not prof.regular:
        raise UsageError(f"H is not regular: degrees range over [{prof.min_degree}, {prof.max_degree}]")
    n, k = H.n, H.k
    ek = count_nonnegative(f, build_complete(n, k)).nonnegative_count
    return Fraction(ek * prof.min_degree, comb(n - 1, k - 1))


def _mc_block(args):
    seed_seq, size, ints, arr = args
    rng = np.random.default_rng(seed_seq)
    rows = rng.permuted(np.tile(ints, (size, 1)), axis=1)
    counts = _count_rows(rows, arr)
    return int(counts.sum()), int((counts.astype(np.int64) ** 2).sum())


def permutation_expectation_mc(f: Assignment, H: UniformHypergraph, samples: int, seed: int = 0,
                               threads: int = 1) -> AveragingResult:
    """Seeded estimate of the permutation average with its standard error.

    Samples are split into fixed-size blocks, each with its own child seed, so
    the result does not depend on the thread count.
    """
    if samples < 1:
        raise UsageError("samples must be at least 1")
    ints = np.array(f.integer_scaling()[0], dtype=np.int64)
    arr = _edge_array(H)
    sizes = [MC_BLOCK] * (samples // MC_BLOCK)
    if samples % MC_BLOCK:
        sizes.append(samples % MC_BLOCK)
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(c, s, ints, arr) for c, s in zip(children, sizes)]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(_mc_block, jobs))
    else:
        parts = [_mc_block(j) for j in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = Fraction(s1, samples)
    if samples > 1:
        var = (Fraction(s2) - Fraction(s1 * s1, samples)) / (samples - 1)
        se2 = var / samples
        se = float(se2) ** 0.5
    else:
        se2, se = None, float("inf")
    formula = permutation_expectation_formula(f, H) if degree_profile(H).regular else None
    return AveragingResult(mean, formula, se, samples, seed, se_squared=se2)


def within_standard_errors(result: AveragingResult, target, z: int = 3) -> bool:
    """|estimate - target| <= z * SE, compared exactly via squares."""
    diff = Fraction(result.expectation) - Fraction(target)
    if result.se_squared is None:
        return False
    return diff * diff <= z * z * result.se_squared


def conjecture_bound(H: UniformHypergraph, certified_min: int) -> int:
    """ceil(certified_min * C(n-1, k-1) / d): the bound on e^+(K_n^(k)) implied by H."""
    prof = degree_profile(H)
    if not prof.regular:
        raise UsageError(f"H is not regular: degrees range over [{prof.min_degree}, {prof.max_degree}]")
    if certified_min < 0:
        raise UsageError("certified_min must be nonnegative")
    num = certified_min * comb(H.n - 1, H.k - 1)
    return -(-num // prof.min_degree)


__all__ = ["AveragingResult", "permutation_expectation_exact", "permutation_expectation_formula",
           "permutation_expectation_mc", "within_standard_errors", "conjecture_bound", "arrangement_count"]
