"""Exact rational linear feasibility.

A dense Phase-I simplex over ``fractions.Fraction`` with Bland's rule. No
floating point is involved, so feasibility verdicts at the boundary are exact.
Infeasible systems come back with a Farkas certificate that can be checked
without trusting the pivoting code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

F0 = Fraction(0)
F1 = Fraction(1)


@dataclass
class PhaseOneResult:
    feasible: bool
    x: list | None          # a point with A x = b, x >= 0 when feasible
    duals: list             # Phase-I dual values, one per row
    pivots: int


def _frac_rows(rows):
    return [[Fraction(v) for v in r] for r in rows]


def phase_one(A: Sequence[Sequence], b: Sequence, max_pivots: int = 100_000) -> PhaseOneResult:
    """Find x >= 0 with A x = b, or show none exists.

    Every row receives an artificial variable; minimising their sum with
    Bland's rule terminates. The artificial columns are kept in the tableau so
    that the Phase-I duals can be read off at the end.
    """
    A = _frac_rows(A)
    b = [Fraction(v) for v in b]
    m = len(A)
    nv = len(A[0]) if m else 0
    sign = [1] * m
    for r in range(m):
        if b[r] < 0:
            sign[r] = -1
            A[r] = [-v for v in A[r]]
            b[r] = -b[r]
    width = nv + m
    T = [A[r] + [F1 if c == r else F0 for c in range(m)] + [b[r]] for r in range(m)]
    basis = [nv + r for r in range(m)]
    # reduced costs of the Phase-I objective (sum of artificials)
    cost = [F0] * nv + [F1] * m
    red = cost[:] + [F0]
    for r in range(m):
        for c in range(width + 1):
            red[c] -= T[r][c]
    pivots = 0
    while True:
        enter = next((c for c in range(width) if red[c] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for r in range(m):
            a = T[r][enter]
            if a > 0:
                ratio = T[r][-1] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:
            # Phase-I objective is bounded below by 0; an unbounded column cannot improve it
            raise ArithmeticError("unbounded Phase-I direction")
        _pivot(T, red, leave, enter)
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot limit exceeded")
    objective = -red[-1]
    # pi_r = c_art - reduced cost of artificial r, undone for flipped rows
    duals = [sign[r] * (F1 - red[nv + r]) for r in range(m)]
    if objective > 0:
        return PhaseOneResult(False, None, duals, pivots)
    x = [F0] * nv
    for r, var in enumerate(basis):
        if var < nv:
            x[var] = T[r][-1]
    return PhaseOneResult(True, x, duals, pivots)


def _pivot(T, red, row, col):
    prow = T[row]
    p = prow[col]
    if p != 1:
        inv = 1 / p
        prow[:] = [v * inv for v in prow]
    for r, trow in enumerate(T):
        if r != row:
            a = trow[col]
            if a:
                trow[:] = [u - a * v if v else u for u, v in zip(trow, prow)]
    a = red[col]
    if a:
        red[:] = [u - a * v if v else u for u, v in zip(red, prow)]


@dataclass
class LeqResult:
    """Outcome for A x <= b with x free."""

    feasible: bool
    point: list | None
    certificate: list | None   # y >= 0 with y A = 0 and y b < 0 when infeasible
    pivots: int


def solve_leq(A: Sequence[Sequence], b: Sequence) -> LeqResult:
    """Decide whether some rational x (unrestricted in sign) satisfies A x <= b."""
    A = _frac_rows(A)
    m = len(A)
    nv = len(A[0]) if m else 0
    if m == 0:
        return LeqResult(True, [F0] * nv, None, 0)
    # x = p - q, one slack per row
    rows = [r + [-v for v in r] + [F1 if c == i else F0 for c in range(m)] for i, r in enumerate(A)]
    res = phase_one(rows, b)
    if res.feasible:
        x = [res.x[c] - res.x[nv + c] for c in range(nv)]
        return LeqResult(True, x, None, res.pivots)
    y = [-pi for pi in res.duals]
    return LeqResult(False, None, y, res.pivots)


def check_leq_point(A, b, x) -> bool:
    return all(sum(Fraction(a) * v for a, v in zip(row, x)) <= Fraction(bi) for row, bi in zip(A, b))


def check_farkas(A, b, y) -> bool:
    """True when y certifies that A x <= b has no solution."""
    if any(v < 0 for v in y):
        return False
    nv = len(A[0]) if A else 0
    for c in range(nv):
        if sum(Fraction(A[r][c]) * y[r] for r in range(len(A))) != 0:
            return False
    return sum(Fraction(bi) * yi for bi, yi in zip(b, y)) < 0


def solve_nonneg_eq(A: Sequence[Sequence], b: Sequence) -> list | None:
    """A point x >= 0 with A x = b, or None."""
    res = phase_one(A, b)
    return res.x if res.feasible else None
