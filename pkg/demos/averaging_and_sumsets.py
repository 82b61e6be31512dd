"""Permutation averaging and a Kneser audit, side by side.

The average number of nonnegative edges over all relabelings is computed
exactly, by the closed form and by seeded Monte Carlo.

    python3 demos/averaging_and_sumsets.py
"""

from fractions import Fraction

from mmslab.assignments import Assignment
from mmslab.averaging import (permutation_expectation_exact, permutation_expectation_formula,
                              permutation_expectation_mc)
from mmslab.cyclic import build_matching
from mmslab.sumsets import exhaustive_kneser_audit

H = build_matching(2, 3)
f = Assignment.of([Fraction(3), Fraction(2), Fraction(-1), Fraction(-1), Fraction(1, 2), Fraction(0)])
ex = permutation_expectation_exact(f, H)
mc = permutation_expectation_mc(f, H, 200_000, seed=1)
print(f"exact   {ex.expectation}")
print(f"formula {permutation_expectation_formula(f, H)}")
print(f"MC      {float(mc.expectation):.4f} +/- {mc.standard_error:.4f}")

rep = exhaustive_kneser_audit(5)
print(f"\nKneser bound over every nonempty A, B in Z_k for k <= 5: {rep.tested} pairs, ok={rep.ok}")
