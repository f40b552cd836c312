"""Power inequalities on sums of PSD matrices, and where they break.

For any matrix function d of the group-sum kind and PSD matrices A, B, C:

    d(A+B+C)^r + d(A)^r + d(B)^r + d(C)^r
        >= d(A+B)^r + d(A+C)^r + d(B+C)^r      for r in {1} union [2, inf)

The exponent range is sharp.  This script shows the equality cases, the
gap inside (1, 2) on scalars, and a genuine 2x2 permanent violation at
r = 1.4.
"""

import numpy as np

from gmflab import (
    GmfSpec,
    slack_theorem_2_1,
    slack_three_term_basic,
    slack_two_term_power,
)
from gmflab.search import ones_scalars, r_grid, rank_one_pair_instance, scan_r

one = np.ones((1, 1))

# Two matrices first: d(A+B)^p >= d(A)^p + d(B)^p for p >= 1.
rep = slack_two_term_power(GmfSpec.per(2), np.ones((2, 2)), np.ones((2, 2)), 1.0)
print("two-term, permanent of all-ones:", rep.lhs, ">=", rep.rhs, "->", rep.verdict)

# Three matrices, r = 1 is the classical statement.
rep = slack_three_term_basic(GmfSpec.det(1), one, one, one)
print("three-term basic on scalars: slack =", rep.slack, rep.verdict)

# Scalars A = B = C = [1] trace out slack(r) = 3^r + 3 - 3*2^r: zero at the
# range endpoints r = 1, 2 and strictly negative in between.
print("\nscalar slack profile over r in [1, 2]:")
scan = scan_r("theorem2_1", GmfSpec.det(1), ones_scalars(3), r_grid(1.0, 2.0, 0.25))
for rep in scan.reports:
    print(f"  r = {rep.params['r']:<5} slack = {rep.slack:+.6f}  {rep.verdict}")

# Even away from scalars the range cannot be widened: an explicit 2x2
# permanent instance dips below zero at r = 1.4.
A, B, C = rank_one_pair_instance(0.17)
rep = slack_theorem_2_1(GmfSpec.per(2), A, B, C, 1.4)
print("\n2x2 permanent instance at r = 1.4: slack =", rep.slack, rep.verdict)

# Inside the proven range the same instance is safe.
for r in (1.0, 2.0, 3.0):
    rep = slack_theorem_2_1(GmfSpec.per(2), A, B, C, r)
    print(f"  same instance at r = {r}: slack = {rep.slack:+.6f}  {rep.verdict}")
