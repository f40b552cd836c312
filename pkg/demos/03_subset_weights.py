"""Subset sums of many PSD matrices: weights, alternating sums, levels.

With m matrices A_1..A_m and A_J = sum over J, the values d(A_J) carry a
lot of structure:

  * they decompose into nonnegative subset weights x_J,
  * their alternating sum over subset sizes is nonnegative for suitable
    exponents, with a sharpness profile given by finite differences of x^r,
  * their size-level averages are convex in the level.
"""

import numpy as np

from gmflab import (
    GmfSpec,
    RandomInstanceConfig,
    convex_fn,
    decompose_subset_weights,
    finite_difference_f,
    random_psd,
    slack_alternating,
    slack_convex_three_level,
    slack_pairwise,
    slack_three_level,
)

spec = GmfSpec.per(2)
mats = random_psd(RandomInstanceConfig(n=2, m=4, seed=7))

# Nonnegative decomposition d(A_J) = sum of x_L over nonempty L <= J.
w = decompose_subset_weights(spec, mats)
print("subset weights (mask -> x):")
for mask in sorted(w.weights, key=lambda t: (bin(t).count("1"), t)):
    print(f"  {mask:04b}  x = {w.weights[mask]:+.6f}")
print("minimum weight:", w.min_weight, "(theory: >= 0)")

# Alternating subset-size sum, valid for r in {1..m-2} union [m-1, inf).
for r in (1.0, 2.0, 3.0, 4.5):
    rep = slack_alternating(spec, mats, r)
    print(f"alternating sum, r = {r}: slack = {rep.slack:+.6f}  {rep.verdict}")

# On all-ones scalars the alternating sum IS the m-th finite difference of
# x^r at 0, so its sign table explains exactly which r fail.
print("\nfinite differences f(4, r):")
for r in (1.0, 1.5, 2.0, 2.5, 3.0, 3.5):
    print(f"  f(4, {r}) = {finite_difference_f(4, r):+.6f}")

# Pairwise comparison: the total plus (m-2) singles dominates all pairs.
print("\npairwise:", slack_pairwise(spec, mats).verdict)

# Level averages t_q of d(A_J)^r are convex in q; same with any convex
# transform in place of the power (which then needs no r >= 2).
rep = slack_three_level(spec, mats, 1, 3, 4, 2.0)
print("three-level power  (k,l,p)=(1,3,4), r=2  :", rep.verdict)
rep = slack_convex_three_level(spec, mats, 1, 3, 4, convex_fn("x^1.5"))
print("three-level convex (k,l,p)=(1,3,4), x^1.5:", rep.verdict)
