"""Generalized matrix functions: determinant, permanent, and immanants.

A matrix function here is built from a permutation subgroup G of S_n and a
linear character chi:  d(A) = sum_sigma chi(sigma) prod_i A[i, sigma(i)].
This script walks through the built-in evaluators and shows that the
independent tensor-space route gives the same numbers.
"""

import numpy as np

from gmflab import (
    GmfSpec,
    Permutation,
    RandomInstanceConfig,
    closure,
    cyclic_character,
    cyclic_group,
    determinant,
    gmf,
    gmf_naive,
    gmf_tensor_oracle,
    permanent_ryser,
    random_psd,
    sign_character,
    symmetric_group,
)

# The two classics.  det uses Gaussian elimination, per uses Ryser's
# inclusion-exclusion with Gray-code subset updates.
A = np.array([[2.0, 1.0], [1.0, 2.0]])
print("det [[2,1],[1,2]] =", determinant(A).value)
print("per [[2,1],[1,2]] =", permanent_ryser(A).value)

# Both are special cases of the group sum: S_2 with the sign character is
# the determinant, with the trivial character the permanent.
s2 = symmetric_group(2)
det_spec = GmfSpec.custom(s2, sign_character(s2))
print("S_2 sign immanant  =", gmf_naive(det_spec, A).value)

# Any subgroup works.  Here: the cyclic group C_3 inside S_3, with one of
# its complex characters.  On a PSD matrix the value is still real and
# nonnegative; the imaginary parts cancel and the leftover roundoff is
# reported alongside the value.
c3 = cyclic_group(3)
imm_spec = GmfSpec.custom(c3, cyclic_character(c3, 1))
P = random_psd(RandomInstanceConfig(n=3, m=1, seed=42))[0]
value = gmf(imm_spec, P)
print("C_3 immanant on a random PSD matrix:", value.value,
      " (imag residue", value.imag_residue, ")")

# Groups can be built by closure from generators.
g = closure(4, [Permutation.from_cycles(4, (0, 1, 2, 3))])
print("closure of a 4-cycle has", len(g), "elements")

# Independent cross-check: d(A) equals a quadratic form <v, (kron^n A) v>
# in the n^n-dimensional tensor space, evaluated matrix-free.
for spec in (GmfSpec.det(3), GmfSpec.per(3), imm_spec):
    direct = gmf_naive(spec, P).value
    oracle = gmf_tensor_oracle(spec, P).value
    print(f"{spec.spec_id:>16}: enumeration {direct:.12f}  tensor {oracle:.12f}")
