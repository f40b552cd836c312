"""Operator-level statements behind the scalar inequalities.

The scalar results all descend from Loewner-order inequalities between
Kronecker powers.  This script checks those directly: tensor-power
superadditivity, the seven-term three-matrix combination, its mixed-size
block version, and the matrix-root form.
"""

import numpy as np

from gmflab import (
    RandomInstanceConfig,
    GmfSpec,
    hermitian_eig,
    kron_power,
    loewner_geq,
    matrix_root,
    random_psd,
    slack_root_superadditivity,
    slack_tensor_three,
    slack_tensor_three_blocks,
)

A, B, C = random_psd(RandomInstanceConfig(n=2, m=3, seed=101))

# kron^2(A+B) >= kron^2 A + kron^2 B in the PSD order.
ok, lam = loewner_geq(kron_power(A + B, 2), kron_power(A, 2) + kron_power(B, 2))
print("kron^2(A+B) >= kron^2 A + kron^2 B:", ok, " lambda_min =", lam)

# The three-matrix seven-term combination stays PSD as well.
rep = slack_tensor_three(A, B, C, 2)
print("seven-term combination, n = 2: lambda_min =", rep.slack, rep.verdict)

# Mixed block sizes (1 and 2) under a single Kronecker product.
s = random_psd(RandomInstanceConfig(n=1, m=3, seed=102))
rep = slack_tensor_three_blocks([s[0], A], [s[1], B], [s[2], C])
print("mixed-size blocks (1, 2):          lambda_min =", rep.slack, rep.verdict)

# Matrix p-th roots come from the spectral decomposition; the built-in
# eigensolver is a cyclic Jacobi iteration.
w, U = hermitian_eig(A)
print("\neigenvalues of A:", np.round(w, 6))
R = matrix_root(A, 2)
print("|| (A^(1/2))^2 - A ||_max =", float(np.max(np.abs(R @ R - A))))

# Root superadditivity: det(A+B)^q >= det(A)^q + det(B)^q for q >= 1/n.
rep = slack_root_superadditivity(GmfSpec.det(2), A, B, 1.0)
print("root superadditivity (det, q = 1/2):", rep.verdict, " slack =", rep.slack)
