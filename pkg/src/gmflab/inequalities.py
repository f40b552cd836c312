"""Matrix-function inequalities as slack functionals.

Each functional evaluates LHS - RHS of one inequality on a concrete
instance (a matrix-function spec, PSD matrices, and parameters) and wraps
the outcome in a SlackReport: nonnegative slack (within tolerance) means
the inequality holds on that instance.

All inputs are assumed positive semidefinite; matrix-function values are
computed with a residue check (imaginary mass must stay below
1e-9 * (max diagonal)^n) and clamped at zero before non-integer powers are
taken, so roundoff never turns into NaN.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadLevels, NumericalFailure, ResidueBreach
from .gmf import GmfSpec, _gmf_complex, psd_value_scale
from .matrices import as_square_matrix, assert_psd, kron, max_abs, min_eigenvalue

HOLDS = "HOLDS"
VIOLATED = "VIOLATED"
EQUALITY = "EQUALITY"

SLACK_TOL_COEFF = 1e-8
RESIDUE_TOL = 1e-9
WEIGHT_TOL = 1e-8


@dataclass(frozen=True)
class SlackReport:
    """One inequality evaluation, ready for JSON-lines serialization."""

    inequality_id: str
    spec_id: str
    params: dict
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    verdict: str
    instance_digest: str

    def to_json_line(self) -> str:
        obj = {
            "inequality_id": self.inequality_id,
            "spec_id": self.spec_id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "instance_digest": self.instance_digest,
        }
        return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _verdict(slack: float, tolerance: float) -> str:
    if abs(slack) <= tolerance:
        return EQUALITY
    return VIOLATED if slack < -tolerance else HOLDS


def make_report(inequality_id, spec_id, params, lhs, rhs, digest, tolerance=None) -> SlackReport:
    slack = lhs - rhs
    if tolerance is None:
        tolerance = SLACK_TOL_COEFF * (1.0 + max(abs(lhs), abs(rhs)))
    return SlackReport(
        inequality_id=inequality_id,
        spec_id=spec_id,
        params=params,
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        tolerance=float(tolerance),
        verdict=_verdict(slack, tolerance),
        instance_digest=digest,
    )


def digest_matrices(*matrices) -> str:
    """Stable 16-hex digest of an ordered collection of matrices."""
    h = hashlib.sha256()
    for M in matrices:
        M = np.ascontiguousarray(np.asarray(M, dtype=complex))
        h.update(str(M.shape).encode())
        h.update(M.tobytes())
    return h.hexdigest()[:16]


def _d(spec: GmfSpec, A) -> float:
    """Checked matrix-function value on PSD input: real, residue-bounded, >= 0."""
    z = _gmf_complex(spec, A)
    scale = psd_value_scale(spec, A)
    if abs(z.imag) > RESIDUE_TOL * scale:
        raise ResidueBreach(
            f"imaginary residue {abs(z.imag):.3e} exceeds {RESIDUE_TOL * scale:.3e}"
        )
    if z.real < -RESIDUE_TOL * scale:
        raise NumericalFailure(
            f"matrix-function value {z.real:.3e} negative beyond roundoff bound"
        )
    return max(z.real, 0.0)


def _rpow(x: float, r: float) -> float:
    # x is a clamped nonnegative matrix-function value; 0^r = 0 for r > 0.
    # Exponents below 1 (probing runs only) would amplify roundoff-level
    # values, so anything within 1e-12 of zero is treated as zero there.
    if x <= 0.0 or (r < 1.0 and x < 1e-12):
        return 0.0
    return x**r


# ---------------------------------------------------------------------------
# two and three matrices


def slack_two_term_power(spec: GmfSpec, A, B, p: float) -> SlackReport:
    """d(A+B)^p >= d(A)^p + d(B)^p for p >= 1."""
    A, B = as_square_matrix(A), as_square_matrix(B)
    lhs = _rpow(_d(spec, A + B), p)
    rhs = _rpow(_d(spec, A), p) + _rpow(_d(spec, B), p)
    return make_report(
        "two_term_power", spec.spec_id, {"p": p}, lhs, rhs, digest_matrices(A, B)
    )


def slack_root_superadditivity(spec: GmfSpec, A, B, p: float) -> SlackReport:
    """d((A+B)^(1/n))^p >= d(A^(1/n))^p + d(B^(1/n))^p for p >= 1.

    For the determinant this is det(A+B)^q >= det(A)^q + det(B)^q with
    q = p/n (any q >= 1/n); the report carries q in that case.
    """
    from .matrices import matrix_root

    A, B = as_square_matrix(A), as_square_matrix(B)
    n = spec.degree
    lhs = _rpow(_d(spec, matrix_root(A + B, n)), p)
    rhs = _rpow(_d(spec, matrix_root(A, n)), p) + _rpow(_d(spec, matrix_root(B, n)), p)
    params = {"p": p}
    if spec.kind == "det":
        params["q"] = p / n
    return make_report(
        "root_superadditivity", spec.spec_id, params, lhs, rhs, digest_matrices(A, B)
    )


def slack_three_term_basic(spec: GmfSpec, A, B, C) -> SlackReport:
    """d(A+B+C) + d(A) >= d(A+B) + d(A+C)."""
    A, B, C = (as_square_matrix(X) for X in (A, B, C))
    lhs = _d(spec, A + B + C) + _d(spec, A)
    rhs = _d(spec, A + B) + _d(spec, A + C)
    return make_report(
        "three_term_basic", spec.spec_id, {}, lhs, rhs, digest_matrices(A, B, C)
    )


def slack_theorem_2_1(spec: GmfSpec, A, B, C, r: float) -> SlackReport:
    """d(A+B+C)^r + d(A)^r + d(B)^r + d(C)^r >= sum of the pairwise terms.

    Holds for r in {1} union [2, inf); other r > 0 may be evaluated to
    probe sharpness of that range.
    """
    if r <= 0:
        raise ValueError("exponent r must be > 0")
    A, B, C = (as_square_matrix(X) for X in (A, B, C))
    lhs = (
        _rpow(_d(spec, A + B + C), r)
        + _rpow(_d(spec, A), r)
        + _rpow(_d(spec, B), r)
        + _rpow(_d(spec, C), r)
    )
    rhs = (
        _rpow(_d(spec, A + B), r)
        + _rpow(_d(spec, A + C), r)
        + _rpow(_d(spec, B + C), r)
    )
    return make_report(
        "theorem2_1", spec.spec_id, {"r": r}, lhs, rhs, digest_matrices(A, B, C)
    )


# ---------------------------------------------------------------------------
# m matrices, subsets encoded as bitmasks (bit i <-> matrix i)

SUBSET_M_CAP = 12


def subset_masks(m: int):
    """Nonempty submasks of {0..m-1} in increasing popcount, then numeric, order."""
    return sorted(range(1, 1 << m), key=lambda mask: (mask.bit_count(), mask))


def _subset_sums(matrices) -> list:
    """sums[mask] = sum of the matrices selected by mask (index 0 unused)."""
    m = len(matrices)
    sums = [None] * (1 << m)
    for mask in range(1, 1 << m):
        low = mask & -mask
        rest = mask ^ low
        M = matrices[low.bit_length() - 1]
        sums[mask] = M if rest == 0 else M + sums[rest]
    return sums


def _subset_values(spec: GmfSpec, matrices, r: float = 1.0) -> dict[int, float]:
    sums = _subset_sums(matrices)
    return {
        mask: _rpow(_d(spec, sums[mask]), r) for mask in range(1, 1 << len(matrices))
    }


def _check_m(matrices, minimum: int):
    m = len(matrices)
    if m < minimum:
        raise BadLevels(f"need at least {minimum} matrices, got {m}")
    if m > SUBSET_M_CAP:
        raise BadLevels(f"subset machinery capped at m = {SUBSET_M_CAP}")
    return m


@dataclass(frozen=True)
class SubsetWeights:
    """Nonnegative decomposition d(A_J) = sum of x_L over nonempty L <= J.

    weights and values are keyed by subset bitmask; `values` holds the raw
    d(A_J) table the recursion consumed.
    """

    m: int
    weights: dict[int, float]
    values: dict[int, float] = field(repr=False)

    @property
    def scale(self) -> float:
        return 1.0 + max(abs(v) for v in self.values.values())

    @property
    def min_weight(self) -> float:
        return min(self.weights.values())


def decompose_subset_weights(spec: GmfSpec, matrices) -> SubsetWeights:
    """Peel d(A_J) into subset weights x_J by recursion over the mask lattice.

    x_J = d(A_J) - sum of x_L over proper nonempty submasks L; the theory
    says every x_J is nonnegative when the inputs are PSD.
    """
    m = _check_m(matrices, 1)
    matrices = [assert_psd(M, what=f"matrix {i}") for i, M in enumerate(matrices)]
    values = _subset_values(spec, matrices)
    weights: dict[int, float] = {}
    for mask in subset_masks(m):
        acc = 0.0
        sub = (mask - 1) & mask
        while sub:
            acc += weights[sub]
            sub = (sub - 1) & mask
        weights[mask] = values[mask] - acc
    return SubsetWeights(m, weights, values)


def subset_weights_report(spec: GmfSpec, matrices) -> SlackReport:
    """Minimum subset weight as a slack (nonnegative iff the decomposition holds)."""
    w = decompose_subset_weights(spec, matrices)
    tol = WEIGHT_TOL * w.scale
    return make_report(
        "subset_weights",
        spec.spec_id,
        {"m": w.m},
        w.min_weight,
        0.0,
        digest_matrices(*matrices),
        tolerance=tol,
    )


def slack_alternating(spec: GmfSpec, matrices, r: float) -> SlackReport:
    """Alternating subset sum: sum_j (-1)^(m-j) sum_{|J|=j} d(A_J)^r >= 0.

    Holds for r in {1,...,m-2} union [m-1, inf).
    """
    if r <= 0:
        raise ValueError("exponent r must be > 0")
    m = _check_m(matrices, 2)
    values = _subset_values(spec, matrices, r)
    lhs = rhs = 0.0
    for mask, val in values.items():
        if (m - mask.bit_count()) % 2 == 0:
            lhs += val
        else:
            rhs += val
    return make_report(
        "alternating_sum",
        spec.spec_id,
        {"m": m, "r": r},
        lhs,
        rhs,
        digest_matrices(*matrices),
    )


def slack_pairwise(spec: GmfSpec, matrices) -> SlackReport:
    """d(A_1+...+A_m) + (m-2) * sum_j d(A_j) >= sum_{i<j} d(A_i + A_j)."""
    m = _check_m(matrices, 3)
    matrices = [as_square_matrix(M) for M in matrices]
    total = matrices[0]
    for M in matrices[1:]:
        total = total + M
    lhs = _d(spec, total) + (m - 2) * sum(_d(spec, M) for M in matrices)
    rhs = sum(
        _d(spec, matrices[i] + matrices[j])
        for i in range(m)
        for j in range(i + 1, m)
    )
    return make_report(
        "pairwise_sum", spec.spec_id, {"m": m}, lhs, rhs, digest_matrices(*matrices)
    )


def _check_levels(m: int, k: int, l: int, p: int):
    if not (1 <= k < l < p <= m):
        raise BadLevels(f"levels must satisfy 1 <= k < l < p <= m, got {(k, l, p, m)}")


def _level_sum(values: dict[int, float], size: int) -> float:
    return sum(v for mask, v in values.items() if mask.bit_count() == size)


def slack_three_level(spec: GmfSpec, matrices, k: int, l: int, p: int, r: float) -> SlackReport:
    """Convexity of the level averages t_q = sum_{|J|=q} d(A_J)^r / (q C(m,q)).

    The inequality (l-k)(t_p - t_l) >= (p-l)(t_l - t_k) holds for r >= 2
    (and r = 1); other r > 0 may be probed.
    """
    if r <= 0:
        raise ValueError("exponent r must be > 0")
    m = _check_m(matrices, 3)
    _check_levels(m, k, l, p)
    values = _subset_values(spec, matrices, r)
    t = {q: _level_sum(values, q) / (q * math.comb(m, q)) for q in (k, l, p)}
    lhs = (l - k) * t[p] + (p - l) * t[k]
    rhs = (p - k) * t[l]
    return make_report(
        "three_level_power",
        spec.spec_id,
        {"m": m, "k": k, "l": l, "p": p, "r": r},
        lhs,
        rhs,
        digest_matrices(*matrices),
    )


# ---------------------------------------------------------------------------
# convex transforms


@dataclass(frozen=True)
class ConvexFn:
    """A scalar transform on [0, inf) with a declared regularity class.

    declared_class is "CONVEX" or "P_k" (all derivatives up to order k
    nonnegative); "P_inf" means every derivative.  Membership is declared
    by the registry and spot-checked numerically, not proved.
    """

    name: str
    fn: Callable[[float], float]
    declared_class: str

    def __call__(self, x: float) -> float:
        return self.fn(x)

    @property
    def is_convex(self) -> bool:
        if self.declared_class == "CONVEX":
            return True
        order = self.p_order
        return order is not None and order >= 2

    @property
    def p_order(self) -> int | None:
        if not self.declared_class.startswith("P_"):
            return None
        tail = self.declared_class[2:]
        return 10**9 if tail == "inf" else int(tail)


CONVEX_FUNCTIONS = {
    f.name: f
    for f in (
        ConvexFn("x", lambda x: x, "P_inf"),
        ConvexFn("x^1.5", lambda x: x**1.5, "P_2"),
        ConvexFn("x^2", lambda x: x * x, "P_inf"),
        ConvexFn("exp", math.exp, "P_inf"),
    )
}


def convex_fn(name: str) -> ConvexFn:
    try:
        return CONVEX_FUNCTIONS[name]
    except KeyError:
        raise KeyError(
            f"unknown convex function {name!r}; have {sorted(CONVEX_FUNCTIONS)}"
        ) from None


def sampled_convexity_check(phi: ConvexFn, lo=0.0, hi=5.0, points=41, tol=1e-9) -> bool:
    """Midpoint convexity on a uniform grid."""
    xs = np.linspace(lo, hi, points)
    for a in xs:
        for b in xs:
            if phi((a + b) / 2.0) > (phi(a) + phi(b)) / 2.0 + tol:
                return False
    return True


def sampled_derivative_check(phi: ConvexFn, order: int, lo=0.1, hi=4.0, points=20,
                             step=1e-4, tol=1e-6) -> bool:
    """Forward finite differences of orders 1..order are all nonnegative on a grid.

    The acceptance margin folds in the roundoff floor 2^i * eps * max|phi|
    / step^i, which dominates the true i-th difference for small steps and
    large i; pick a coarser step when checking orders beyond 2.
    """
    xs = np.linspace(lo, hi, points)
    fmax = max(abs(phi(x + j * step)) for x in xs for j in range(order + 1))
    for i in range(1, order + 1):
        coeffs = [(-1) ** (i - j) * math.comb(i, j) for j in range(i + 1)]
        noise = 2.0**i * np.finfo(float).eps * fmax / step**i
        for x in xs:
            diff = sum(c * phi(x + j * step) for j, c in enumerate(coeffs))
            if diff / step**i < -(tol + 8.0 * noise):
                return False
    return True


def slack_convex_three_level(spec: GmfSpec, matrices, k: int, l: int, p: int,
                             phi: ConvexFn) -> SlackReport:
    """Level averages of Phi(d(A_J)) are convex in the level for convex Phi.

    t_j = sum_{|J|=j} Phi(d(A_J)) / C(m,j);
    slack = (l-k)(t_p - t_l) - (p-l)(t_l - t_k).  No lower bound on the
    growth of Phi is needed, unlike the pure power version.
    """
    if not phi.is_convex:
        raise ValueError(f"{phi.name!r} is not declared convex")
    m = _check_m(matrices, 3)
    _check_levels(m, k, l, p)
    values = _subset_values(spec, matrices)
    t = {
        q: sum(phi(v) for mask, v in values.items() if mask.bit_count() == q)
        / math.comb(m, q)
        for q in (k, l, p)
    }
    lhs = (l - k) * t[p] + (p - l) * t[k]
    rhs = (p - k) * t[l]
    return make_report(
        "three_level_convex",
        spec.spec_id,
        {"m": m, "k": k, "l": l, "p": p, "phi": phi.name},
        lhs,
        rhs,
        digest_matrices(*matrices),
    )


def slack_partition_schur(spec: GmfSpec, matrices, partition, p: float) -> SlackReport:
    """d(A_1+...+A_m)^p >= sum over blocks I of d(A_I)^p, any partition, p >= 1."""
    if p < 1:
        raise ValueError("power p must be >= 1")
    m = _check_m(matrices, 1)
    blocks = [sorted(int(i) for i in block) for block in partition]
    flat = sorted(i for block in blocks for i in block)
    if flat != list(range(m)):
        raise BadLevels(f"blocks {blocks} do not partition 0..{m - 1}")
    matrices = [as_square_matrix(M) for M in matrices]
    total = matrices[0]
    for M in matrices[1:]:
        total = total + M
    lhs = _rpow(_d(spec, total), p)
    rhs = 0.0
    for block in blocks:
        S = matrices[block[0]]
        for i in block[1:]:
            S = S + matrices[i]
        rhs += _rpow(_d(spec, S), p)
    return make_report(
        "partition_power",
        spec.spec_id,
        {"m": m, "p": p, "partition": blocks},
        lhs,
        rhs,
        digest_matrices(*matrices),
    )


# ---------------------------------------------------------------------------
# operator-level (Loewner order) checks


def _kron_chain(blocks) -> np.ndarray:
    out = as_square_matrix(blocks[0])
    for X in blocks[1:]:
        out = kron(out, X)
    return out


def _tensor_three_report(inequality_id, params, terms_pos, terms_neg, digest) -> SlackReport:
    D = sum(terms_pos) - sum(terms_neg)
    lam = min_eigenvalue(D)
    tol = SLACK_TOL_COEFF * (1.0 + max_abs(D))
    return make_report(inequality_id, "operator", params, lam, 0.0, digest, tolerance=tol)


def slack_tensor_three(A, B, C, n: int) -> SlackReport:
    """Loewner-order version of the three-matrix inequality for kron powers.

    slack = smallest eigenvalue of
    kron^n(A+B+C) + kron^n A + kron^n B + kron^n C
    - kron^n(A+B) - kron^n(A+C) - kron^n(B+C).
    """
    from .matrices import kron_power

    A, B, C = (as_square_matrix(X) for X in (A, B, C))
    pos = [kron_power(A + B + C, n), kron_power(A, n), kron_power(B, n), kron_power(C, n)]
    neg = [kron_power(A + B, n), kron_power(A + C, n), kron_power(B + C, n)]
    return _tensor_three_report(
        "tensor_three_term", {"n": n}, pos, neg, digest_matrices(A, B, C)
    )


def slack_tensor_three_blocks(As, Bs, Cs) -> SlackReport:
    """Mixed-size variant: one Kronecker factor per block, possibly of
    different sizes, same seven-term combination."""
    As = [as_square_matrix(X) for X in As]
    Bs = [as_square_matrix(X) for X in Bs]
    Cs = [as_square_matrix(X) for X in Cs]
    if not (len(As) == len(Bs) == len(Cs)):
        raise BadLevels("block lists must have equal length")
    sizes = [X.shape[0] for X in As]
    pos = [
        _kron_chain([a + b + c for a, b, c in zip(As, Bs, Cs)]),
        _kron_chain(As),
        _kron_chain(Bs),
        _kron_chain(Cs),
    ]
    neg = [
        _kron_chain([a + b for a, b in zip(As, Bs)]),
        _kron_chain([a + c for a, c in zip(As, Cs)]),
        _kron_chain([b + c for b, c in zip(Bs, Cs)]),
    ]
    return _tensor_three_report(
        "tensor_three_term",
        {"block_sizes": sizes},
        pos,
        neg,
        digest_matrices(*As, *Bs, *Cs),
    )


def slack_product_gmf(spec: GmfSpec, triples, r: float) -> SlackReport:
    """Three-matrix power inequality with d replaced by a product function.

    `triples` holds one (A_i, B_i, C_i) tuple per block; sums are blockwise.
    """
    if spec.kind != "product":
        raise BadLevels("slack_product_gmf needs a product spec")
    if r <= 0:
        raise ValueError("exponent r must be > 0")
    triples = [tuple(as_square_matrix(X) for X in t) for t in triples]
    if len(triples) != len(spec.factors):
        raise BadLevels(f"expected {len(spec.factors)} block triples, got {len(triples)}")
    As = [t[0] for t in triples]
    Bs = [t[1] for t in triples]
    Cs = [t[2] for t in triples]

    def dval(*selections):
        blocks = [sum(sel[i] for sel in selections) for i in range(len(triples))]
        return _d(spec, blocks)

    lhs = (
        _rpow(dval(As, Bs, Cs), r)
        + _rpow(dval(As), r)
        + _rpow(dval(Bs), r)
        + _rpow(dval(Cs), r)
    )
    rhs = (
        _rpow(dval(As, Bs), r) + _rpow(dval(As, Cs), r) + _rpow(dval(Bs, Cs), r)
    )
    return make_report(
        "product_power",
        spec.spec_id,
        {"r": r},
        lhs,
        rhs,
        digest_matrices(*As, *Bs, *Cs),
    )


def finite_difference_f(m: int, r: float) -> float:
    """m-th forward difference of x^r at 0: sum_j (-1)^(m-j) C(m,j) j^r.

    Zero at r = 1..m-1; its sign alternates on the integer gaps below m-1,
    which is exactly the sharpness profile of the alternating subset sum on
    all-ones scalar instances.
    """
    if m < 3:
        raise ValueError("m must be >= 3")
    if r <= 0:
        raise ValueError("r must be > 0")
    return float(sum((-1) ** (m - j) * math.comb(m, j) * j**r for j in range(1, m + 1)))
