"""Randomized and grid search for inequality violations and boundaries.

A search names an inequality from the registry, a matrix-function spec, an
instance recipe and a set of exponents, then evaluates the slack on many
seeded instances.  Instances known to sit on the sharp boundary of a
theorem's range are injected as trial 0 of matching random searches, so a
search can never miss them by sampling luck.  Everything is deterministic
given the seed; per-trial streams are derived as mix(seed, trial), so
results do not depend on evaluation order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ReproductionFailed
from .gmf import GmfSpec, gmf
from .inequalities import (
    EQUALITY,
    HOLDS,
    VIOLATED,
    SlackReport,
    convex_fn,
    digest_matrices,
    finite_difference_f,
    make_report,
    slack_alternating,
    slack_pairwise,
    slack_partition_schur,
    slack_product_gmf,
    slack_root_superadditivity,
    slack_tensor_three,
    slack_theorem_2_1,
    slack_three_level,
    slack_three_term_basic,
    slack_two_term_power,
    slack_convex_three_level,
    subset_weights_report,
)
from .majorization import weak_majorization_margin, weak_majorizes
from .matrices import RandomInstanceConfig, derive_seed, random_psd


@dataclass(frozen=True)
class InequalityEntry:
    """Registry row: how to draw instances for and evaluate one inequality."""

    inequality_id: str
    matrix_count: int | None  # None = use the configured m
    takes_r: bool
    evaluate: "callable"


def _eval_theorem_2_1(spec, mats, r, extra):
    return slack_theorem_2_1(spec, *mats, r)


def _eval_three_term_basic(spec, mats, r, extra):
    return slack_three_term_basic(spec, *mats)


def _eval_two_term_power(spec, mats, r, extra):
    return slack_two_term_power(spec, *mats, r)


def _eval_root_superadditivity(spec, mats, r, extra):
    return slack_root_superadditivity(spec, *mats, r)


def _eval_alternating(spec, mats, r, extra):
    return slack_alternating(spec, mats, r)


def _eval_pairwise(spec, mats, r, extra):
    return slack_pairwise(spec, mats)


def _eval_subset_weights(spec, mats, r, extra):
    return subset_weights_report(spec, mats)


def _eval_three_level(spec, mats, r, extra):
    return slack_three_level(spec, mats, extra["k"], extra["l"], extra["p"], r)


def _eval_three_level_convex(spec, mats, r, extra):
    phi = extra["phi"]
    if isinstance(phi, str):
        phi = convex_fn(phi)
    return slack_convex_three_level(spec, mats, extra["k"], extra["l"], extra["p"], phi)


def _eval_partition(spec, mats, r, extra):
    return slack_partition_schur(spec, mats, extra["partition"], r)


def _eval_tensor_three(spec, mats, r, extra):
    return slack_tensor_three(*mats, n=extra.get("power", 2))


def _eval_product(spec, triples, r, extra):
    return slack_product_gmf(spec, triples, r)


REGISTRY: dict[str, InequalityEntry] = {
    e.inequality_id: e
    for e in (
        InequalityEntry("theorem2_1", 3, True, _eval_theorem_2_1),
        InequalityEntry("three_term_basic", 3, False, _eval_three_term_basic),
        InequalityEntry("two_term_power", 2, True, _eval_two_term_power),
        InequalityEntry("root_superadditivity", 2, True, _eval_root_superadditivity),
        InequalityEntry("alternating_sum", None, True, _eval_alternating),
        InequalityEntry("pairwise_sum", None, False, _eval_pairwise),
        InequalityEntry("subset_weights", None, False, _eval_subset_weights),
        InequalityEntry("three_level_power", None, True, _eval_three_level),
        InequalityEntry("three_level_convex", None, False, _eval_three_level_convex),
        InequalityEntry("partition_power", None, True, _eval_partition),
        InequalityEntry("tensor_three_term", 3, False, _eval_tensor_three),
        InequalityEntry("product_power", 3, True, _eval_product),
    )
}


def inequality_ids() -> list[str]:
    return sorted(REGISTRY)


@dataclass(frozen=True)
class SearchConfig:
    """A reproducible search: inequality + spec + instances + exponents."""

    inequality_id: str
    spec: GmfSpec
    instance: RandomInstanceConfig
    r_values: tuple[float, ...] = ()
    trials: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.inequality_id not in REGISTRY:
            raise KeyError(
                f"unknown inequality {self.inequality_id!r}; have {inequality_ids()}"
            )
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        entry = REGISTRY[self.inequality_id]
        if entry.takes_r and not self.r_values:
            raise ValueError(f"{self.inequality_id} needs at least one r value")
        for r in self.r_values:
            if r <= 0:
                raise ValueError("r values must be > 0")

    @property
    def seed(self) -> int:
        return self.instance.seed

    @property
    def spec_id(self) -> str:
        return self.spec.spec_id


@dataclass
class SearchResult:
    """All reports of a search plus the worst case and the violations."""

    reports: list[SlackReport]
    violation_instances: list[tuple[SlackReport, list]]
    evaluated: int
    wall_time: float

    @property
    def worst(self) -> SlackReport:
        return min(self.reports, key=lambda rep: rep.slack)

    @property
    def violations(self) -> list[SlackReport]:
        return [rep for rep in self.reports if rep.verdict == VIOLATED]

    def to_report_lines(self) -> list[str]:
        # wall_time deliberately stays off disk: report files must be
        # byte-identical across reruns with the same seed.
        return [rep.to_json_line() for rep in self.reports]

    def summary(self) -> dict:
        counts = {HOLDS: 0, EQUALITY: 0, VIOLATED: 0}
        for rep in self.reports:
            counts[rep.verdict] += 1
        return {
            "evaluated": self.evaluated,
            "holds": counts[HOLDS],
            "equality": counts[EQUALITY],
            "violated": counts[VIOLATED],
            "worst_slack": self.worst.slack,
            "worst": self.worst.to_json_line(),
        }


def r_grid(rmin: float, rmax: float, step: float) -> tuple[float, ...]:
    """Explicit grid rmin, rmin+step, ...; endpoints included (within 1e-9)."""
    if rmin <= 0 or step <= 0 or rmax < rmin:
        raise ValueError("need 0 < rmin <= rmax and step > 0")
    count = int(math.floor((rmax - rmin) / step + 1e-9))
    return tuple(rmin + i * step for i in range(count + 1))


def ones_scalars(count: int) -> list[np.ndarray]:
    return [np.ones((1, 1), dtype=complex) for _ in range(count)]


def rank_one_pair_instance(x: float = 0.17):
    """The sharp 2x2 permanent triple: A = B = all-ones, C = x * [[1,-1],[-1,1]]."""
    A = np.ones((2, 2), dtype=complex)
    B = np.ones((2, 2), dtype=complex)
    C = x * np.array([[1.0, -1.0], [-1.0, 1.0]], dtype=complex)
    return [A, B, C]


def sharp_instance(inequality_id: str, spec: GmfSpec, n: int, count: int):
    """Known boundary instance for trial-0 injection, or None."""
    if inequality_id in ("theorem2_1", "three_term_basic"):
        if spec.kind == "per" and n == 2:
            return rank_one_pair_instance()
        if n == 1:
            return ones_scalars(3)
    if inequality_id in ("alternating_sum", "pairwise_sum") and n == 1:
        return ones_scalars(count)
    return None


def _trial_matrices(config: SearchConfig, trial: int):
    entry = REGISTRY[config.inequality_id]
    inst = config.instance
    trial_seed = derive_seed(inst.seed, trial)
    if config.inequality_id == "product_power":
        # one (A_i, B_i, C_i) triple per block, block sizes from the spec
        sizes = config.spec.block_degrees
        rows = []
        idx = 0
        for _ in range(3):
            row = []
            for nb in sizes:
                cfg = RandomInstanceConfig(
                    n=nb, m=1, seed=derive_seed(trial_seed, idx),
                    scale=inst.scale, field=inst.field,
                )
                row.append(random_psd(cfg)[0])
                idx += 1
            rows.append(row)
        As, Bs, Cs = rows
        return [tuple(t) for t in zip(As, Bs, Cs)]
    count = entry.matrix_count if entry.matrix_count is not None else inst.m
    if trial == 0:
        known = sharp_instance(config.inequality_id, config.spec, inst.n, count)
        if known is not None:
            return known
    cfg = RandomInstanceConfig(
        n=inst.n, m=count, seed=trial_seed, scale=inst.scale, field=inst.field
    )
    return random_psd(cfg)


def random_search(config: SearchConfig) -> SearchResult:
    """Evaluate `trials` seeded instances (times every r value) and collect reports."""
    entry = REGISTRY[config.inequality_id]
    t0 = time.perf_counter()
    reports: list[SlackReport] = []
    violation_instances: list[tuple[SlackReport, list]] = []
    r_values = config.r_values if entry.takes_r else (None,)
    for trial in range(config.trials):
        mats = _trial_matrices(config, trial)
        for r in r_values:
            rep = entry.evaluate(config.spec, mats, r, config.extra)
            reports.append(rep)
            if rep.verdict == VIOLATED:
                violation_instances.append((rep, mats))
    return SearchResult(
        reports=reports,
        violation_instances=violation_instances,
        evaluated=len(reports),
        wall_time=time.perf_counter() - t0,
    )


def scan_r(inequality_id: str, spec: GmfSpec, matrices, r_values,
           extra: dict | None = None) -> SearchResult:
    """Slack of one fixed instance across a grid of exponents."""
    entry = REGISTRY[inequality_id]
    if not entry.takes_r:
        raise ValueError(f"{inequality_id} has no exponent to scan")
    t0 = time.perf_counter()
    reports = [entry.evaluate(spec, matrices, r, extra or {}) for r in r_values]
    result = SearchResult(
        reports=reports,
        violation_instances=[
            (rep, matrices) for rep in reports if rep.verdict == VIOLATED
        ],
        evaluated=len(reports),
        wall_time=time.perf_counter() - t0,
    )
    return result


# ---------------------------------------------------------------------------
# built-in reference computations with asserted outcomes

REFERENCE_IDS = ("eg2_2", "eg2_3", "finite_diff", "majorization_gap")


def _fail(name, expected, actual):
    raise ReproductionFailed(
        f"{name}: expected {expected}, got {actual}", expected=expected, actual=actual
    )


def _reproduce_scalar_power_boundary() -> SearchResult:
    """All-ones scalar triple: slack(r) = 3^r + 3 - 3*2^r, zero at r = 1 and 2,
    strictly negative in between."""
    spec = GmfSpec.det(1)
    mats = ones_scalars(3)
    rs = (1.0, 1.25, 1.5, 1.75, 2.0, 3.0)
    result = scan_r("theorem2_1", spec, mats, rs)
    for r, rep in zip(rs, result.reports):
        closed = 3.0**r + 3.0 - 3.0 * 2.0**r
        if abs(rep.slack - closed) > 1e-12:
            _fail("scalar slack closed form", closed, rep.slack)
        if r in (1.0, 2.0) and rep.verdict != EQUALITY:
            _fail(f"verdict at r={r}", EQUALITY, rep.verdict)
        if 1.0 < r < 2.0 and not rep.slack < 0:
            _fail(f"sign at r={r}", "negative", rep.slack)
    return result


def _reproduce_rank_one_violation() -> SearchResult:
    """The 2x2 permanent triple violates the power inequality at r = 1.4."""
    x = 0.17
    A, B, C = rank_one_pair_instance(x)
    spec = GmfSpec.per(2)
    expectations = [
        (A, 2.0),
        (B, 2.0),
        (C, 2.0 * x * x),
        (A + B, 8.0),
        (A + C, (1 + x) ** 2 + (1 - x) ** 2),
        (B + C, (1 + x) ** 2 + (1 - x) ** 2),
        (A + B + C, (2 + x) ** 2 + (2 - x) ** 2),
    ]
    for M, expected in expectations:
        actual = gmf(spec, M).value
        if abs(actual - expected) > 1e-12:
            _fail("permanent closed form", expected, actual)
    result = scan_r("theorem2_1", spec, [A, B, C], (1.4,))
    rep = result.reports[0]
    if not rep.slack < -0.01:
        _fail("violation depth at r=1.4", "< -0.01", rep.slack)
    if rep.verdict != VIOLATED:
        _fail("verdict at r=1.4", VIOLATED, rep.verdict)
    return result


def _finite_difference_sign(m: int, r: float) -> str:
    """Expected sign of the m-th difference of x^r at 0: "zero", "pos" or "neg"."""
    if r >= m - 1 or (abs(r - round(r)) < 1e-12 and 1 <= round(r) <= m - 1):
        if abs(r - round(r)) < 1e-12 and 1 <= round(r) <= m - 1:
            return "zero"
        return "pos"
    j = math.floor(r)  # r sits in (j, j+1)
    return "neg" if (m - j) % 2 == 0 else "pos"


def _reproduce_finite_difference_table() -> SearchResult:
    reports = []
    for m in (3, 4, 5):
        points = [float(j) for j in range(1, m)]
        points += [j + 0.5 for j in range(m)]
        points += [m - 0.5 + 1.0]
        for r in sorted(points):
            val = finite_difference_f(m, r)
            expected = _finite_difference_sign(m, r)
            if expected == "zero" and abs(val) > 1e-9:
                _fail(f"f({m},{r})", 0.0, val)
            if expected == "pos" and not val > 1e-12:
                _fail(f"f({m},{r})", "positive", val)
            if expected == "neg" and not val < -1e-12:
                _fail(f"f({m},{r})", "negative", val)
            reports.append(
                make_report(
                    "finite_difference",
                    "scalar",
                    {"m": m, "r": r},
                    val,
                    0.0,
                    digest_matrices(np.full((1, 1), m, dtype=complex)),
                    tolerance=1e-9,
                )
            )
    return SearchResult(reports, [], len(reports), 0.0)


def _reproduce_majorization_gap() -> SearchResult:
    """The n = 2 identity triple defeats weak majorization of the pairs vector.

    (4, 4, 4, 0) is not weakly majorized by (9, 1, 1, 1): the three largest
    entries sum to 12 on the left but only 11 on the right.  The same shape
    at n >= 3 does satisfy the relation (3^n outruns 3 * 2^n), so n = 2 is
    genuinely the counterexample; both facts are asserted here.
    """
    reports = []
    margins = {}
    for n in (2, 3, 4):
        v = [3.0**n, 1.0, 1.0, 1.0]
        u = [2.0**n, 2.0**n, 2.0**n, 0.0]
        margin = weak_majorization_margin(v, u)
        margins[n] = margin
        if weak_majorizes(v, u) != (n >= 3):
            _fail(f"weak majorization at n={n}", n >= 3, not n >= 3)
        reports.append(
            make_report(
                "weak_majorization",
                "vector",
                {"n": n},
                margin,
                0.0,
                digest_matrices(np.array([v, u], dtype=complex)),
                tolerance=1e-12,
            )
        )
    if abs(margins[2] - (-1.0)) > 1e-12:
        _fail("n=2 worst partial-sum gap", -1.0, margins[2])
    if not (margins[3] > 0 and margins[4] > 0):
        _fail("n>=3 margins", "positive", (margins[3], margins[4]))
    return SearchResult(reports, [], len(reports), 0.0)


def reproduce(example_id: str) -> SearchResult:
    """Run a named built-in reference computation and assert its outcome.

    Raises ReproductionFailed (with expected vs actual) when the computed
    numbers do not match; unknown ids raise KeyError.
    """
    table = {
        "eg2_2": _reproduce_scalar_power_boundary,
        "eg2_3": _reproduce_rank_one_violation,
        "finite_diff": _reproduce_finite_difference_table,
        "majorization_gap": _reproduce_majorization_gap,
    }
    if example_id not in table:
        raise KeyError(f"unknown example {example_id!r}; have {sorted(table)}")
    return table[example_id]()
