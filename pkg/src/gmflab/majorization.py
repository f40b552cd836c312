"""Weak majorization and power-sum comparisons on real vectors."""

from __future__ import annotations

import numpy as np

from .errors import NegativeEntry

PARTIAL_SUM_TOL = 1e-9


def _sorted_desc(u) -> np.ndarray:
    u = np.asarray(u, dtype=float).ravel()
    if u.size and not np.all(np.isfinite(u)):
        raise ValueError("entries must be finite")
    return np.sort(u, kind="stable")[::-1]


def weak_majorizes(v, u) -> bool:
    """True iff u is weakly majorized by v (u `prec_w` v).

    For every k, the sum of the k largest entries of u must not exceed the
    corresponding sum for v; each comparison gets its own tolerance
    1e-9 * (1 + max |partial sum|), since partial sums grow with k.  The
    shorter vector is zero-padded.
    """
    us = _sorted_desc(u)
    vs = _sorted_desc(v)
    n = max(us.size, vs.size)
    us = np.pad(us, (0, n - us.size))
    vs = np.pad(vs, (0, n - vs.size))
    cu = np.cumsum(us)
    cv = np.cumsum(vs)
    tol = PARTIAL_SUM_TOL * (1.0 + np.maximum(np.abs(cu), np.abs(cv)))
    return bool(np.all(cu <= cv + tol))


def weak_majorization_margin(v, u) -> float:
    """min over k of (sum of k largest of v) - (sum of k largest of u).

    Nonnegative exactly when u `prec_w` v holds with zero tolerance; the
    most negative partial-sum gap otherwise.
    """
    us = _sorted_desc(u)
    vs = _sorted_desc(v)
    n = max(us.size, vs.size)
    us = np.pad(us, (0, n - us.size))
    vs = np.pad(vs, (0, n - vs.size))
    return float(np.min(np.cumsum(vs) - np.cumsum(us)))


def majorizes(v, u) -> bool:
    """True iff u `prec` v: weak majorization plus equal totals."""
    if not weak_majorizes(v, u):
        return False
    su = float(np.sum(np.asarray(u, dtype=float)))
    sv = float(np.sum(np.asarray(v, dtype=float)))
    return abs(su - sv) <= PARTIAL_SUM_TOL * (1.0 + max(abs(su), abs(sv)))


def power_sum(u, p: float) -> float:
    """sum_i u_i^p for nonnegative entries and p >= 1.

    Power sums with p >= 1 respect weak majorization on nonnegative
    vectors, which is what the inequality suites lean on.
    """
    u = np.asarray(u, dtype=float).ravel()
    if np.any(u < 0):
        raise NegativeEntry("power_sum requires nonnegative entries")
    if p < 1:
        raise ValueError("power_sum requires p >= 1")
    return float(np.sum(u**p))
