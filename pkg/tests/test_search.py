import json

import numpy as np
import pytest

import gmflab.search as search_mod
from gmflab.errors import ReproductionFailed
from gmflab.gmf import GmfSpec
from gmflab.inequalities import EQUALITY, VIOLATED
from gmflab.matrices import RandomInstanceConfig
from gmflab.search import (
    SearchConfig,
    inequality_ids,
    ones_scalars,
    r_grid,
    random_search,
    rank_one_pair_instance,
    reproduce,
    scan_r,
    sharp_instance,
)


def make_config(inequality="theorem2_1", spec=None, n=2, m=3, seed=7, r=(2.0,),
                trials=25, **extra):
    spec = spec or GmfSpec.det(n)
    return SearchConfig(
        inequality_id=inequality,
        spec=spec,
        instance=RandomInstanceConfig(n=n, m=m, seed=seed),
        r_values=tuple(r),
        trials=trials,
        extra=dict(extra),
    )


# --- grids ---------------------------------------------------------------------


def test_r_grid_endpoints():
    g = r_grid(1.0, 2.0, 0.25)
    assert g == (1.0, 1.25, 1.5, 1.75, 2.0)
    assert r_grid(1.0, 1.0, 0.5) == (1.0,)


def test_r_grid_validation():
    with pytest.raises(ValueError):
        r_grid(0.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        r_grid(1.0, 2.0, 0.0)
    with pytest.raises(ValueError):
        r_grid(2.0, 1.0, 0.1)


def test_refining_grid_contains_coarse_points():
    coarse = r_grid(1.0, 3.0, 0.5)
    fine = r_grid(1.0, 3.0, 0.25)
    assert set(coarse) <= set(fine)


# --- config validation -----------------------------------------------------------


def test_config_validation():
    with pytest.raises(KeyError):
        make_config(inequality="nope")
    with pytest.raises(ValueError):
        make_config(trials=0)
    with pytest.raises(ValueError):
        make_config(r=())
    with pytest.raises(ValueError):
        make_config(r=(-1.0,))
    assert "theorem2_1" in inequality_ids()


# --- scan ------------------------------------------------------------------------


def test_scan_scalar_boundary_profile():
    spec = GmfSpec.det(1)
    grid = r_grid(1.0, 2.0, 0.05)
    result = scan_r("theorem2_1", spec, ones_scalars(3), grid)
    assert result.evaluated == len(grid)
    for r, rep in zip(grid, result.reports):
        if abs(r - 1.0) < 1e-9 or abs(r - 2.0) < 1e-9:
            assert rep.verdict == EQUALITY
        else:
            assert rep.verdict == VIOLATED, r


def test_scan_in_range_all_hold():
    spec = GmfSpec.det(1)
    result = scan_r("theorem2_1", spec, ones_scalars(3), r_grid(2.0, 5.0, 0.25))
    assert not [rep for rep in result.reports if rep.verdict == VIOLATED]


def test_scan_alternating_m4_sign_pattern():
    spec = GmfSpec.det(1)
    grid = r_grid(1.0, 3.0, 0.1)
    result = scan_r("alternating_sum", spec, ones_scalars(4), grid)
    for r, rep in zip(grid, result.reports):
        if 2.0 + 1e-9 < r < 3.0 - 1e-9:
            assert rep.verdict == VIOLATED, r
        else:
            assert rep.slack >= -rep.tolerance, r


def test_scan_rejects_r_free_inequality():
    with pytest.raises(ValueError):
        scan_r("pairwise_sum", GmfSpec.det(1), ones_scalars(3), (1.0,))


def test_monotone_refinement():
    spec = GmfSpec.det(1)
    mats = ones_scalars(3)
    coarse = scan_r("theorem2_1", spec, mats, r_grid(1.0, 2.0, 0.25))
    fine = scan_r("theorem2_1", spec, mats, r_grid(1.0, 2.0, 0.125))
    assert fine.worst.slack <= coarse.worst.slack + 1e-15


# --- random search ------------------------------------------------------------------


def test_search_deterministic():
    cfg = make_config(r=(2.3,), trials=40)
    r1 = random_search(cfg)
    r2 = random_search(cfg)
    assert r1.to_report_lines() == r2.to_report_lines()
    s1, s2 = r1.summary(), r2.summary()
    assert s1 == s2


def test_search_worst_is_minimum():
    cfg = make_config(r=(2.0, 3.0), trials=30)
    res = random_search(cfg)
    assert res.worst.slack == min(rep.slack for rep in res.reports)
    assert res.evaluated == 60


def test_search_in_range_no_violations():
    cfg = make_config(spec=GmfSpec.per(3), n=3, r=(2.3,), trials=200)
    res = random_search(cfg)
    assert not res.violations


def test_search_finds_known_violation_via_trial_zero():
    cfg = make_config(spec=GmfSpec.per(2), n=2, r=(1.4,), trials=5)
    res = random_search(cfg)
    assert res.violations
    assert res.worst.slack < -0.01
    rep, mats = res.violation_instances[0]
    assert rep.verdict == VIOLATED
    assert np.array_equal(mats[0], rank_one_pair_instance()[0])


def test_sharp_instance_lookup():
    assert sharp_instance("theorem2_1", GmfSpec.per(2), 2, 3) is not None
    assert sharp_instance("theorem2_1", GmfSpec.det(1), 1, 3) is not None
    assert sharp_instance("theorem2_1", GmfSpec.det(3), 3, 3) is None
    assert sharp_instance("subset_weights", GmfSpec.det(2), 2, 4) is None


def test_search_subset_weights():
    cfg = make_config(inequality="subset_weights", spec=GmfSpec.det(2), n=2, m=4,
                      r=(), trials=100)
    res = random_search(cfg)
    assert not res.violations


def test_search_three_level_with_extras():
    cfg = make_config(inequality="three_level_power", spec=GmfSpec.det(2), n=2, m=4,
                      r=(2.0,), trials=25, k=2, l=3, p=4)
    res = random_search(cfg)
    assert not res.violations


def test_search_convex_with_phi_name():
    cfg = make_config(inequality="three_level_convex", spec=GmfSpec.per(2), n=2, m=3,
                      r=(), trials=25, k=1, l=2, p=3, phi="x^1.5")
    res = random_search(cfg)
    assert not res.violations


def test_search_tensor_three_term():
    cfg = make_config(inequality="tensor_three_term", n=2, r=(), trials=25, power=2)
    res = random_search(cfg)
    assert not res.violations


def test_search_product_power():
    spec = GmfSpec.product([GmfSpec.det(1), GmfSpec.per(2)])
    cfg = SearchConfig(
        inequality_id="product_power",
        spec=spec,
        instance=RandomInstanceConfig(n=2, m=3, seed=17),
        r_values=(2.0,),
        trials=25,
    )
    res = random_search(cfg)
    assert not res.violations
    # deterministic rerun
    assert random_search(cfg).to_report_lines() == res.to_report_lines()


def test_search_partition_power():
    cfg = make_config(inequality="partition_power", spec=GmfSpec.per(2), n=2, m=3,
                      r=(1.5,), trials=25, partition=[[0], [1, 2]])
    res = random_search(cfg)
    assert not res.violations


# --- built-in reference computations ---------------------------------------------------


def test_reproduce_scalar_boundary():
    res = reproduce("eg2_2")
    by_r = {rep.params["r"]: rep for rep in res.reports}
    assert by_r[1.0].verdict == EQUALITY
    assert by_r[2.0].verdict == EQUALITY
    assert by_r[1.5].slack < 0
    assert abs(by_r[1.5].slack - (3.0**1.5 + 3 - 3 * 2.0**1.5)) < 1e-12


def test_reproduce_rank_one_violation():
    res = reproduce("eg2_3")
    assert res.worst.slack < -0.01
    assert res.worst.verdict == VIOLATED


def test_reproduce_finite_difference_table():
    res = reproduce("finite_diff")
    assert res.evaluated > 0
    ms = {rep.params["m"] for rep in res.reports}
    assert ms == {3, 4, 5}


def test_reproduce_majorization_gap():
    res = reproduce("majorization_gap")
    by_n = {rep.params["n"]: rep for rep in res.reports}
    assert by_n[2].slack == pytest.approx(-1.0)
    assert by_n[2].verdict == VIOLATED
    # the same vector shape satisfies the relation from n = 3 on
    assert by_n[3].slack > 0
    assert by_n[4].slack > 0


def test_reproduce_unknown_id():
    with pytest.raises(KeyError):
        reproduce("eg9_9")


def test_reproduce_failure_carries_expectation(monkeypatch):
    # neutralize the sharp instance: closed forms still match at x = 0 but
    # the violation depth check must then fail
    monkeypatch.setattr(
        search_mod, "rank_one_pair_instance", lambda x=0.0: rank_one_pair_instance(0.0)
    )
    with pytest.raises(ReproductionFailed) as info:
        reproduce("eg2_3")
    assert info.value.expected is not None


def test_report_lines_parse_as_json():
    res = reproduce("eg2_2")
    for line in res.to_report_lines():
        obj = json.loads(line)
        assert obj["inequality_id"] == "theorem2_1"
