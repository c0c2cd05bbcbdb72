import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from desalsched.model import (
    ConfigError, CostParams, PlantConfig, RodpParams, Tariff, TdpParams, dispatch_from_waters, profit,
)
from desalsched.oracle import Method, certify_policy, solve_grid, solve_zonewise
from desalsched.policy import compute_thresholds, optimal_dispatch

from helpers import g_scale, reference_config, reference_tariff, random_instance


def _dist(pt, w_h, w_r):
    return math.hypot(pt.w_h - w_h, pt.w_r - w_r)


def test_grid_finds_interior_optimum():
    sol = solve_grid(0.0, reference_config(), reference_tariff(1.5), n_steps=4000)
    assert sol.method is Method.GRID
    # the ridge z = 0 is shallow, allow two lattice diagonals
    assert _dist(sol.point, 23.75, 59.375) <= 2 * sol.resolution
    assert 56.40625 - sol.error_bound <= sol.profit <= 56.40625 + 1e-9


def test_grid_low_regime_corner():
    sol = solve_grid(0.0, reference_config(), reference_tariff(0.2), n_steps=4000)
    assert _dist(sol.point, 3.5, 0.0) <= sol.resolution


def test_grid_degenerate_box():
    base = reference_config()
    cfg = PlantConfig(TdpParams(0.1, 0.1, 30.0, 30.0, base.tdp.cost), RodpParams(0.25, 7.0, 7.0))
    sol = solve_grid(123.0, cfg, reference_tariff(1.5), n_steps=5)
    assert (sol.point.w_h, sol.point.w_r) == (30.0, 7.0)
    assert sol.error_bound == 0.0


def test_grid_tie_break_is_first_in_scan():
    # zero prices and zero cost slope: every lattice point scores 0 except
    # where fuel is burnt, so the first point (w_h=0, w_r=w_min_r) wins
    cfg = PlantConfig(TdpParams(0.1, 0.1, 0.0, 10.0, CostParams(0.0, 1e-3)), RodpParams(0.25, 0.0, 10.0))
    sol = solve_grid(0.0, cfg, Tariff(0.0, 0.0, 0.0), n_steps=11)
    assert (sol.point.w_h, sol.point.w_r) == (0.0, 0.0)


def test_grid_rejects_bad_arguments():
    with pytest.raises(ValueError):
        solve_grid(0.0, reference_config(), reference_tariff(), n_steps=1)
    cfg = PlantConfig(reference_config().tdp, RodpParams(0.25, 0.0, 10.0), demand_floor=1e6)
    with pytest.raises(ConfigError, match="infeasible"):
        solve_grid(0.0, cfg, reference_tariff(), n_steps=10)
    with pytest.raises(ConfigError, match="infeasible"):
        solve_zonewise(0.0, cfg, reference_tariff())


@pytest.mark.parametrize("pw, g, w_h, w_r, expected_profit", [
    (1.5, 0.0, 23.75, 59.375, 56.40625),
    (1.5, 40000.0, 10.0, 8333.0, None),
    (5.0, 0.0, 42.5, 8333.0, None),
])
def test_zonewise_examples(pw, g, w_h, w_r, expected_profit):
    cfg, t = reference_config(), reference_tariff(pw)
    sol = solve_zonewise(g, cfg, t)
    assert sol.method is Method.ZONEWISE and sol.error_bound == 0.0
    assert sol.point.w_h == pytest.approx(w_h, rel=1e-9)
    assert sol.point.w_r == pytest.approx(w_r, rel=1e-9)
    if expected_profit is not None:
        assert sol.profit == pytest.approx(expected_profit, rel=1e-12)
    assert sol.profit == profit(sol.point, cfg, t)


def test_zonewise_high_regime_imports():
    assert solve_zonewise(0.0, reference_config(), reference_tariff(5.0)).point.z > 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_oracles_agree(seed, frac):
    cfg, t = random_instance(np.random.default_rng(seed))
    g = frac * g_scale(cfg)
    zw = solve_zonewise(g, cfg, t)
    gr = solve_grid(g, cfg, t, n_steps=300)
    assert zw.profit >= gr.profit - 1e-9
    assert zw.profit - gr.profit <= gr.error_bound


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_oracle_points_are_feasible(seed, frac):
    cfg, t = random_instance(np.random.default_rng(seed))
    g = frac * g_scale(cfg)
    for sol in (solve_zonewise(g, cfg, t), solve_grid(g, cfg, t, n_steps=50)):
        p = sol.point
        assert cfg.tdp.w_min_h <= p.w_h <= cfg.tdp.w_max_h
        assert cfg.rodp.w_min_r <= p.w_r <= cfg.rodp.w_max_r
        assert p.w_h + p.w_r >= cfg.demand_floor
        assert sol.profit == profit(p, cfg, t)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_grid_refinement(seed, frac):
    cfg, t = random_instance(np.random.default_rng(seed))
    g = frac * g_scale(cfg)
    coarse = solve_grid(g, cfg, t, n_steps=101)
    fine = solve_grid(g, cfg, t, n_steps=201)
    assert fine.profit >= coarse.profit - coarse.error_bound


def test_binding_demand_floor():
    # the floor forces more water than the unconstrained optimum
    cfg = reference_config(demand_floor=2000.0)
    t = reference_tariff(0.2)
    zw = solve_zonewise(0.0, cfg, t)
    gr = solve_grid(0.0, cfg, t, n_steps=1500)
    assert zw.point.w_h + zw.point.w_r == pytest.approx(2000.0, rel=1e-9)
    assert zw.point.w_h + zw.point.w_r >= 2000.0
    assert zw.profit >= gr.profit - 1e-9
    assert zw.profit - gr.profit <= gr.error_bound
    # brute force along the floor line
    vals = [profit(dispatch_from_waters(x, 2000.0 - x, 0.0, cfg), cfg, t) for x in np.linspace(0, 2000, 2001)]
    assert zw.profit >= max(vals) - 1e-9


def test_certify_reference_prices():
    cfg = reference_config()
    for pw in (0.2, 1.5, 5.0):
        rep = certify_policy(cfg, reference_tariff(pw), np.arange(0, 50001, 500), 0.01, n_steps=500)
        assert rep.passed, rep.message
        assert rep.worst_gap <= 0.01
        assert len(rep.samples) == 101


def test_certify_detects_corrupted_threshold():
    cfg, t = reference_config(), reference_tariff(1.5)
    ts = compute_thresholds(cfg, t)
    bad = ts.__class__(**{**ts.__dict__, "w_h_nz": ts.w_h_nz + 1})
    rep = certify_policy(cfg, t, [0.0], 0.01, n_steps=200, thresholds=bad)
    assert not rep.passed and rep.worst_gap > 0
    assert rep.samples[0].gap > 0 and not rep.samples[0].passed


def test_certify_reports_invalid_configuration():
    base = reference_config()
    cfg = PlantConfig(TdpParams(0.1, 0.1, 10.0, 5.0, base.tdp.cost), base.rodp)
    rep = certify_policy(cfg, reference_tariff(), [0.0])
    assert not rep.passed and "invalid configuration" in rep.message
    assert rep.to_dict()["samples"] == []


def test_certification_json_fields():
    rep = certify_policy(reference_config(), reference_tariff(1.5), [0.0, 1000.0], n_steps=100)
    doc = rep.to_dict()
    assert set(doc["samples"][0]) >= {"g", "policy_profit", "zonewise_profit", "grid_profit", "gap", "pass"}


def test_policy_never_beats_oracle_bound_at_samples():
    cfg, t = reference_config(), reference_tariff(1.5)
    ts = compute_thresholds(cfg, t)
    for g in (0.0, 20000.0, 33150.0, 45000.0):
        pol = profit(optimal_dispatch(g, ts, cfg), cfg, t)
        assert pol == pytest.approx(solve_zonewise(g, cfg, t).profit, abs=1e-6)
