"""Shared fixtures-as-functions: the published parameter set and a
randomized ensemble of valid plants.

Ensemble ranges (log-uniform unless noted):
    alpha_h, eta_h in [0.02, 1]; alpha_r in [0.05, 1]
    a in [1e-3, 0.2] $/BTU; b in [1e-5, 1e-2] $/BTU^2
    pi_sell in [0.02, 0.3]; pi_buy = pi_sell * [1, 5] (10% exactly equal)
    pi_water in [0.05, 10]
    w_max in [50, 5000] per unit; w_min = U[0, 0.3] * w_max (30% zero)
    demand_floor = U[0, 1] * (w_min_h + w_min_r)
"""
import math

import numpy as np

from desalsched.model import CostParams, PlantConfig, RodpParams, Tariff, TdpParams

REFERENCE_PRICES = {"LOW": 0.2, "INTERIOR": 1.5, "HIGH": 5.0}


def reference_config(demand_floor=0.0, w_min_h=0.0, w_min_r=0.0):
    return PlantConfig(
        tdp=TdpParams(alpha_h=0.1, eta_h=0.1, w_min_h=w_min_h, w_max_h=8333.0, cost=CostParams(a=0.05, b=0.001)),
        rodp=RodpParams(alpha_r=0.25, w_min_r=w_min_r, w_max_r=8333.0),
        demand_floor=demand_floor,
    )


def reference_tariff(pi_water=1.5):
    return Tariff(pi_water=pi_water, pi_buy=0.4, pi_sell=0.1)


def _logu(rng, lo, hi):
    return math.exp(rng.uniform(math.log(lo), math.log(hi)))


def random_instance(rng):
    w_max_h = _logu(rng, 50, 5000)
    w_max_r = _logu(rng, 50, 5000)
    w_min_h = 0.0 if rng.random() < 0.3 else rng.uniform(0, 0.3) * w_max_h
    w_min_r = 0.0 if rng.random() < 0.3 else rng.uniform(0, 0.3) * w_max_r
    pi_sell = _logu(rng, 0.02, 0.3)
    pi_buy = pi_sell if rng.random() < 0.1 else pi_sell * _logu(rng, 1, 5)
    config = PlantConfig(
        tdp=TdpParams(
            alpha_h=_logu(rng, 0.02, 1), eta_h=_logu(rng, 0.02, 1),
            w_min_h=w_min_h, w_max_h=w_max_h,
            cost=CostParams(a=_logu(rng, 1e-3, 0.2), b=_logu(rng, 1e-5, 1e-2)),
        ),
        rodp=RodpParams(alpha_r=_logu(rng, 0.05, 1), w_min_r=w_min_r, w_max_r=w_max_r),
        demand_floor=rng.uniform(0, 1) * (w_min_h + w_min_r),
    )
    tariff = Tariff(pi_water=_logu(rng, 0.05, 10), pi_buy=pi_buy, pi_sell=pi_sell)
    return config, tariff


def ensemble(n, seed=20250101):
    rng = np.random.default_rng(seed)
    return [random_instance(rng) for _ in range(n)]


def g_scale(config):
    """Generation large enough to push any plant into export."""
    return config.rodp.w_max_r / config.rodp.alpha_r + config.tdp.w_max_h / config.tdp.eta_h


def g_samples(ts, config, n=64, rng=None):
    """n generation values covering every zone, including the breakpoints."""
    rng = rng or np.random.default_rng(0)
    top = 1.25 * max(ts.gamma_ex, 0.0) + 0.05 * g_scale(config)
    special = []
    for b in (ts.gamma_im, ts.g_lo, ts.g_hi, ts.gamma_ex):
        if b >= 0:
            special += [b, b * (1 + 1e-7) + 1e-7]
    uniform = np.linspace(0.0, top, n - len(special))
    return np.concatenate([uniform, special])
