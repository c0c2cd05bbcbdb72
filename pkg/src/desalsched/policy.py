"""Closed-form two-threshold dispatch policy.

For a fixed tariff the optimal schedule depends on renewable generation
``g`` only through four breakpoints. Below ``gamma_im`` the plant imports
and runs the thermal unit at the level whose marginal electricity value is
the buy price; above ``gamma_ex`` it exports with the sell price; between
the two it stays islanded (z = 0), with the RO unit absorbing whatever the
thermal unit and renewables produce until it hits a flow bound.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .model import (
    ConfigError,
    DispatchPoint,
    PlantConfig,
    RodpParams,
    Tariff,
    dispatch_from_waters,
    inverse_marginal_cost,
    validate_config,
)


class Regime(str, enum.Enum):
    LOW = "LOW"
    INTERIOR = "INTERIOR"
    HIGH = "HIGH"


class Zone(str, enum.Enum):
    IMPORT = "IMPORT"
    NZ_LOWER = "NZ_LOWER"
    NZ_INTERIOR = "NZ_INTERIOR"
    NZ_UPPER = "NZ_UPPER"
    EXPORT = "EXPORT"

    @property
    def net_zero(self) -> bool:
        return self in (Zone.NZ_LOWER, Zone.NZ_INTERIOR, Zone.NZ_UPPER)


ZONES = tuple(Zone)


@dataclass(frozen=True)
class ThresholdSet:
    regime: Regime
    w_h_im: float
    w_h_nz: float
    w_h_ex: float
    ro_lo: float
    ro_hi: float
    gamma_im: float
    g_lo: float
    g_hi: float
    gamma_ex: float

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "w_h_im": self.w_h_im,
            "w_h_nz": self.w_h_nz,
            "w_h_ex": self.w_h_ex,
            "ro_lo": self.ro_lo,
            "ro_hi": self.ro_hi,
            "gamma_im": self.gamma_im,
            "g_lo": self.g_lo,
            "g_hi": self.g_hi,
            "gamma_ex": self.gamma_ex,
        }

    @classmethod
    def from_dict(cls, doc) -> "ThresholdSet":
        kw = {k: float(doc[k]) for k in cls.__dataclass_fields__ if k != "regime"}
        return cls(regime=Regime(doc["regime"]), **kw)


def classify_regime(tariff: Tariff, rodp: RodpParams) -> Regime:
    """Place the RO unit's water value per kWh against ``[pi_sell, pi_buy]``."""
    value = rodp.alpha_r * tariff.pi_water
    if value < tariff.pi_sell:
        return Regime.LOW
    if value > tariff.pi_buy:
        return Regime.HIGH
    return Regime.INTERIOR


def foc_water_level(pi_s: float, config: PlantConfig, tariff: Tariff) -> float:
    """Thermal water output maximizing water + electricity value minus fuel cost.

    ``pi_s`` is the value of one kWh of thermal electricity. Stationarity is
    ``C'(p) = alpha_h * pi_water + beta_h * pi_s``; the solution is projected
    onto the thermal flow bounds.
    """
    tdp = config.tdp
    if not tdp.enabled:
        return tdp.w_min_h
    m = tdp.alpha_h * tariff.pi_water + tdp.beta_h * pi_s
    p = inverse_marginal_cost(m, tdp.cost, (tdp.w_min_h / tdp.alpha_h, tdp.w_max_h / tdp.alpha_h))
    return min(max(tdp.alpha_h * p, tdp.w_min_h), tdp.w_max_h)


def compute_thresholds(config: PlantConfig, tariff: Tariff) -> ThresholdSet:
    report = validate_config(config, tariff)
    if not report.ok:
        raise ConfigError(report.violations)
    rodp, eta = config.rodp, config.tdp.eta_h
    regime = classify_regime(tariff, rodp)
    if regime is Regime.HIGH:
        ro_lo = ro_hi = rodp.w_max_r
    elif regime is Regime.LOW:
        ro_lo = ro_hi = rodp.w_min_r
    else:
        ro_lo, ro_hi = rodp.w_min_r, rodp.w_max_r

    w_im = foc_water_level(tariff.pi_buy, config, tariff)
    w_ex = foc_water_level(tariff.pi_sell, config, tariff)
    # Outside INTERIOR the islanded level is pinned to an end of [w_ex, w_im];
    # the interior net-zero segment then has zero width.
    nz_value = min(max(rodp.alpha_r * tariff.pi_water, tariff.pi_sell), tariff.pi_buy)
    w_nz = foc_water_level(nz_value, config, tariff)

    return ThresholdSet(
        regime=regime,
        w_h_im=w_im,
        w_h_nz=w_nz,
        w_h_ex=w_ex,
        ro_lo=ro_lo,
        ro_hi=ro_hi,
        gamma_im=ro_lo / rodp.alpha_r - w_im / eta,
        g_lo=ro_lo / rodp.alpha_r - w_nz / eta,
        g_hi=ro_hi / rodp.alpha_r - w_nz / eta,
        gamma_ex=ro_hi / rodp.alpha_r - w_ex / eta,
    )


def zone_codes(g, ts: ThresholdSet) -> np.ndarray:
    """Integer index into :data:`ZONES` for each generation value."""
    g = np.asarray(g, dtype=float)
    return np.select(
        [g < ts.gamma_im, g < ts.g_lo, g <= ts.g_hi, g <= ts.gamma_ex],
        [0, 1, 2, 3],
        default=4,
    )


def zone_of(g: float, ts: ThresholdSet) -> Zone:
    return ZONES[int(zone_codes(g, ts))]


def policy_waters(g, ts: ThresholdSet, config: PlantConfig):
    """Optimal ``(w_h, w_r)`` as arrays for an array of generation values.

    Sloped segments are clamped to the neighbouring constant levels so that
    rounding can never break monotonicity at a breakpoint.
    """
    g = np.asarray(g, dtype=float)
    eta, alpha_r = config.tdp.eta_h, config.rodp.alpha_r
    code = zone_codes(g, ts)
    lower = np.clip(eta * (ts.ro_lo / alpha_r - g), ts.w_h_nz, ts.w_h_im)
    upper = np.clip(eta * (ts.ro_hi / alpha_r - g), ts.w_h_ex, ts.w_h_nz)
    w_h = np.choose(code, [ts.w_h_im, lower, ts.w_h_nz, upper, ts.w_h_ex])
    w_h = np.clip(w_h, config.tdp.w_min_h, config.tdp.w_max_h)

    interior = np.clip(alpha_r * (g + ts.w_h_nz / eta), ts.ro_lo, ts.ro_hi)
    w_r = np.where(code <= 1, ts.ro_lo, np.where(code == 2, interior, ts.ro_hi))
    w_r = np.clip(w_r, config.rodp.w_min_r, config.rodp.w_max_r)
    return w_h, w_r


def optimal_dispatch(g: float, ts: ThresholdSet, config: PlantConfig) -> DispatchPoint:
    w_h, w_r = policy_waters(g, ts, config)
    return dispatch_from_waters(float(w_h), float(w_r), g, config)
