"""Plant and tariff types, unit conversions, and the payment/profit functions.

Canonical units: water flow in m^3/h, electricity in kWh (per hour), fuel
in BTU, money in $. All evaluation functions accept floats or numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np


class ConfigError(ValueError):
    """Raised when a plant/tariff document fails validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration: " + "; ".join(self.violations))


class ConvexCost:
    """Fuel cost contract for the thermal unit.

    Subclasses provide ``evaluate`` and ``marginal``. The default
    ``inverse_marginal`` bisects on the (nondecreasing) marginal cost, so a
    new cost shape only needs the two derivatives-free methods to plug in.
    """

    rtol = 1e-9

    def evaluate(self, p):
        raise NotImplementedError

    def marginal(self, p):
        raise NotImplementedError

    def violations(self) -> list[str]:
        return []

    def inverse_marginal(self, m: float, lo: float = 0.0, hi: float = math.inf) -> float:
        """Return p in [lo, hi] with marginal(p) closest to m."""
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        if self.marginal(lo) >= m:
            return lo
        if math.isinf(hi):
            hi = max(1.0, 2.0 * lo)
            while self.marginal(hi) < m:
                hi *= 2.0
                if hi > 1e300:
                    raise ValueError("marginal cost never reaches target")
        elif self.marginal(hi) <= m:
            return hi
        a, b = lo, hi
        while b - a > self.rtol * max(1.0, abs(b)):
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if self.marginal(mid) < m:
                a = mid
            else:
                b = mid
        return 0.5 * (a + b)


@dataclass(frozen=True)
class CostParams(ConvexCost):
    """Quadratic fuel cost ``b p^2 + a p``."""

    a: float
    b: float

    def evaluate(self, p):
        return self.b * p**2 + self.a * p

    def marginal(self, p):
        return 2.0 * self.b * p + self.a

    def violations(self) -> list[str]:
        out = []
        if not self.b > 0:
            out.append(f"cost b must be > 0 (strict convexity), got {self.b}")
        if not self.a >= 0:
            out.append(f"cost a must be >= 0 (nondecreasing cost), got {self.a}")
        return out

    def inverse_marginal(self, m: float, lo: float = 0.0, hi: float = math.inf) -> float:
        if not self.b > 0:
            raise ValueError("quadratic cost with b <= 0 is not strictly convex")
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        return min(max((m - self.a) / (2.0 * self.b), lo), hi)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class TdpParams:
    alpha_h: float
    eta_h: float
    w_min_h: float
    w_max_h: float
    cost: ConvexCost
    beta_h: float = field(init=False)

    def __post_init__(self):
        beta = self.alpha_h / self.eta_h if self.eta_h != 0 else math.inf
        object.__setattr__(self, "beta_h", beta)

    @property
    def enabled(self) -> bool:
        return self.alpha_h > 0

    def to_dict(self) -> dict:
        return {
            "alpha_h": self.alpha_h,
            "eta_h": self.eta_h,
            "beta_h": self.beta_h,
            "w_min_h": self.w_min_h,
            "w_max_h": self.w_max_h,
            "cost": self.cost.to_dict(),
        }


@dataclass(frozen=True)
class RodpParams:
    alpha_r: float
    w_min_r: float
    w_max_r: float

    def to_dict(self) -> dict:
        return {"alpha_r": self.alpha_r, "w_min_r": self.w_min_r, "w_max_r": self.w_max_r}


@dataclass(frozen=True)
class Tariff:
    pi_water: float
    pi_buy: float
    pi_sell: float

    def replace(self, **kw) -> "Tariff":
        return Tariff(**{**self.to_dict(), **{k: v for k, v in kw.items() if v is not None}})

    def to_dict(self) -> dict:
        return {"pi_water": self.pi_water, "pi_buy": self.pi_buy, "pi_sell": self.pi_sell}


@dataclass(frozen=True)
class PlantConfig:
    tdp: TdpParams
    rodp: RodpParams
    demand_floor: float = 0.0

    def to_dict(self) -> dict:
        return {
            "tdp": self.tdp.to_dict(),
            "rodp": self.rodp.to_dict(),
            "demand_floor": self.demand_floor,
        }


@dataclass(frozen=True)
class DispatchPoint:
    w_h: float
    w_r: float
    q_h: float
    q_r: float
    p_h: float
    g: float
    z: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("w_h", "w_r", "q_h", "q_r", "p_h", "g", "z")}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_config(config: PlantConfig, tariff: Tariff, *, require_sizing: bool = True) -> ValidationReport:
    """Check every type invariant; return an itemized report.

    ``require_sizing=False`` skips the demand-floor sizing check so that the
    oracles can be used on plants where the floor binds.
    """
    v: list[str] = []
    tdp, rodp = config.tdp, config.rodp
    values = {
        "alpha_h": tdp.alpha_h, "eta_h": tdp.eta_h, "w_min_h": tdp.w_min_h, "w_max_h": tdp.w_max_h,
        "alpha_r": rodp.alpha_r, "w_min_r": rodp.w_min_r, "w_max_r": rodp.w_max_r,
        "demand_floor": config.demand_floor, "pi_water": tariff.pi_water,
        "pi_buy": tariff.pi_buy, "pi_sell": tariff.pi_sell,
    }
    for name, val in values.items():
        if not math.isfinite(val):
            v.append(f"{name} must be finite, got {val}")
    if v:
        return ValidationReport(tuple(v))

    if tariff.pi_buy < tariff.pi_sell:
        v.append(f"pi_buy < pi_sell ({tariff.pi_buy} < {tariff.pi_sell})")
    if tariff.pi_sell < 0:
        v.append(f"pi_sell must be >= 0, got {tariff.pi_sell}")
    if tariff.pi_water < 0:
        v.append(f"pi_water must be >= 0, got {tariff.pi_water}")

    v.extend(tdp.cost.violations())
    if tdp.alpha_h < 0:
        v.append(f"alpha_h must be >= 0, got {tdp.alpha_h}")
    if not tdp.eta_h > 0:
        v.append(f"eta_h must be > 0, got {tdp.eta_h}")
    if not rodp.alpha_r > 0:
        v.append(f"alpha_r must be > 0, got {rodp.alpha_r}")
    if tdp.w_min_h < 0 or tdp.w_min_h > tdp.w_max_h:
        v.append(f"TDP bounds inverted or negative: [{tdp.w_min_h}, {tdp.w_max_h}]")
    if rodp.w_min_r < 0 or rodp.w_min_r > rodp.w_max_r:
        v.append(f"RODP bounds inverted or negative: [{rodp.w_min_r}, {rodp.w_max_r}]")
    if tdp.alpha_h == 0 and tdp.w_min_h > 0:
        v.append("thermal unit disabled (alpha_h = 0) but w_min_h > 0")
    if config.demand_floor < 0:
        v.append(f"demand_floor must be >= 0, got {config.demand_floor}")
    if require_sizing and tdp.w_min_h + rodp.w_min_r < config.demand_floor:
        v.append(
            f"sizing assumption violated: w_min_h + w_min_r = {tdp.w_min_h + rodp.w_min_r}"
            f" < demand_floor = {config.demand_floor}"
        )
    return ValidationReport(tuple(v))


def flows(w_h, w_r, g, config: PlantConfig):
    """Return ``(p_h, q_h, q_r, z)`` for given water outputs and generation."""
    tdp = config.tdp
    q_h = w_h / tdp.eta_h
    q_r = w_r / config.rodp.alpha_r
    if tdp.alpha_h > 0:
        p_h = w_h / tdp.alpha_h
    else:
        p_h = w_h * 0.0
    z = q_r - q_h - g
    return p_h, q_h, q_r, z


def dispatch_from_waters(w_h: float, w_r: float, g: float, config: PlantConfig) -> DispatchPoint:
    """Build the full operating point from the two water outputs.

    Box bounds are not checked here.
    """
    if w_h < 0 or w_r < 0 or g < 0:
        raise ValueError(f"negative input: w_h={w_h}, w_r={w_r}, g={g}")
    if config.tdp.alpha_h == 0 and w_h > 0:
        raise ValueError("thermal unit disabled but assigned output")
    p_h, q_h, q_r, z = flows(float(w_h), float(w_r), float(g), config)
    return DispatchPoint(w_h=float(w_h), w_r=float(w_r), q_h=q_h, q_r=q_r, p_h=p_h, g=float(g), z=z)


def water_revenue(w_h, w_r, tariff: Tariff):
    return tariff.pi_water * (w_h + w_r)


def electricity_payment(z, tariff: Tariff):
    """Net-metering bill: positive when the plant pays, negative when paid."""
    if np.ndim(z) == 0:
        return tariff.pi_buy * max(z, 0.0) - tariff.pi_sell * -min(z, 0.0)
    return tariff.pi_buy * np.maximum(z, 0.0) - tariff.pi_sell * -np.minimum(z, 0.0)


def tdp_cost(p_h, cost: ConvexCost):
    return cost.evaluate(p_h)


def marginal_cost(p_h, cost: ConvexCost):
    return cost.marginal(p_h)


def inverse_marginal_cost(m: float, cost: ConvexCost, p_bounds=(0.0, math.inf)) -> float:
    lo, hi = p_bounds
    return cost.inverse_marginal(m, lo, hi)


def profit(point: DispatchPoint, config: PlantConfig, tariff: Tariff) -> float:
    return (
        water_revenue(point.w_h, point.w_r, tariff)
        - electricity_payment(point.z, tariff)
        - tdp_cost(point.p_h, config.tdp.cost)
    )


def profit_from_waters(w_h, w_r, g, config: PlantConfig, tariff: Tariff):
    """Vectorized profit; performs the same operations as :func:`profit`."""
    p_h, _, _, z = flows(w_h, w_r, g, config)
    return (
        water_revenue(w_h, w_r, tariff)
        - electricity_payment(z, tariff)
        - tdp_cost(p_h, config.tdp.cost)
    )


# -- JSON documents ---------------------------------------------------------

def _num(doc: Mapping[str, Any], key: str, where: str, errors: list[str]) -> float:
    if key not in doc:
        errors.append(f"missing field {where}.{key}")
        return math.nan
    val = doc[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        errors.append(f"field {where}.{key} must be a number, got {val!r}")
        return math.nan
    return float(val)


def tariff_from_dict(doc: Mapping[str, Any], errors: list[str] | None = None) -> Tariff:
    errs = [] if errors is None else errors
    t = Tariff(*(_num(doc, k, "tariff", errs) for k in ("pi_water", "pi_buy", "pi_sell")))
    if errors is None and errs:
        raise ConfigError(errs)
    return t


def config_from_dict(doc: Mapping[str, Any], errors: list[str] | None = None) -> PlantConfig:
    errs = [] if errors is None else errors
    tdp_doc = doc.get("tdp") or {}
    rodp_doc = doc.get("rodp") or {}
    if "tdp" not in doc:
        errs.append("missing section tdp")
    if "rodp" not in doc:
        errs.append("missing section rodp")
    cost_doc = tdp_doc.get("cost") or {}
    cost = CostParams(_num(cost_doc, "a", "tdp.cost", errs), _num(cost_doc, "b", "tdp.cost", errs))
    tdp = TdpParams(
        alpha_h=_num(tdp_doc, "alpha_h", "tdp", errs),
        eta_h=_num(tdp_doc, "eta_h", "tdp", errs),
        w_min_h=_num(tdp_doc, "w_min_h", "tdp", errs),
        w_max_h=_num(tdp_doc, "w_max_h", "tdp", errs),
        cost=cost,
    )
    if "beta_h" in tdp_doc and not math.isclose(float(tdp_doc["beta_h"]), tdp.beta_h, rel_tol=1e-12):
        errs.append(f"beta_h = {tdp_doc['beta_h']} inconsistent with alpha_h/eta_h = {tdp.beta_h}")
    rodp = RodpParams(
        alpha_r=_num(rodp_doc, "alpha_r", "rodp", errs),
        w_min_r=_num(rodp_doc, "w_min_r", "rodp", errs),
        w_max_r=_num(rodp_doc, "w_max_r", "rodp", errs),
    )
    floor = _num(doc, "demand_floor", "config", errs) if "demand_floor" in doc else 0.0
    cfg = PlantConfig(tdp=tdp, rodp=rodp, demand_floor=floor)
    if errors is None and errs:
        raise ConfigError(errs)
    return cfg


def load_document(doc: Mapping[str, Any], overrides: Mapping[str, float | None] | None = None,
                  *, require_sizing: bool = True) -> tuple[PlantConfig, Tariff]:
    """Parse and validate a combined plant + tariff document.

    ``overrides`` replace tariff fields (non-None values win over the file).
    """
    errs: list[str] = []
    cfg = config_from_dict(doc, errs)
    tariff_doc = dict(doc.get("tariff") or {})
    if "tariff" not in doc:
        errs.append("missing section tariff")
    for k, v in (overrides or {}).items():
        if v is not None:
            tariff_doc[k] = v
    tariff = tariff_from_dict(tariff_doc, errs)
    if errs:
        raise ConfigError(errs)
    report = validate_config(cfg, tariff, require_sizing=require_sizing)
    if not report.ok:
        raise ConfigError(report.violations)
    return cfg, tariff


def dump_document(config: PlantConfig, tariff: Tariff) -> dict:
    return {**config.to_dict(), "tariff": tariff.to_dict()}
