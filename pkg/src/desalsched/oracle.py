"""Reference solvers for the single-hour profit maximization.

Two routes, both independent of the threshold formulas:

* ``solve_grid`` evaluates every point of a rectangular lattice over the
  flow box (brute force, no structural assumptions).
* ``solve_zonewise`` splits the problem at the tariff kink z = 0. On each
  side the payment is linear, so the objective is concave; its maximum over
  the (polygonal) feasible set lies on an edge, and each edge is a 1-D
  concave problem solved by marginal-cost inversion.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .model import (
    ConfigError,
    DispatchPoint,
    PlantConfig,
    Tariff,
    dispatch_from_waters,
    profit,
    validate_config,
)
from .policy import ThresholdSet, compute_thresholds, optimal_dispatch


class Method(str, enum.Enum):
    GRID = "GRID"
    ZONEWISE = "ZONEWISE"


@dataclass(frozen=True)
class OracleSolution:
    point: DispatchPoint
    profit: float
    method: Method
    resolution: float | None = None  # lattice diagonal, m^3/h
    lipschitz: float | None = None

    @property
    def error_bound(self) -> float:
        """Upper bound on (true optimum - returned profit)."""
        if self.method is Method.ZONEWISE:
            return 0.0
        return self.lipschitz * self.resolution


def _check(config: PlantConfig, tariff: Tariff) -> None:
    report = validate_config(config, tariff, require_sizing=False)
    if not report.ok:
        raise ConfigError(report.violations)


def _thermal_box(config: PlantConfig) -> tuple[float, float]:
    tdp = config.tdp
    if not tdp.enabled:
        return tdp.w_min_h, tdp.w_min_h
    return tdp.w_min_h, tdp.w_max_h


# -- brute force ------------------------------------------------------------

@numba.njit(cache=True)
def _row_start(w_h_i, w_r, floor):
    j0 = 0
    while j0 < w_r.shape[0] and w_h_i + w_r[j0] < floor:
        j0 += 1
    return j0


# No reassociation or FMA contraction: every lattice value is computed with
# the same IEEE operations in both passes.
@numba.njit(cache=True, fastmath={"nnan", "nsz"})
def _row_max(b_r, q_r, q_h_i, g, pi_buy, pi_sell, j0):
    r0 = r1 = r2 = r3 = -np.inf
    m = b_r.shape[0]
    j = j0
    while j + 3 < m:
        z0 = (q_r[j] - q_h_i) - g
        z1 = (q_r[j + 1] - q_h_i) - g
        z2 = (q_r[j + 2] - q_h_i) - g
        z3 = (q_r[j + 3] - q_h_i) - g
        r0 = max(r0, b_r[j] - max(pi_buy * z0, pi_sell * z0))
        r1 = max(r1, b_r[j + 1] - max(pi_buy * z1, pi_sell * z1))
        r2 = max(r2, b_r[j + 2] - max(pi_buy * z2, pi_sell * z2))
        r3 = max(r3, b_r[j + 3] - max(pi_buy * z3, pi_sell * z3))
        j += 4
    while j < m:
        z0 = (q_r[j] - q_h_i) - g
        r0 = max(r0, b_r[j] - max(pi_buy * z0, pi_sell * z0))
        j += 1
    return max(max(r0, r1), max(r2, r3))


@numba.njit(cache=True)
def _grid_argmax(w_h, a_h, q_h, w_r, b_r, q_r, g, floor, pi_buy, pi_sell):
    best = -np.inf
    bi = -1
    for i in range(w_h.shape[0]):
        j0 = _row_start(w_h[i], w_r, floor)
        if j0 == w_r.shape[0]:
            continue
        row = a_h[i] + _row_max(b_r, q_r, q_h[i], g, pi_buy, pi_sell, j0)
        if row > best:
            best = row
            bi = i
    if bi < 0:
        return -1, -1
    bj = -1
    top = -np.inf
    for j in range(_row_start(w_h[bi], w_r, floor), w_r.shape[0]):
        z = (q_r[j] - q_h[bi]) - g
        v = b_r[j] - max(pi_buy * z, pi_sell * z)
        if v > top:
            top = v
            bj = j
    return bi, bj


def grid_lipschitz(config: PlantConfig, tariff: Tariff) -> float:
    """Lipschitz constant of the profit over the flow box (Euclidean norm)."""
    tdp = config.tdp
    l_h = tariff.pi_water + tariff.pi_buy / tdp.eta_h
    if tdp.enabled:
        l_h += tdp.cost.marginal(tdp.w_max_h / tdp.alpha_h) / tdp.alpha_h
    l_r = tariff.pi_water + tariff.pi_buy / config.rodp.alpha_r
    return math.hypot(l_h, l_r)


def solve_grid(g: float, config: PlantConfig, tariff: Tariff, n_steps: int = 2000) -> OracleSolution:
    """Exhaustive lattice search over the flow box.

    Points below the demand floor are discarded. Exact ties resolve to the
    first point in a scan with w_h as the outer (ascending) index.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    _check(config, tariff)
    tdp, rodp = config.tdp, config.rodp
    h_lo, h_hi = _thermal_box(config)
    w_h = np.linspace(h_lo, h_hi, n_steps)
    w_r = np.linspace(rodp.w_min_r, rodp.w_max_r, n_steps)
    p_h = w_h / tdp.alpha_h if tdp.enabled else np.zeros_like(w_h)
    a_h = tariff.pi_water * w_h - tdp.cost.evaluate(p_h)
    b_r = tariff.pi_water * w_r
    bi, bj = _grid_argmax(
        w_h, a_h, w_h / tdp.eta_h, w_r, b_r, w_r / rodp.alpha_r,
        float(g), float(config.demand_floor), tariff.pi_buy, tariff.pi_sell,
    )
    if bi < 0:
        raise ConfigError(["infeasible: no lattice point meets the demand floor"])
    point = dispatch_from_waters(w_h[bi], w_r[bj], g, config)
    step = math.hypot((h_hi - h_lo) / (n_steps - 1), (rodp.w_max_r - rodp.w_min_r) / (n_steps - 1))
    return OracleSolution(
        point=point,
        profit=profit(point, config, tariff),
        method=Method.GRID,
        resolution=step,
        lipschitz=grid_lipschitz(config, tariff),
    )


# -- zonewise exact solver --------------------------------------------------

def _clip(poly, a, b, c):
    """Keep the part of a convex polygon where a*h + b*r + c >= 0."""
    out = []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        fp = a * p[0] + b * p[1] + c
        fq = a * q[0] + b * q[1] + c
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _edge_candidates(v0, v1, price, config: PlantConfig, tariff: Tariff):
    """Maximizer of the linear-payment objective along segment v0 -> v1."""
    yield v0
    yield v1
    tdp, alpha_r = config.tdp, config.rodp.alpha_r
    dh, dr = v1[0] - v0[0], v1[1] - v0[1]
    if dh == 0 or not tdp.enabled:
        return
    # d/dt = dh*(pw + price/eta - C'(p)/alpha_h) + dr*(pw - price/alpha_r)
    k = tariff.pi_water + price / tdp.eta_h + (dr / dh) * (tariff.pi_water - price / alpha_r)
    lo, hi = sorted((v0[0], v1[0]))
    p = tdp.cost.inverse_marginal(tdp.alpha_h * k, lo / tdp.alpha_h, hi / tdp.alpha_h)
    h = min(max(tdp.alpha_h * p, lo), hi)
    t = (h - v0[0]) / dh
    yield (h, v0[1] + t * dr)


def _project(pt, config: PlantConfig):
    h_lo, h_hi = _thermal_box(config)
    r = config.rodp
    return min(max(pt[0], h_lo), h_hi), min(max(pt[1], r.w_min_r), r.w_max_r)


def solve_zonewise(g: float, config: PlantConfig, tariff: Tariff) -> OracleSolution:
    _check(config, tariff)
    eta, alpha_r, floor = config.tdp.eta_h, config.rodp.alpha_r, config.demand_floor
    h_lo, h_hi = _thermal_box(config)
    r_lo, r_hi = config.rodp.w_min_r, config.rodp.w_max_r
    box = [(h_lo, r_lo), (h_hi, r_lo), (h_hi, r_hi), (h_lo, r_hi)]

    candidates = []
    # (iii) islanded: r = alpha_r * (g + h / eta)
    seg_lo = max(h_lo, eta * (r_lo / alpha_r - g), (floor - alpha_r * g) / (1.0 + alpha_r / eta))
    seg_hi = min(h_hi, eta * (r_hi / alpha_r - g))
    if seg_lo <= seg_hi:
        ends = [(h, alpha_r * (g + h / eta)) for h in (seg_lo, seg_hi)]
        candidates.extend(_edge_candidates(ends[0], ends[1], 0.0, config, tariff))
    # (i) importing, z >= 0, and (ii) exporting, z <= 0
    for sign, price in ((1.0, tariff.pi_buy), (-1.0, tariff.pi_sell)):
        poly = _clip(box, -sign / eta, sign / alpha_r, -sign * g)
        poly = _clip(poly, 1.0, 1.0, -floor)
        for k in range(len(poly)):
            candidates.extend(_edge_candidates(poly[k], poly[(k + 1) % len(poly)], price, config, tariff))

    best = None
    for cand in candidates:
        h, r = _project(cand, config)
        if h + r < floor:
            continue
        point = dispatch_from_waters(h, r, g, config)
        val = profit(point, config, tariff)
        if best is None or val > best[1]:
            best = (point, val)
    if best is None:
        raise ConfigError(["infeasible: empty feasible set in every zone"])
    return OracleSolution(point=best[0], profit=best[1], method=Method.ZONEWISE)


# -- certification ----------------------------------------------------------

@dataclass(frozen=True)
class CertSample:
    g: float
    policy_profit: float
    zonewise_profit: float
    grid_profit: float
    grid_error_bound: float
    gap: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "policy_profit": self.policy_profit,
            "zonewise_profit": self.zonewise_profit,
            "grid_profit": self.grid_profit,
            "grid_error_bound": self.grid_error_bound,
            "gap": self.gap,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    tolerance: float
    samples: tuple[CertSample, ...] = ()
    worst_gap: float | None = None
    worst_g: float | None = None
    message: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "message": self.message,
            "tolerance": self.tolerance,
            "worst_gap": self.worst_gap,
            "worst_g": self.worst_g,
            "samples": [s.to_dict() for s in self.samples],
            **self.extra,
        }


def certify_policy(
    config: PlantConfig,
    tariff: Tariff,
    g_samples,
    tolerance: float = 0.01,
    *,
    n_steps: int = 2000,
    thresholds: ThresholdSet | None = None,
) -> CertificationReport:
    """Compare the closed-form policy against both oracles at each ``g``.

    A sample passes when the policy matches the zonewise optimum within
    ``tolerance`` and sits between the grid value and the grid value plus
    its error bound. ``gap`` is the amount by which the best oracle beats
    the policy. Failures are reported, never raised.
    """
    g_samples = [float(g) for g in g_samples]
    if not g_samples:
        return CertificationReport(False, tolerance, message="no g samples given")
    try:
        ts = thresholds if thresholds is not None else compute_thresholds(config, tariff)
    except ConfigError as exc:
        return CertificationReport(False, tolerance, message=str(exc))

    samples = []
    for g in g_samples:
        pol = profit(optimal_dispatch(g, ts, config), config, tariff)
        zw = solve_zonewise(g, config, tariff)
        gr = solve_grid(g, config, tariff, n_steps)
        gap = max(zw.profit, gr.profit) - pol
        ok = (
            abs(zw.profit - pol) <= tolerance
            and gr.profit - pol <= tolerance
            and pol - gr.profit <= gr.error_bound + tolerance
        )
        samples.append(CertSample(g, pol, zw.profit, gr.profit, gr.error_bound, gap, ok))

    worst = max(samples, key=lambda s: s.gap)
    passed = all(s.passed for s in samples)
    return CertificationReport(
        passed=passed,
        tolerance=tolerance,
        samples=tuple(samples),
        worst_gap=worst.gap,
        worst_g=worst.g,
        message="PASS" if passed else "FAIL",
    )
