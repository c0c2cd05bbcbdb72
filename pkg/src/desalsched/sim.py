"""Day-level and Monte Carlo simulation of the threshold policy.

Hours are independent single-period problems, so a day is 24 policy
evaluations and a Monte Carlo run is a batch of days evaluated with the
vectorized policy.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .model import DispatchPoint, PlantConfig, Tariff, flows, profit, profit_from_waters
from .policy import ZONES, ThresholdSet, Zone, compute_thresholds, optimal_dispatch, policy_waters, zone_codes, zone_of
from .scenario import HOURS, HourlyProfile, HourlyStats, sample_matrix

CSV_COLUMNS = ("hour", "g", "w_h", "w_r", "q_h", "q_r", "z", "profit", "zone")
QUANTILES = {"p5": 0.05, "p50": 0.50, "p95": 0.95}


@dataclass(frozen=True)
class DaySchedule:
    hours: tuple[DispatchPoint, ...]
    hourly_profit: tuple[float, ...]
    total_profit: float
    zone_labels: tuple[Zone, ...]

    def rows(self):
        for h, (pt, pr, zn) in enumerate(zip(self.hours, self.hourly_profit, self.zone_labels)):
            yield (h, pt.g, pt.w_h, pt.w_r, pt.q_h, pt.q_r, pt.z, pr, zn.value)

    def write_csv(self, fp: TextIO, header_lines: Iterable[str] = ()) -> None:
        for line in header_lines:
            fp.write(f"# {line}\n")
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows():
            w.writerow([row[0], *(repr(float(v)) for v in row[1:8]), row[8]])

    def to_dict(self) -> dict:
        return {
            "total_profit": self.total_profit,
            "hours": [dict(zip(CSV_COLUMNS, row)) for row in self.rows()],
        }


@dataclass(frozen=True)
class McSummary:
    runs: int
    profit_mean: float
    profit_std: float
    g_mean: tuple[float, ...]
    w_h: dict
    w_r: dict
    z: dict

    def to_dict(self) -> dict:
        return {
            "runs": self.runs,
            "profit_mean": self.profit_mean,
            "profit_std": self.profit_std,
            "g_mean": list(self.g_mean),
            "w_h": {k: list(v) for k, v in self.w_h.items()},
            "w_r": {k: list(v) for k, v in self.w_r.items()},
            "z": {k: list(v) for k, v in self.z.items()},
        }

    def write_csv(self, fp: TextIO, header_lines: Iterable[str] = ()) -> None:
        for line in header_lines:
            fp.write(f"# {line}\n")
        cols = ["hour", "g_mean"] + [f"{v}_{q}" for v in ("w_h", "w_r", "z") for q in QUANTILES]
        w = csv.writer(fp, lineterminator="\n")
        w.writerow(cols)
        for h in range(HOURS):
            vals = [self.g_mean[h]] + [getattr(self, v)[q][h] for v in ("w_h", "w_r", "z") for q in QUANTILES]
            w.writerow([h, *(repr(float(x)) for x in vals)])


def run_day(profile: HourlyProfile, thresholds: ThresholdSet, config: PlantConfig, tariff: Tariff) -> DaySchedule:
    points = tuple(optimal_dispatch(g, thresholds, config) for g in profile.values)
    hourly = tuple(profit(p, config, tariff) for p in points)
    return DaySchedule(
        hours=points,
        hourly_profit=hourly,
        # fsum is exactly rounded, hence independent of hour order
        total_profit=math.fsum(hourly),
        zone_labels=tuple(zone_of(g, thresholds) for g in profile.values),
    )


def simulate_matrix(gen: np.ndarray, thresholds: ThresholdSet, config: PlantConfig, tariff: Tariff) -> dict:
    """Vectorized policy over an array of generation values (any shape)."""
    w_h, w_r = policy_waters(gen, thresholds, config)
    p_h, q_h, q_r, z = flows(w_h, w_r, gen, config)
    return {
        "w_h": w_h, "w_r": w_r, "p_h": p_h, "q_h": q_h, "q_r": q_r, "z": z,
        "profit": profit_from_waters(w_h, w_r, gen, config, tariff),
        "zone": zone_codes(gen, thresholds),
    }


def summarize(gen: np.ndarray, thresholds: ThresholdSet, config: PlantConfig, tariff: Tariff) -> McSummary:
    res = simulate_matrix(gen, thresholds, config, tariff)
    daily = np.array([math.fsum(row) for row in res["profit"]])
    mean = math.fsum(daily) / len(daily)
    std = math.sqrt(math.fsum((daily - mean) ** 2) / len(daily))

    def q(name):
        return {k: tuple(np.quantile(res[name], p, axis=0).tolist()) for k, p in QUANTILES.items()}

    return McSummary(
        runs=int(gen.shape[0]),
        profit_mean=mean,
        profit_std=std,
        g_mean=tuple(math.fsum(col) / gen.shape[0] for col in gen.T),
        w_h=q("w_h"),
        w_r=q("w_r"),
        z=q("z"),
    )


def run_monte_carlo(stats: HourlyStats, n: int, seed: int, config: PlantConfig, tariff: Tariff,
                    thresholds: ThresholdSet | None = None) -> McSummary:
    """Sample ``n`` days and summarize the optimal schedules.

    ``profit_std`` is the population standard deviation of daily profit.
    """
    ts = thresholds if thresholds is not None else compute_thresholds(config, tariff)
    return summarize(sample_matrix(stats, n, seed), ts, config, tariff)


@dataclass(frozen=True)
class SweepResult:
    price: float
    thresholds: ThresholdSet
    schedule: DaySchedule


def sweep_price(prices: Sequence[float], profile: HourlyProfile, config: PlantConfig, tariff: Tariff) -> list[SweepResult]:
    """Re-run the day at each water price, all other parameters fixed."""
    if len(prices) == 0:
        raise ValueError("need at least one price")
    out = []
    for price in prices:
        t = tariff.replace(pi_water=float(price))
        ts = compute_thresholds(config, t)
        out.append(SweepResult(float(price), ts, run_day(profile, ts, config, t)))
    return out


__all__ = [
    "CSV_COLUMNS", "DaySchedule", "McSummary", "SweepResult", "ZONES",
    "run_day", "run_monte_carlo", "simulate_matrix", "summarize", "sweep_price",
]
