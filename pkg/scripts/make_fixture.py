"""Regenerate the bundled synthetic solar fixture and its fitted stats.

Each day is a fixed diurnal shape times a daily clear-sky index drawn from
Beta(5, 1.5) (long left tail from overcast days) times small per-hour
jitter. Dark hours (0-5, 20-23) are exactly zero.

    python scripts/make_fixture.py
"""
import io
from pathlib import Path

import numpy as np

from desalsched.scenario import HourlyProfile, fit_hourly_stats, write_profiles

DATA = Path(__file__).resolve().parents[1] / "src" / "desalsched" / "data"
SEED = 2018
DAYS = 365

# target mean output per hour, kWh
TARGET = {
    6: 1500.0, 7: 5000.0, 8: 11000.0, 9: 18500.0, 10: 25500.0, 11: 31000.0,
    12: 34400.0, 13: 36200.0, 14: 35200.0, 15: 31500.0, 16: 25000.0,
    17: 17000.0, 18: 9000.0, 19: 3000.0,
}
A, B = 5.0, 1.5
JITTER = 0.05


def main():
    rng = np.random.default_rng(SEED)
    shape = np.array([TARGET.get(h, 0.0) for h in range(24)]) / (A / (A + B))
    k = rng.beta(A, B, size=(DAYS, 1))
    jitter = np.maximum(1.0 + JITTER * rng.standard_normal((DAYS, 24)), 0.0)
    x = np.round(shape * k * jitter, 3)

    profiles = [HourlyProfile(tuple(row), day=f"2018-{d:03d}") for d, row in enumerate(x, start=1)]
    header = [
        "synthetic solar fixture, 365 days, kWh per hour",
        "diurnal mean shape echoes a rooftop-PV aggregate peaking at hour 13",
        "VARIANCES ARE INVENTED: daily clear-sky index ~ Beta(5, 1.5), per-hour jitter 5%",
        f"generated by scripts/make_fixture.py with seed {SEED}",
    ]
    buf = io.StringIO()
    write_profiles(profiles, buf, header)
    (DATA / "solar_fixture.csv").write_text(buf.getvalue())

    buf = io.StringIO()
    fit_hourly_stats(profiles).dump(buf)
    (DATA / "solar_fixture_stats.json").write_text(buf.getvalue())


if __name__ == "__main__":
    main()
