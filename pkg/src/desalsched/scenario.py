"""Hourly renewable profiles: CSV ingestion, per-hour statistics, sampling.

Random streams come from numpy's PCG64 bit generator. A sample of ``n``
profiles is drawn in fixed-size chunks, chunk ``k`` seeded with the
``k``-th child of ``SeedSequence(seed)``, so any prefix of a larger
sample equals the smaller sample and chunks can be drawn independently.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

HOURS = 24
HEADER = ["day"] + [f"h{h}" for h in range(HOURS)]
CHUNK = 4096


class ProfileFormatError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class HourlyProfile:
    values: tuple[float, ...]
    day: str = ""

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != HOURS:
            raise ValueError(f"profile needs {HOURS} values, got {len(vals)}")
        for h, v in enumerate(vals):
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"hour {h}: generation must be finite and >= 0, got {v}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return HOURS

    def __getitem__(self, h):
        return self.values[h]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


@dataclass(frozen=True)
class HourlyStats:
    mean: tuple[float, ...]
    std: tuple[float, ...]
    median: tuple[float, ...]

    def __post_init__(self):
        for name in ("mean", "std", "median"):
            vals = tuple(float(v) for v in getattr(self, name))
            if len(vals) != HOURS:
                raise ValueError(f"{name} needs {HOURS} values, got {len(vals)}")
            object.__setattr__(self, name, vals)
        if any(s < 0 for s in self.std):
            raise ValueError("std must be >= 0 at every hour")

    def to_dict(self) -> dict:
        return {"mean": list(self.mean), "std": list(self.std), "median": list(self.median)}

    @classmethod
    def from_dict(cls, doc) -> "HourlyStats":
        try:
            return cls(mean=doc["mean"], std=doc["std"], median=doc["median"])
        except KeyError as exc:
            raise ProfileFormatError(f"stats document missing {exc}") from None

    def dump(self, fp: TextIO) -> None:
        json.dump(self.to_dict(), fp, indent=2)
        fp.write("\n")

    @classmethod
    def load(cls, fp: TextIO) -> "HourlyStats":
        return cls.from_dict(json.load(fp))


def _data_lines(stream: Iterable[str]):
    for lineno, line in enumerate(stream, start=1):
        if line.lstrip().startswith("#") or not line.strip():
            continue
        yield lineno, line


def load_profiles(stream: TextIO) -> list[HourlyProfile]:
    """Read a ``day,h0,...,h23`` CSV. Lines starting with ``#`` are comments."""
    lines = list(_data_lines(stream))
    if not lines:
        raise ProfileFormatError("empty profile file")
    header_no, header_line = lines[0]
    header = [c.strip() for c in next(csv.reader([header_line]))]
    if header != HEADER:
        raise ProfileFormatError(f"line {header_no}: expected header {','.join(HEADER)}")
    out = []
    for lineno, line in lines[1:]:
        row = next(csv.reader([line]))
        if len(row) != len(HEADER):
            raise ProfileFormatError(f"line {lineno}: expected {len(HEADER)} columns, got {len(row)}")
        vals = []
        for col, cell in zip(HEADER[1:], row[1:]):
            try:
                v = float(cell)
            except ValueError:
                raise ProfileFormatError(f"line {lineno}, column {col}: not a number: {cell!r}") from None
            if not math.isfinite(v) or v < 0:
                raise ProfileFormatError(f"line {lineno}, column {col}: value must be finite and >= 0, got {cell}")
            vals.append(v)
        out.append(HourlyProfile(tuple(vals), day=row[0].strip()))
    return out


def write_profiles(profiles: Iterable[HourlyProfile], fp: TextIO, header_lines: Iterable[str] = ()) -> None:
    for line in header_lines:
        fp.write(f"# {line}\n")
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(HEADER)
    for k, prof in enumerate(profiles):
        w.writerow([prof.day or str(k)] + [repr(v) for v in prof.values])


def profiles_matrix(profiles: Iterable[HourlyProfile]) -> np.ndarray:
    rows = [p.values for p in profiles]
    return np.array(rows, dtype=float).reshape(len(rows), HOURS)


def fit_hourly_stats(profiles) -> HourlyStats:
    """Per-hour sample mean, sample std (n - 1 denominator) and median."""
    x = profiles if isinstance(profiles, np.ndarray) else profiles_matrix(profiles)
    if x.shape[0] < 2:
        raise InsufficientDataError(f"need at least 2 profiles, got {x.shape[0]}")
    return HourlyStats(
        mean=x.mean(axis=0), std=x.std(axis=0, ddof=1), median=np.median(x, axis=0)
    )


def sample_matrix(stats: HourlyStats, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` truncated-normal daily profiles as an ``(n, 24)`` array."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mean = np.asarray(stats.mean)
    std = np.asarray(stats.std)
    n_chunks = -(-n // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    parts = []
    for k, child in enumerate(children):
        rows = min(CHUNK, n - k * CHUNK)
        rng = np.random.Generator(np.random.PCG64(child))
        parts.append(mean + std * rng.standard_normal((rows, HOURS)))
    draws = np.concatenate(parts)
    # negative draws map to zero output
    return np.maximum(draws, 0.0)


def sample_profiles(stats: HourlyStats, n: int, seed: int) -> list[HourlyProfile]:
    return [HourlyProfile(tuple(row), day=str(k)) for k, row in enumerate(sample_matrix(stats, n, seed))]


def scale_profile(profile: HourlyProfile, factor: float) -> HourlyProfile:
    if factor < 0:
        raise ValueError("factor must be >= 0")
    return HourlyProfile(tuple(v * factor for v in profile.values), day=profile.day)


def read_profiles_text(text: str) -> list[HourlyProfile]:
    return load_profiles(io.StringIO(text))
