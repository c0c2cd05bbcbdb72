"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid configuration or data,
3 certification failure. Data goes to stdout or files, diagnostics to
stderr. Every output carries the run manifest (``#`` comment lines in
CSV, a ``manifest`` object in JSON).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .model import ConfigError, load_document, profit
from .oracle import certify_policy
from .policy import compute_thresholds, optimal_dispatch, zone_of
from .scenario import HourlyStats, ProfileFormatError, load_profiles, sample_profiles, write_profiles
from .sim import run_day, run_monte_carlo, sweep_price

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CERT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    subcommand: str
    config: str | None = None
    tariff_overrides: dict = field(default_factory=dict)
    seed: int | None = None
    outputs: list = field(default_factory=list)
    version: str = __version__

    def header_lines(self, extra: dict | None = None) -> list[str]:
        lines = [f"tool: desalsched {self.version}", f"subcommand: {self.subcommand}"]
        lines.append(f"config: {self.config}")
        lines.append(f"tariff_overrides: {json.dumps(self.tariff_overrides, sort_keys=True)}")
        lines.append(f"seed: {json.dumps(self.seed)}")
        lines.append(f"outputs: {json.dumps(self.outputs)}")
        for k, v in (extra or {}).items():
            lines.append(f"{k}: {v}")
        return lines

    def to_dict(self) -> dict:
        return asdict(self)


def _price_list(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty price list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="desalsched", description="Co-schedule water and power in a hybrid desalination plant.")
    p.add_argument("--version", action="version", version=f"desalsched {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def plant(sp):
        sp.add_argument("--config", required=True, help="plant + tariff JSON document")
        sp.add_argument("--pi-water", type=float, help="override water price ($/m3)")
        sp.add_argument("--pi-buy", type=float, help="override import price ($/kWh)")
        sp.add_argument("--pi-sell", type=float, help="override export price ($/kWh)")

    sp = sub.add_parser("thresholds", help="print the precomputed threshold set")
    plant(sp)

    sp = sub.add_parser("dispatch", help="optimal operating point for one hour")
    plant(sp)
    sp.add_argument("--g", type=float, required=True, help="renewable generation (kWh)")

    sp = sub.add_parser("simulate", help="24-hour schedule for one profile row")
    plant(sp)
    sp.add_argument("--profile", required=True)
    sp.add_argument("--day", type=int, default=0, help="row index in the profile file")
    sp.add_argument("--out", help="output directory (default: stdout)")

    sp = sub.add_parser("montecarlo", help="Monte Carlo summary over sampled days")
    plant(sp)
    sp.add_argument("--stats", required=True)
    sp.add_argument("--runs", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output JSON file (default: stdout)")

    sp = sub.add_parser("sweep", help="one day schedule per water price")
    plant(sp)
    sp.add_argument("--prices", type=_price_list, required=True)
    sp.add_argument("--profile", required=True)
    sp.add_argument("--day", type=int, default=0)
    sp.add_argument("--out", required=True, help="output directory")

    sp = sub.add_parser("certify", help="check the policy against both oracles")
    plant(sp)
    sp.add_argument("--prices", type=_price_list, help="water prices (default: config value)")
    sp.add_argument("--g-max", type=float, default=50_000.0)
    sp.add_argument("--g-step", type=float, default=500.0)
    sp.add_argument("--tol", type=float, default=0.01)
    sp.add_argument("--n-steps", type=int, default=2000, help="grid oracle lattice size per axis")

    sp = sub.add_parser("sample", help="draw daily profiles from hourly stats")
    sp.add_argument("--stats", required=True)
    sp.add_argument("--runs", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="output CSV (default: stdout)")
    return p


def _overrides(args) -> dict:
    raw = {"pi_water": args.pi_water, "pi_buy": args.pi_buy, "pi_sell": args.pi_sell}
    return {k: v for k, v in raw.items() if v is not None}


def _load_plant(args):
    with open(args.config) as fp:
        doc = json.load(fp)
    return load_document(doc, _overrides(args))


def _select_day(path, day):
    with open(path) as fp:
        profiles = load_profiles(fp)
    if not 0 <= day < len(profiles):
        raise UsageError(f"--day {day} out of range (file has {len(profiles)} rows)")
    return profiles[day]


def _emit_json(obj, path=None):
    text = json.dumps(obj, indent=2) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _g_grid(g_max, g_step):
    if g_step <= 0 or g_max < 0:
        raise UsageError("--g-step must be > 0 and --g-max >= 0")
    n = int(np.floor(g_max / g_step + 1e-9)) + 1
    return [k * g_step for k in range(n)]


def _run(args) -> int:
    cmd = args.command
    man = RunManifest(subcommand=cmd, config=getattr(args, "config", None),
                      tariff_overrides=_overrides(args) if hasattr(args, "config") else {})

    if cmd == "sample":
        with open(args.stats) as fp:
            stats = HourlyStats.load(fp)
        if args.runs < 1:
            raise UsageError("--runs must be >= 1")
        man.seed = args.seed
        man.outputs = [args.out] if args.out else []
        profiles = sample_profiles(stats, args.runs, args.seed)
        if args.out:
            with open(args.out, "w", newline="") as fp:
                write_profiles(profiles, fp, man.header_lines())
        else:
            write_profiles(profiles, sys.stdout, man.header_lines())
        return EXIT_OK

    config, tariff = _load_plant(args)

    if cmd == "thresholds":
        _emit_json({**compute_thresholds(config, tariff).to_dict(), "manifest": man.to_dict()})
        return EXIT_OK

    if cmd == "dispatch":
        if args.g < 0:
            raise UsageError("--g must be >= 0")
        ts = compute_thresholds(config, tariff)
        pt = optimal_dispatch(args.g, ts, config)
        _emit_json({
            **pt.to_dict(),
            "profit": profit(pt, config, tariff),
            "zone": zone_of(args.g, ts).value,
            "regime": ts.regime.value,
            "manifest": man.to_dict(),
        })
        return EXIT_OK

    if cmd == "simulate":
        profile = _select_day(args.profile, args.day)
        ts = compute_thresholds(config, tariff)
        sched = run_day(profile, ts, config, tariff)
        extra = {"profile": args.profile, "day": profile.day, "regime": ts.regime.value}
        if args.out:
            out = Path(args.out) / "schedule.csv"
            man.outputs = [str(out)]
            out.parent.mkdir(parents=True, exist_ok=True)
            with open(out, "w", newline="") as fp:
                sched.write_csv(fp, man.header_lines(extra))
        else:
            sched.write_csv(sys.stdout, man.header_lines(extra))
        return EXIT_OK

    if cmd == "montecarlo":
        if args.runs < 1:
            raise UsageError("--runs must be >= 1")
        with open(args.stats) as fp:
            stats = HourlyStats.load(fp)
        man.seed = args.seed
        man.outputs = [args.out] if args.out else []
        summary = run_monte_carlo(stats, args.runs, args.seed, config, tariff)
        _emit_json({**summary.to_dict(), "manifest": man.to_dict()}, args.out)
        return EXIT_OK

    if cmd == "sweep":
        profile = _select_day(args.profile, args.day)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        results = sweep_price(args.prices, profile, config, tariff)
        paths = [out_dir / f"sweep_pw_{r.price!r}.csv" for r in results]
        man.outputs = [str(p) for p in paths]
        index = []
        for r, path in zip(results, paths):
            extra = {"profile": args.profile, "day": profile.day, "pi_water": repr(r.price),
                     "regime": r.thresholds.regime.value}
            with open(path, "w", newline="") as fp:
                r.schedule.write_csv(fp, man.header_lines(extra))
            index.append({"pi_water": r.price, "regime": r.thresholds.regime.value,
                          "total_profit": r.schedule.total_profit, "path": str(path)})
        _emit_json({"results": index, "manifest": man.to_dict()})
        return EXIT_OK

    if cmd == "certify":
        prices = args.prices or [tariff.pi_water]
        g_samples = _g_grid(args.g_max, args.g_step)
        reports = []
        for price in prices:
            rep = certify_policy(config, tariff.replace(pi_water=price), g_samples, args.tol, n_steps=args.n_steps)
            reports.append({"pi_water": price, **rep.to_dict()})
            print(f"pi_water={price}: {rep.message} (worst gap {rep.worst_gap} at g={rep.worst_g})", file=sys.stderr)
        passed = all(r["passed"] for r in reports)
        _emit_json({"passed": passed, "reports": reports, "manifest": man.to_dict()})
        return EXIT_OK if passed else EXIT_CERT

    raise UsageError(f"unknown command {cmd}")  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args)
    except UsageError as exc:
        print(f"desalsched: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ProfileFormatError, ValueError, OSError) as exc:
        print(f"desalsched: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
