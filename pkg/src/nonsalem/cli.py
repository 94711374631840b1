"""Command-line front end: ``nonsalem <command> [--config PATH] [flags]``.

Each command reads an optional JSON config, applies flag overrides (flags win)
and writes JSON/CSV artifacts into ``--out``.  Exit codes: 0 ok, 1 a verdict
was ``violated``, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import io as aio
from .battery import BatteryConfig, ParsevalConfig, parseval_battery, run_battery, summarize
from .bounds import BoundReport, badness, borel_cantelli_scan, non_salem_witness
from .errors import NonSalemError
from .fourier import decay_profile, lebesgue_table, power_law_table, transform
from .measures import (
    approximant_measure,
    grid_point_mass,
    make_atomic,
    make_uniform_grid,
    point_mass,
    random_measure,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

NAMED_POINTS = {
    "golden": (math.sqrt(5) - 1) / 2,
    "sqrt2": math.sqrt(2) - 1,
}


def build_measure(spec: dict, seed: int | None = None, grid: int | None = None):
    kind = spec.get("kind")
    N = grid if grid is not None else spec.get("N")
    if kind == "uniform":
        return make_uniform_grid(int(spec["d"]), int(N))
    if kind == "point":
        pt = spec["point"]
        return grid_point_mass(len(pt), int(N), pt) if N is not None else point_mass(pt)
    if kind == "atomic":
        return make_atomic(spec["points"], spec["weights"])
    if kind == "random":
        s = seed if seed is not None else int(spec.get("seed", 0))
        return random_measure(int(spec["d"]), int(N), s, spec.get("profile", "rough-density"))
    if kind == "approximant":
        return approximant_measure(float(spec["tau"]), int(spec["d"]), int(spec["n"]), _q_set(spec),
                                   int(N), depth=int(spec.get("depth", 1)))
    if kind == "file":
        return aio.load_measure(spec["path"])
    raise ValueError(f"unknown measure kind {kind!r}")


def _q_set(spec: dict) -> list:
    if "q_set" in spec:
        return spec["q_set"]
    lo, hi = spec["q_range"]
    return list(range(int(lo), int(hi) + 1))


# -- commands -----------------------------------------------------------------


def cmd_transform(cfg: dict, args) -> int:
    mu = build_measure(cfg.get("measure", {"kind": "uniform", "d": 1, "N": 256}), args.seed, args.grid)
    box = args.box if args.box is not None else int(cfg.get("box", 32))
    table = transform(mu, box)
    aio.validate_table(table)
    aio.save_table(table, args.out / "table.json")
    try:
        prof = decay_profile(table, float(cfg.get("shell_base", 1.5)))
    except NonSalemError as exc:
        print(f"warning: no decay profile ({exc})", file=sys.stderr)
        return EXIT_OK
    aio.save_decay_csv(prof, args.out / "decay.csv")
    aio.write_json({"fitted_s": prof.fitted_s, "raw_s": prof.raw_s, "cap": prof.cap,
                    "saturated": prof.saturated}, args.out / "decay.json")
    return EXIT_OK


def _emit_reports(reports, out: Path, extra: dict | None = None) -> int:
    aio.save_reports_json(reports, out / "reports.json")
    aio.save_reports_csv(reports, out / "reports.csv")
    summary = summarize(reports) | (extra or {})
    aio.write_json(summary, out / "summary.json")
    violated = sum(r.verdict == "violated" for r in reports)
    print(f"{len(reports)} reports, {violated} violated")
    return EXIT_VIOLATION if violated else EXIT_OK


def cmd_verify(cfg: dict, args) -> int:
    doc = dict(cfg.get("battery", {}))
    if args.budget is not None:
        doc["budget"] = args.budget
    if args.box is not None:
        doc["table_box"] = args.box
    if args.strict:
        doc["strict"] = True
    if args.seed is not None:
        doc["seeds"] = [args.seed]
    bcfg = BatteryConfig.from_dict(doc)
    reports = run_battery(bcfg)
    warnings = sum(not r.params.get("complete", True) for r in reports)
    if warnings:
        print(f"warning: {warnings} reports used a table too small for their frequency sums", file=sys.stderr)
    return _emit_reports(reports, args.out, {"coverage_warnings": warnings, "config": bcfg.to_dict()})


def cmd_parseval(cfg: dict, args) -> int:
    doc = dict(cfg.get("parseval", {}))
    if args.seed is not None:
        doc["seeds"] = [args.seed]
    return _emit_reports(parseval_battery(ParsevalConfig.from_dict(doc)), args.out)


def _series_table(spec: dict, box: int):
    kind = spec.get("kind", "lebesgue")
    dim = int(spec.get("dim", 1))
    if kind == "lebesgue":
        return lebesgue_table(dim, box)
    if kind == "power-law":
        return power_law_table(dim, box, float(spec["exponent"]), float(spec.get("amplitude", 1.0)))
    if kind == "file":
        return aio.load_table(spec["path"])
    raise ValueError(f"unknown table kind {kind!r}")


def cmd_borel_cantelli(cfg: dict, args) -> int:
    box = args.box if args.box is not None else int(cfg.get("box", 1 << 60))
    table = _series_table(cfg.get("table", {}), box)
    report = borel_cantelli_scan(table, float(cfg.get("tau_prime", 2.0)), int(cfg.get("Q_max", 1000)),
                                 mode=cfg.get("mode", "lattice"), n=int(cfg.get("n", 1)),
                                 q_list=cfg.get("q_list"), strict=args.strict)
    aio.save_series(report, args.out / "series.json", args.out / "partial_sums.csv")
    print(f"{report.classified} (slope {report.slope:.4f}), final partial sum {report.partial_sums[-1][1]!r}")
    return EXIT_OK


def _points(cfg: dict) -> list:
    pts = []
    for p in cfg.get("points", ["golden", "sqrt2"]):
        if isinstance(p, str):
            pts.append([NAMED_POINTS[p]])
        else:
            pts.append([float(v) for v in np.atleast_1d(p)])
    return pts


def cmd_badness(cfg: dict, args) -> int:
    Q_max = int(cfg.get("Q_max", 100_000))
    window = cfg.get("window", "tail")
    if window not in ("full", "tail"):
        raise ValueError("window must be 'full' or 'tail'")
    q_min = math.isqrt(Q_max - 1) + 1 if window == "tail" else 1
    rows = []
    for x in _points(cfg):
        label = repr(x[0]) if len(x) == 1 else json.dumps(x)
        rows.append([label, Q_max, badness(x, Q_max, q_min)])
    aio.write_csv(["x", "Q_max", "score"], rows, args.out / "badness.csv")
    return EXIT_OK


DEFAULT_WITNESS = [
    {"q_range": [3, 8], "N": 256, "depth": 1},
    {"q_range": [3, 12], "N": 576, "depth": 1},
    {"q_range": [3, 16], "N": 1024, "depth": 1},
    {"q_range": [3, 16], "N": 1024, "depth": 2},
    {"q_range": [5, 16], "N": 1024, "depth": 3},
    {"q_range": [8, 16], "N": 1024, "depth": 1},
]


def cmd_witness(cfg: dict, args) -> int:
    tau, d, n = float(cfg.get("tau", 1.0)), int(cfg.get("d", 1)), int(cfg.get("n", 2))
    reports = []
    for i, c in enumerate(cfg.get("configs", DEFAULT_WITNESS)):
        spec = {"kind": "approximant", "tau": tau, "d": d, "n": n} | c
        mu = build_measure(spec, grid=args.grid)
        r = non_salem_witness(tau, d, n, mu, shell_base=float(cfg.get("shell_base", 1.5)),
                              slack=float(cfg.get("slack", 0.15)))
        params = {"config": i, "N": mu.resolution, "depth": int(c.get("depth", 1)),
                  "q_set": [q[0] if len(q) == 1 else q for q in mu.meta["q_set"]]} | r.params
        reports.append(BoundReport(r.name, r.lhs, r.rhs_main, r.tail, r.ratio, params, r.verdict))
    return _emit_reports(reports, args.out)


COMMANDS = {
    "transform": cmd_transform,
    "verify": cmd_verify,
    "parseval": cmd_parseval,
    "borel-cantelli": cmd_borel_cantelli,
    "badness": cmd_badness,
    "witness": cmd_witness,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonsalem", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="JSON config file")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--strict", action="store_true", help="missing table frequencies are errors")
        p.add_argument("--budget", type=float, help="ratio budget for upper-bound verdicts")
        p.add_argument("--box", type=int, help="Fourier table box radius")
        p.add_argument("--grid", type=int, help="grid resolution N")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = aio.read_json(args.config) if args.config else {}
        if not isinstance(cfg, dict):
            raise ValueError("config must be a JSON object")
        args.out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](cfg, args)
    except (NonSalemError, ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
