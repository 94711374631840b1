"""Inequality batteries over seeded random measures.

Reports are keyed and sorted before they are returned, so output does not
depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .bounds import (
    BoundReport,
    lower_schedule,
    theorem3_lower,
    theorem3_upper,
    theorem5_lower,
    theorem5_upper,
    verify_parseval,
)
from .bumps import BumpProfile
from .fourier import exact_table, transform
from .lattice import LinearFormSpec, primitive_vectors
from .measures import RANDOM_PROFILES, make_uniform_grid, grid_point_mass, random_measure


@dataclass(frozen=True)
class BatteryConfig:
    seeds: tuple = tuple(range(20))
    profiles: tuple = RANDOM_PROFILES
    deltas: tuple = (0.2, 0.1, 0.05)
    Qs: tuple = (2, 5, 13)
    lattice_dims: tuple = (1, 2)
    lattice_grid: dict = field(default_factory=lambda: {1: 1024, 2: 128})
    folds: tuple = (1, 2)
    form_d: int = 2
    form_grid: dict = field(default_factory=lambda: {1: 64, 2: 16})
    q_max: int = 8
    q_per_measure: int = 3
    eps_prime: float = 0.1
    budget: float | None = None
    table_box: int | None = None
    strict: bool = False

    @classmethod
    def from_dict(cls, doc: dict) -> "BatteryConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown battery keys: {sorted(unknown)}")
        kw = {}
        for k, v in doc.items():
            if k in ("lattice_grid", "form_grid"):
                v = {int(a): int(b) for a, b in v.items()}
            elif isinstance(v, list):
                v = tuple(v)
            kw[k] = v
        return cls(**kw)

    def to_dict(self) -> dict:
        return asdict(self)


def _table(mu, cfg: BatteryConfig):
    if cfg.table_box is None:
        return exact_table(mu)
    return transform(mu, cfg.table_box, allow_alias=True)


def _pick_qs(rng: np.random.Generator, d: int, q_max: int, count: int) -> list[tuple]:
    pool = primitive_vectors(d, q_max)
    idx = np.sort(rng.choice(len(pool), size=min(count, len(pool)), replace=False))
    return [pool[i] for i in idx]


def _tag(report: BoundReport, **extra) -> BoundReport:
    return BoundReport(report.name, report.lhs, report.rhs_main, report.tail, report.ratio,
                       extra | report.params, report.verdict)


def lattice_battery(cfg: BatteryConfig) -> list[BoundReport]:
    out = []
    for n in cfg.lattice_dims:
        N = cfg.lattice_grid[n]
        for profile in cfg.profiles:
            for seed in cfg.seeds:
                mu = random_measure(n, N, seed, profile)
                tab = _table(mu, cfg)
                tags = {"seed": seed, "profile": profile, "grid": N}
                for delta in cfg.deltas:
                    for Q in cfg.Qs:
                        sched = lower_schedule(Q, n, cfg.eps_prime)
                        out.append(_tag(theorem3_upper(mu, delta, Q, tab, cfg.budget, cfg.strict), **tags))
                        out.append(_tag(theorem3_lower(mu, delta, Q, sched.K, sched.N, tab,
                                                       strict=cfg.strict), **tags))
    return out


def linear_form_battery(cfg: BatteryConfig) -> list[BoundReport]:
    out = []
    d = cfg.form_d
    for n in cfg.folds:
        N = cfg.form_grid[n]
        for profile in cfg.profiles:
            for seed in cfg.seeds:
                mu = random_measure(n * d, N, seed, profile)
                tab = _table(mu, cfg)
                rng = np.random.default_rng([seed, n, RANDOM_PROFILES.index(profile)])
                tags = {"seed": seed, "profile": profile, "grid": N}
                for q in _pick_qs(rng, d, cfg.q_max, cfg.q_per_measure):
                    sched = lower_schedule(max(2, max(abs(c) for c in q)), n, cfg.eps_prime)
                    for delta in cfg.deltas:
                        spec = LinearFormSpec(q, delta, n)
                        out.append(_tag(theorem5_upper(mu, spec, tab, cfg.budget, cfg.strict), **tags))
                        out.append(_tag(theorem5_lower(mu, spec, sched.K, sched.N, tab,
                                                       strict=cfg.strict), **tags))
    return out


@dataclass(frozen=True)
class ParsevalConfig:
    seeds: tuple = (0, 1, 2)
    folds: tuple = (1, 2)
    grid: dict = field(default_factory=lambda: {1: 64, 2: 16})
    cases: tuple = (((1, 0), 0.2), ((2, 1), 0.1), ((1, -1), 0.15))
    profile: str = "band-limited"
    tol: float = 1e-6

    @classmethod
    def from_dict(cls, doc: dict) -> "ParsevalConfig":
        kw = dict(doc)
        if "grid" in kw:
            kw["grid"] = {int(a): int(b) for a, b in kw["grid"].items()}
        if "cases" in kw:
            kw["cases"] = tuple((tuple(q), float(dl)) for q, dl in kw["cases"])
        for k in ("seeds", "folds"):
            if k in kw:
                kw[k] = tuple(kw[k])
        return cls(**kw)


def parseval_battery(cfg: ParsevalConfig = ParsevalConfig()) -> list[BoundReport]:
    """d = 2 cases over point mass, uniform and seeded random measures."""
    out = []
    d = 2
    for n in cfg.folds:
        N = cfg.grid[n]
        measures = [("point", grid_point_mass(n * d, N, [0.0] * (n * d))),
                    ("uniform", make_uniform_grid(n * d, N))]
        measures += [(f"random:{s}", random_measure(n * d, N, s, "smooth-density")) for s in cfg.seeds]
        for label, mu in measures:
            for q, delta in cfg.cases:
                spec = LinearFormSpec(q, delta, n)
                prof = BumpProfile(cfg.profile, spec.delta_star, d)
                out.append(_tag(verify_parseval(mu, spec, prof, tol=cfg.tol, K=2.0),
                                measure=label, grid=N))
    return sort_reports(out)


def sort_reports(reports) -> list[BoundReport]:
    return sorted(reports, key=lambda r: r.key)


def run_battery(cfg: BatteryConfig = BatteryConfig()) -> list[BoundReport]:
    return sort_reports(lattice_battery(cfg) + linear_form_battery(cfg))


def summarize(reports) -> dict:
    """Per-name counts and worst observed ratio (upper bounds) or margin (lower bounds)."""
    out = {}
    for r in reports:
        s = out.setdefault(r.name, {"count": 0, "violated": 0, "skipped": 0, "worst_ratio": -math.inf})
        if r.name.endswith("lower"):
            s.setdefault("nonvacuous", 0)
            s.setdefault("min_margin", math.inf)
        s["count"] += 1
        s["violated"] += r.verdict == "violated"
        s["skipped"] += r.verdict == "skipped"
        if r.name.endswith("upper") and math.isfinite(r.ratio):
            s["worst_ratio"] = max(s["worst_ratio"], r.ratio)
        if r.name.endswith("lower") and r.verdict != "skipped":
            # lhs over the asserted lower bound, where that bound is positive
            floor = r.params["c"] * r.rhs_main - r.tail
            if floor > 0:
                s["min_margin"] = min(s["min_margin"], r.lhs / floor)
                s["nonvacuous"] += 1
    for s in out.values():
        for k in ("worst_ratio", "min_margin"):
            if k in s and not math.isfinite(s[k]):
                s[k] = float("nan")
    return out
