"""Probability measures on the torus [0,1)^d.

Two representations are used throughout:

* :class:`AtomicMeasure` -- finitely many weighted points, transformed exactly.
* :class:`GridMeasure` -- a mass array on a uniform ``N^d`` grid.  Cell
  ``(i_1, ..., i_d)`` carries the mass of the half-open cube
  ``prod [i_k/N, (i_k+1)/N)`` and, for every computation in this package,
  that mass is treated as an atom at the cube's center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._geometry import (
    cell_centers,
    dist_to_int,
    grid_linear_form,
    torus_distance_grid,
    torus_distance_points,
)
from .errors import DimensionMismatch, MeasureError

MASS_RTOL = 1e-12

RANDOM_PROFILES = ("sparse-atoms", "rough-density", "smooth-density")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    points: np.ndarray
    weights: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        w = np.array(self.weights, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise MeasureError("atomic measure needs a nonempty (k, d) point array")
        if w.shape != (pts.shape[0],):
            raise DimensionMismatch("one weight per atom required")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise MeasureError("weights must be finite and nonnegative")
        if abs(w.sum() - 1.0) > MASS_RTOL:
            raise MeasureError(f"weights sum to {w.sum()!r}, not 1")
        if np.any(pts < 0) or np.any(pts >= 1):
            raise MeasureError("atom coordinates must lie in [0, 1)")
        object.__setattr__(self, "points", _readonly(pts))
        object.__setattr__(self, "weights", _readonly(w))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True, eq=False)
class GridMeasure:
    mass: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.array(self.mass, dtype=float)
        if m.ndim == 0 or len(set(m.shape)) != 1:
            raise MeasureError("mass array must be an N^d cube")
        if m.shape[0] < 1:
            raise MeasureError("resolution must be positive")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise MeasureError("masses must be finite and nonnegative")
        if abs(m.sum() - 1.0) > MASS_RTOL:
            raise MeasureError(f"total mass {m.sum()!r} is not 1")
        object.__setattr__(self, "mass", _readonly(m))

    @property
    def dim(self) -> int:
        return self.mass.ndim

    @property
    def resolution(self) -> int:
        return self.mass.shape[0]

    def centers(self) -> np.ndarray:
        return cell_centers(self.resolution)

    def as_atomic(self) -> AtomicMeasure:
        """Nonzero cells as atoms at the cell centers (row-major order)."""
        idx = np.argwhere(self.mass > 0)
        pts = (idx + 0.5) / self.resolution
        w = self.mass[tuple(idx.T)]
        return AtomicMeasure(pts, w / w.sum(), meta=dict(self.meta))

    def support_size(self) -> int:
        return int(np.count_nonzero(self.mass))


Measure = AtomicMeasure | GridMeasure


def _normalize(values: np.ndarray) -> np.ndarray:
    total = values.sum()
    out = values / total
    # one correction pass keeps the sum within a few ulps of 1
    return out / out.sum()


def make_atomic(points, weights, meta: dict | None = None) -> AtomicMeasure:
    pts = [np.atleast_1d(np.asarray(p, dtype=float)) for p in points]
    w = np.asarray(weights, dtype=float).ravel()
    if not pts or w.size == 0:
        raise MeasureError("empty input")
    if len(pts) != w.size:
        raise DimensionMismatch(f"{len(pts)} points but {w.size} weights")
    dims = {p.shape[0] for p in pts}
    if len(dims) != 1 or any(p.ndim != 1 for p in pts):
        raise DimensionMismatch("points have inconsistent dimensions")
    if np.any(w < 0):
        raise MeasureError("negative weight")
    if not np.any(w > 0):
        raise MeasureError("weights are all zero")
    arr = np.mod(np.vstack(pts), 1.0)
    arr[arr >= 1.0] = 0.0  # mod of tiny negatives can round up to 1
    return AtomicMeasure(arr, _normalize(w), meta=dict(meta or {}))


def point_mass(point) -> AtomicMeasure:
    return make_atomic([point], [1.0], meta={"kind": "point"})


def make_uniform_grid(d: int, N: int) -> GridMeasure:
    if d < 1 or N < 1:
        raise MeasureError("d and N must be positive")
    if N < 2:
        raise MeasureError("uniform grid needs N >= 2")
    mass = np.full((N,) * d, float(N) ** (-d))
    return GridMeasure(_normalize(mass), meta={"kind": "uniform"})


def grid_point_mass(d: int, N: int, point) -> GridMeasure:
    """All mass in the grid cell containing ``point``."""
    point = np.mod(np.asarray(point, dtype=float).reshape(d), 1.0)
    idx = tuple(np.minimum((point * N).astype(int), N - 1))
    mass = np.zeros((N,) * d)
    mass[idx] = 1.0
    return GridMeasure(mass, meta={"kind": "grid-point"})


def product_measure(mu1: Measure, mu2: Measure) -> Measure:
    """Product measure on the concatenated coordinates."""
    if isinstance(mu1, GridMeasure) and isinstance(mu2, GridMeasure):
        if mu1.resolution != mu2.resolution:
            raise DimensionMismatch("grid product needs equal resolutions")
        mass = np.multiply.outer(mu1.mass, mu2.mass)
        return GridMeasure(_normalize(mass), meta={"kind": "product"})
    a = mu1 if isinstance(mu1, AtomicMeasure) else mu1.as_atomic()
    b = mu2 if isinstance(mu2, AtomicMeasure) else mu2.as_atomic()
    ia, ib = np.meshgrid(np.arange(len(a)), np.arange(len(b)), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    pts = np.hstack([a.points[ia], b.points[ib]])
    w = a.weights[ia] * b.weights[ib]
    return AtomicMeasure(pts, _normalize(w), meta={"kind": "product"})


def power_measure(mu: Measure, n: int) -> Measure:
    """``mu x ... x mu`` (n factors)."""
    out = mu
    for _ in range(n - 1):
        out = product_measure(out, mu)
    return out


# -- localisation -------------------------------------------------------------


def spline_bump(rho, radius: float):
    """1 on ``[0, radius]``, quartic rolloff ``(1 - t^2)^2`` to 0 at ``2 radius``."""
    rho = np.asarray(rho, dtype=float)
    t = np.clip((rho - radius) / radius, 0.0, 1.0)
    return (1.0 - t * t) ** 2


def localize(mu: Measure, center, radius: float) -> Measure:
    """Multiply ``mu`` by a smooth bump (1 on the ball, 0 beyond twice the radius) and renormalize."""
    if radius <= 0:
        raise MeasureError("radius must be positive")
    center = np.asarray(center, dtype=float).ravel()
    if center.size != mu.dim:
        raise DimensionMismatch("center dimension does not match the measure")
    if isinstance(mu, GridMeasure):
        rho = torus_distance_grid(center, mu.resolution)
        rho = np.broadcast_to(rho, mu.mass.shape)
        if not np.any(mu.mass[rho <= radius] > 0):
            raise MeasureError("the ball carries zero mass; localisation undefined")
        new = mu.mass * spline_bump(rho, radius)
        return GridMeasure(_normalize(new), meta={**mu.meta, "localized": [center.tolist(), radius]})
    rho = torus_distance_points(mu.points, center)
    if not np.any(mu.weights[rho <= radius] > 0):
        raise MeasureError("the ball carries zero mass; localisation undefined")
    w = mu.weights * spline_bump(rho, radius)
    keep = w > 0
    return AtomicMeasure(mu.points[keep], _normalize(w[keep]),
                         meta={**mu.meta, "localized": [center.tolist(), radius]})


# -- approximant of E(tau, d, n) ----------------------------------------------


def sup_norm(q) -> int:
    return int(max(abs(int(v)) for v in q))


def default_delta_rule(tau: float):
    return lambda q: float(sup_norm(q)) ** (-tau)


def _as_int_vectors(q_set, d: int) -> list[tuple[int, ...]]:
    out = []
    for q in q_set:
        v = tuple(int(x) for x in np.atleast_1d(q))
        if len(v) != d:
            raise DimensionMismatch(f"q={v} is not a {d}-vector")
        if not any(v):
            raise MeasureError("q must be nonzero")
        out.append(v)
    return out


def slab_union_indicator(N: int, d: int, n: int, qs, deltas) -> np.ndarray:
    """Cells of the ``N^{nd}`` grid whose centers lie in the union of L^n_{delta,q}."""
    ndim = n * d
    inside = np.zeros((N,) * ndim, dtype=bool)
    for q, delta in zip(qs, deltas):
        member = np.ones([1] * ndim, dtype=bool)
        for block in range(n):
            axes = range(block * d, (block + 1) * d)
            u = grid_linear_form(q, N, axes, ndim)
            member = member & (dist_to_int(u) < delta)
        inside |= member
    return inside


def approximant_measure(tau: float, d: int, n: int, q_set: Sequence, N: int,
                        delta_rule=None, depth: int = 1) -> GridMeasure:
    """Normalized uniform measure on a finite truncation of E(tau, d, n).

    ``q_set`` is sorted by sup-norm and split into ``depth`` consecutive levels;
    the support is the intersection over levels of the union over the level's
    ``q`` of ``L^n_{delta(q), q}``, resolved on an ``N^{nd}`` grid by cell center.
    Nothing is claimed about the Fourier decay of the result.
    """
    qs = _as_int_vectors(q_set, d)
    if not qs:
        raise MeasureError("q_set is empty")
    if depth < 1 or depth > len(qs):
        raise MeasureError("depth must be between 1 and len(q_set)")
    rule = delta_rule or default_delta_rule(tau)
    deltas = [float(rule(q)) for q in qs]
    for q, delta in zip(qs, deltas):
        if not 0.0 < delta < 0.5:
            raise MeasureError(f"delta({q}) = {delta} outside (0, 1/2)")
    need = 4.0 * max(sup_norm(q) for q in qs) / min(deltas)
    if N < need:
        raise MeasureError(f"resolution N={N} too coarse; need N >= {math.ceil(need)}")

    order = sorted(range(len(qs)), key=lambda i: (sup_norm(qs[i]), qs[i]))
    levels = np.array_split(np.array(order), depth)
    support = np.ones((N,) * (n * d), dtype=bool)
    for level in levels:
        support &= slab_union_indicator(N, d, n, [qs[i] for i in level], [deltas[i] for i in level])
    count = int(support.sum())
    if count == 0:
        raise MeasureError("empty intersection at the requested resolution")
    mass = support.astype(float)
    meta = {
        "kind": "approximant",
        "tau": tau, "d": d, "n": n, "depth": depth,
        "q_set": [list(q) for q in qs],
        "fraction": count / support.size,
    }
    return GridMeasure(_normalize(mass), meta=meta)


# -- random generators --------------------------------------------------------


def random_measure(d: int, N: int, seed: int, profile: str = "rough-density") -> GridMeasure:
    """Deterministic (given ``seed``) random grid measure for property tests."""
    if N < 2 or d < 1:
        raise MeasureError("random_measure needs d >= 1 and N >= 2")
    rng = np.random.default_rng(seed)
    shape = (N,) * d
    if profile == "sparse-atoms":
        cap = min(math.ceil(math.sqrt(N)) ** d, N**d)
        k = int(rng.integers(1, cap + 1))
        cells = rng.choice(N**d, size=k, replace=False)
        mass = np.zeros(N**d)
        mass[cells] = rng.exponential(size=k)
        mass = mass.reshape(shape)
    elif profile == "rough-density":
        mass = rng.exponential(size=shape)
    elif profile == "smooth-density":
        noise = rng.standard_normal(shape)
        freqs = np.meshgrid(*([np.fft.fftfreq(N, 1.0 / N)] * d), indexing="ij")
        k2 = sum(f**2 for f in freqs)
        k0 = max(2.0, N / 16.0)
        field = np.fft.ifftn(np.fft.fftn(noise) * np.exp(-k2 / k0**2)).real
        field /= field.std() or 1.0
        mass = np.exp(1.5 * field)
    else:
        raise MeasureError(f"unknown profile {profile!r}; expected one of {RANDOM_PROFILES}")
    return GridMeasure(_normalize(mass), meta={"kind": "random", "seed": seed, "profile": profile})
