"""Fourier coefficients of torus measures at integer frequencies.

Convention: ``mu_hat(xi) = sum_atoms w * exp(-2 pi i x . xi)``.  Grid measures
use the cell-center atom model (see :mod:`nonsalem.measures`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .errors import AliasError, CoverageError, DimensionMismatch, FitError
from .measures import AtomicMeasure, GridMeasure

TWO_PI = 2.0 * math.pi
MAG_FLOOR = 1e-13
# Radius comparisons such as |xi| <= 2Q/delta are made with this relative slack so
# that exact boundary frequencies survive floating-point division.
RADIUS_RTOL = 1e-12

_ATOM_CHUNK = 1 << 22


# -- tables -------------------------------------------------------------------


def _as_freqs(freqs, dim: int) -> np.ndarray:
    f = np.asarray(freqs, dtype=np.int64)
    if f.ndim == 1:
        f = f.reshape(-1, dim) if dim > 1 or f.size != 1 else f.reshape(1, 1)
    if f.ndim != 2 or f.shape[1] != dim:
        raise DimensionMismatch(f"frequencies must have shape (m, {dim})")
    return f


def _lex_order(freqs: np.ndarray) -> np.ndarray:
    return np.lexsort(freqs.T[::-1]) if freqs.size else np.arange(0)


class FourierTable:
    """Coefficients on the full box ``|xi|_inf <= box_radius`` (dense storage)."""

    def __init__(self, coeffs: np.ndarray, meta: dict | None = None):
        coeffs = np.asarray(coeffs, dtype=complex)
        side = coeffs.shape[0]
        if coeffs.ndim < 1 or side % 2 == 0 or len(set(coeffs.shape)) != 1:
            raise ValueError("dense table must be a (2R+1)^d cube")
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.dim = coeffs.ndim
        self.box_radius = side // 2
        self.meta = dict(meta or {})

    # lookups ----------------------------------------------------------------
    def covers(self, freqs) -> np.ndarray:
        f = _as_freqs(freqs, self.dim)
        return np.all(np.abs(f) <= self.box_radius, axis=1)

    def lookup(self, freqs) -> np.ndarray:
        f = _as_freqs(freqs, self.dim)
        ok = self.covers(f)
        if not np.all(ok):
            raise CoverageError(f[np.argmin(ok)])
        return self.coeffs[tuple((f + self.box_radius).T)]

    def __getitem__(self, xi) -> complex:
        return complex(self.lookup(np.asarray(xi).reshape(1, self.dim))[0])

    def entries(self) -> tuple[np.ndarray, np.ndarray]:
        """All (frequency, value) pairs in ascending lexicographic order."""
        R = self.box_radius
        axes = [np.arange(-R, R + 1)] * self.dim
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        return grid, self.coeffs.reshape(-1)

    def scaled(self, factor: complex) -> "FourierTable":
        return FourierTable(self.coeffs * factor, meta=self.meta)


class SparseFourierTable(FourierTable):
    """Coefficients at an explicit finite set of frequencies."""

    def __init__(self, freqs, values, dim: int, meta: dict | None = None):
        f = _as_freqs(freqs, dim)
        v = np.asarray(values, dtype=complex).reshape(-1)
        if v.shape[0] != f.shape[0]:
            raise DimensionMismatch("one value per frequency required")
        order = _lex_order(f)
        f, v = f[order], v[order]
        f.setflags(write=False)
        v.setflags(write=False)
        self.freqs, self.values = f, v
        self.dim = dim
        self.box_radius = int(np.abs(f).max()) if f.size else 0
        self.meta = dict(meta or {})
        self._keys = self._encode(f)
        if np.any(np.diff(self._keys) == 0):
            raise ValueError("duplicate frequencies")

    def _encode(self, f: np.ndarray) -> np.ndarray:
        base = 2 * self.box_radius + 1
        keys = np.zeros(f.shape[0], dtype=np.int64)
        for col in range(self.dim):
            keys = keys * base + (f[:, col] + self.box_radius)
        return keys

    def _positions(self, f: np.ndarray):
        inbox = np.all(np.abs(f) <= self.box_radius, axis=1)
        pos = np.zeros(f.shape[0], dtype=np.int64)
        hit = np.zeros(f.shape[0], dtype=bool)
        if np.any(inbox):
            k = self._encode(f[inbox])
            p = np.searchsorted(self._keys, k)
            p = np.minimum(p, len(self._keys) - 1)
            found = self._keys[p] == k
            pos[inbox] = p
            hit[inbox] = found
        return pos, hit

    def covers(self, freqs) -> np.ndarray:
        return self._positions(_as_freqs(freqs, self.dim))[1]

    def lookup(self, freqs) -> np.ndarray:
        f = _as_freqs(freqs, self.dim)
        pos, hit = self._positions(f)
        if not np.all(hit):
            raise CoverageError(f[np.argmin(hit)])
        return self.values[pos]

    def entries(self):
        return self.freqs, self.values

    def scaled(self, factor: complex) -> "SparseFourierTable":
        return SparseFourierTable(self.freqs, self.values * factor, self.dim, meta=self.meta)


class FunctionTable(FourierTable):
    """Coefficients given by a vectorised function on the box (synthetic tables)."""

    def __init__(self, dim: int, box_radius: int, fn: Callable[[np.ndarray], np.ndarray],
                 meta: dict | None = None, fast_sum: Callable | None = None):
        self.dim = dim
        self.box_radius = int(box_radius)
        self.fn = fn
        self.meta = dict(meta or {})
        # optional closed-form magnitude sum over a filter; returns None to decline
        self.fast_sum = fast_sum

    def covers(self, freqs) -> np.ndarray:
        f = _as_freqs(freqs, self.dim)
        return np.all(np.abs(f) <= self.box_radius, axis=1)

    def lookup(self, freqs) -> np.ndarray:
        f = _as_freqs(freqs, self.dim)
        ok = self.covers(f)
        if not np.all(ok):
            raise CoverageError(f[np.argmin(ok)])
        return np.asarray(self.fn(f), dtype=complex).reshape(-1)

    def entries(self):
        R = self.box_radius
        axes = [np.arange(-R, R + 1)] * self.dim
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        return grid, self.lookup(grid)

    def dense(self) -> FourierTable:
        f, v = self.entries()
        side = 2 * self.box_radius + 1
        return FourierTable(v.reshape((side,) * self.dim), meta=self.meta)

    def scaled(self, factor: complex) -> "FunctionTable":
        fn = self.fn
        return FunctionTable(self.dim, self.box_radius, lambda f: factor * fn(f), meta=self.meta)


@lru_cache(maxsize=64)
def _power_prefix(beta: float) -> np.ndarray:
    """prefix[M] = sum_{m=1}^{M} m^-beta for M <= 10^5."""
    return np.concatenate([[0.0], np.cumsum(np.arange(1, 100_001, dtype=float) ** -beta)])


def power_sum(beta: float, M: int) -> float:
    """``sum_{m=1}^{M} m^-beta``; Euler-Maclaurin beyond the first 10^5 terms."""
    M = int(M)
    prefix = _power_prefix(float(beta))
    if M < prefix.size:
        return float(prefix[M])
    total = float(prefix[-1])
    a, b = float(prefix.size), float(M)

    def f(x, k=0):
        # k-th derivative of x^-beta
        c = 1.0
        for j in range(k):
            c *= -(beta + j)
        return c * x ** (-beta - k)

    integral = math.log(b / a) if beta == 1 else (b ** (1 - beta) - a ** (1 - beta)) / (1 - beta)
    tail = integral + (f(a) + f(b)) / 2 + (f(b, 1) - f(a, 1)) / 12 - (f(b, 3) - f(a, 3)) / 720
    return total + tail


def power_law_table(dim: int, box_radius: int, exponent: float, amplitude: float = 1.0) -> FunctionTable:
    """Synthetic table ``coeff(xi) = amplitude * |xi|^-exponent`` (1 at xi = 0).

    Dual sums along a single line (``dim == 1`` multiples, or linear forms with
    one fold) are summed in closed form so the table may be arbitrarily large.
    """

    def fn(f):
        r = np.sqrt(np.sum(f.astype(float) ** 2, axis=1))
        out = np.ones(f.shape[0])
        nz = r > 0
        out[nz] = amplitude * r[nz] ** (-exponent)
        return out

    def fast(pred):
        zero = 1.0 if getattr(pred, "include_zero", False) else 0.0
        if isinstance(pred, MultiplesInBall) and dim == 1:
            M = Ball(pred.radius / pred.Q).limit()
            if pred.Q * M > box_radius:
                return None
            return 2.0 * amplitude * float(pred.Q) ** -exponent * power_sum(exponent, M)
        if isinstance(pred, LinearFormFrequencies) and pred.n == 1 and len(pred.q) == dim:
            T = pred.t_limit()
            if T * max(abs(v) for v in pred.q) > box_radius:
                return None
            qn = math.sqrt(sum(v * v for v in pred.q))
            return zero + 2.0 * amplitude * qn**-exponent * power_sum(exponent, T)
        return None

    return FunctionTable(dim, box_radius, fn, meta={"provenance": f"power-law:{exponent}"}, fast_sum=fast)


def lebesgue_table(dim: int, box_radius: int) -> FunctionTable:
    """Exact coefficients of Lebesgue measure on the torus."""

    def fn(f):
        return np.all(f == 0, axis=1).astype(float)

    def fast(pred):
        if not hasattr(pred, "frequencies"):
            return None
        return 1.0 if getattr(pred, "include_zero", False) else 0.0

    return FunctionTable(dim, box_radius, fn, meta={"provenance": "lebesgue"}, fast_sum=fast)


# -- transforms ---------------------------------------------------------------


def _atomic_dense(mu: AtomicMeasure, R: int) -> np.ndarray:
    d = mu.dim
    xi = np.arange(-R, R + 1)
    side = xi.size
    out = np.zeros(side**d, dtype=complex)
    chunk = max(1, _ATOM_CHUNK // side**d)
    for start in range(0, len(mu), chunk):
        pts = mu.points[start:start + chunk]
        acc = mu.weights[start:start + chunk].astype(complex)[:, None]
        for a in range(d):
            phase = np.exp(-1j * TWO_PI * np.outer(pts[:, a], xi))
            acc = (acc[:, :, None] * phase[:, None, :]).reshape(pts.shape[0], -1)
        out += acc.sum(axis=0)
    return out.reshape((side,) * d)


def _atomic_at(mu: AtomicMeasure, freqs: np.ndarray) -> np.ndarray:
    out = np.zeros(freqs.shape[0], dtype=complex)
    chunk = max(1, _ATOM_CHUNK // max(1, freqs.shape[0]))
    ff = freqs.astype(float)
    for start in range(0, len(mu), chunk):
        pts = mu.points[start:start + chunk]
        phase = np.exp(-1j * TWO_PI * (pts @ ff.T))
        out += mu.weights[start:start + chunk] @ phase
    return out


def _grid_gather(mu: GridMeasure, F: np.ndarray, freqs: np.ndarray) -> np.ndarray:
    N = mu.resolution
    idx = tuple(np.mod(freqs, N).T)
    # cell-center phase exp(-pi i xi/N) per axis
    phase = np.exp(-1j * math.pi * freqs.sum(axis=1) / N)
    return F[idx] * phase


def transform(mu, box_radius: int, allow_alias: bool = False) -> FourierTable:
    """Dense Fourier table of ``mu`` on ``|xi|_inf <= box_radius``."""
    if box_radius < 1:
        raise ValueError("box_radius must be >= 1")
    R = int(box_radius)
    if isinstance(mu, AtomicMeasure):
        coeffs = _atomic_dense(mu, R)
        return FourierTable(coeffs, meta={"provenance": "atomic"})
    if not isinstance(mu, GridMeasure):
        raise TypeError(f"cannot transform {type(mu).__name__}")
    N = mu.resolution
    if R > N // 2 and not allow_alias:
        raise AliasError(f"box_radius {R} exceeds the alias guard N/2 = {N // 2}")
    F = np.fft.fftn(mu.mass)
    xi = np.arange(-R, R + 1)
    sub = F[np.ix_(*([np.mod(xi, N)] * mu.dim))]
    for a in range(mu.dim):
        shape = [1] * mu.dim
        shape[a] = xi.size
        sub = sub * np.exp(-1j * math.pi * xi / N).reshape(shape)
    return FourierTable(sub, meta={"provenance": "grid", "resolution": N})


def transform_at(mu, freqs, allow_alias: bool = False) -> SparseFourierTable:
    """Fourier coefficients of ``mu`` at an explicit list of frequencies.

    For grid measures ``allow_alias=True`` evaluates the exact cell-center atom
    model beyond ``N/2``; the verifiers use this because every bound they check
    holds for that discrete measure exactly.
    """
    f = _as_freqs(freqs, mu.dim)
    f = np.unique(f, axis=0)
    if isinstance(mu, AtomicMeasure):
        vals = _atomic_at(mu, f)
        return SparseFourierTable(f, vals, mu.dim, meta={"provenance": "atomic"})
    N = mu.resolution
    if not allow_alias and f.size and np.abs(f).max() > N // 2:
        bad = f[np.argmax(np.abs(f).max(axis=1))]
        raise AliasError(f"frequency {tuple(int(v) for v in bad)} beyond the alias guard N/2 = {N // 2}")
    F = np.fft.fftn(mu.mass)
    vals = _grid_gather(mu, F, f)
    return SparseFourierTable(f, vals, mu.dim, meta={"provenance": "grid", "resolution": N})


def exact_table(mu, box_radius: int = 1 << 40) -> FunctionTable:
    """Lazy table of the exact (cell-center atom) transform at any frequency.

    The grid FFT is computed once and gathered on demand, so verifiers can query
    sparse frequency sets far beyond ``N/2``.
    """
    if isinstance(mu, AtomicMeasure):
        def fn(f):
            return _atomic_at(mu, f)
    else:
        F = np.fft.fftn(mu.mass)

        def fn(f):
            return _grid_gather(mu, F, f)
    return FunctionTable(mu.dim, box_radius, fn, meta={"provenance": "exact"})


def direct_transform(mu, freqs) -> np.ndarray:
    """Plain double loop over atoms and frequencies (test oracle)."""
    atoms = mu if isinstance(mu, AtomicMeasure) else mu.as_atomic()
    out = []
    for xi in np.atleast_2d(freqs):
        total = 0j
        for x, w in zip(atoms.points, atoms.weights):
            total += w * complex(math.cos(TWO_PI * float(np.dot(x, xi))),
                                 -math.sin(TWO_PI * float(np.dot(x, xi))))
        out.append(total)
    return np.array(out)


# -- frequency filters --------------------------------------------------------


def _norm(f: np.ndarray, norm: str) -> np.ndarray:
    if norm == "euclid":
        return np.sqrt(np.sum(f.astype(float) ** 2, axis=1))
    if norm == "sup":
        return np.abs(f).max(axis=1).astype(float)
    raise ValueError(f"unknown norm {norm!r}")


def _box(radius: int, dim: int) -> np.ndarray:
    axes = [np.arange(-radius, radius + 1)] * dim
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)


@dataclass(frozen=True)
class Ball:
    """All xi with ``|xi| <= radius`` (optionally excluding 0)."""

    radius: float
    norm: str = "euclid"
    include_zero: bool = False

    def limit(self) -> int:
        return int(math.floor(self.radius * (1 + RADIUS_RTOL)))

    def frequencies(self, dim: int) -> np.ndarray:
        f = _box(self.limit(), dim)
        r = _norm(f, self.norm)
        keep = r <= self.radius * (1 + RADIUS_RTOL)
        if not self.include_zero:
            keep &= r > 0
        return f[keep]

    def __call__(self, f: np.ndarray) -> np.ndarray:
        r = _norm(np.atleast_2d(f), self.norm)
        keep = r <= self.radius * (1 + RADIUS_RTOL)
        return keep if self.include_zero else keep & (r > 0)


@dataclass(frozen=True)
class MultiplesInBall:
    """``xi = Q m`` with ``0 < |xi| <= radius``: the dual sum of the lattice-counting bound."""

    Q: int
    radius: float
    norm: str = "euclid"

    def frequencies(self, dim: int) -> np.ndarray:
        m = Ball(self.radius / self.Q, self.norm).frequencies(dim)
        return self.Q * m


@dataclass(frozen=True)
class LinearFormFrequencies:
    """``(t_1 q, ..., t_n q)`` for ``0 < |t|_inf <= t_radius`` (``< t_radius`` if strict)."""

    q: tuple
    n: int
    t_radius: float
    strict: bool = False
    include_zero: bool = False

    def t_limit(self) -> int:
        """Largest admissible |t|_inf."""
        if self.strict:
            return max(int(math.ceil(self.t_radius * (1 - RADIUS_RTOL))) - 1, 0)
        return int(math.floor(self.t_radius * (1 + RADIUS_RTOL)))

    def t_values(self) -> np.ndarray:
        t = _box(self.t_limit(), self.n)
        if not self.include_zero:
            t = t[np.abs(t).max(axis=1) > 0]
        return t

    def frequencies(self, dim: int) -> np.ndarray:
        q = np.asarray(self.q, dtype=np.int64)
        if dim != self.n * q.size:
            raise DimensionMismatch(f"table dimension {dim} != n*d = {self.n * q.size}")
        t = self.t_values()
        return (t[:, :, None] * q[None, None, :]).reshape(t.shape[0], -1)


@dataclass(frozen=True)
class Explicit:
    freqs: tuple

    def frequencies(self, dim: int) -> np.ndarray:
        return _as_freqs(np.array(self.freqs), dim)


def restricted_sum(table: FourierTable, predicate, magnitude_only: bool = True):
    """Sum of ``|coeff|`` (or ``coeff``) over the frequencies selected by ``predicate``.

    Filters with a ``frequencies`` method enumerate their exact frequency set and
    every selected frequency must be in the table (``CoverageError`` names the
    first missing one).  A bare callable is applied to the table's own entries.
    """
    fast = getattr(table, "fast_sum", None)
    if fast is not None:
        value = fast(predicate)
        if value is not None:
            return float(value) if magnitude_only else complex(value)
    if hasattr(predicate, "frequencies"):
        f = predicate.frequencies(table.dim)
        f = f[_lex_order(f)]
        vals = table.lookup(f) if f.size else np.zeros(0, dtype=complex)
    else:
        allf, allv = table.entries()
        keep = np.asarray(predicate(allf), dtype=bool)
        vals = allv[keep]
    if magnitude_only:
        return float(np.sum(np.abs(vals)))
    return complex(np.sum(vals))


# -- decay --------------------------------------------------------------------


@dataclass
class DecayProfile:
    shells: list
    fitted_s: float
    cap: float
    raw_s: float = float("nan")
    saturated: bool = False
    meta: dict = field(default_factory=dict)

    def rows(self) -> Iterable[tuple[float, float]]:
        return [(float(r), float(p)) for r, p in self.shells]


def decay_profile(table: FourierTable, shell_base: float = 1.5, floor: float = MAG_FLOOR) -> DecayProfile:
    """Shell-peak regression for the exponent s in ``|mu_hat(xi)| ~ |xi|^{-s/2}``."""
    if shell_base <= 1:
        raise ValueError("shell_base must exceed 1")
    if table.box_radius < shell_base**2:
        raise FitError("table box must be at least shell_base^2")
    f, v = table.entries()
    r = _norm(f, "euclid")
    mag = np.abs(v)
    nz = r > 0
    r, mag = r[nz], mag[nz]
    shells = []
    k = 0
    while shell_base**k <= table.box_radius:
        lo = shell_base**k
        sel = (r >= lo) & (r < 2 * lo)
        if np.any(sel):
            shells.append((lo, float(mag[sel].max())))
        k += 1
    if len(shells) < 3:
        raise FitError("fewer than 3 usable shells")
    radii = np.array([s[0] for s in shells])
    peaks = np.array([s[1] for s in shells])
    cap = float(table.dim)
    floored = peaks < floor
    if np.all(floored):
        return DecayProfile(shells, cap, cap, raw_s=float("inf"), saturated=True)
    slope = np.polyfit(np.log(radii), np.log(np.maximum(peaks, floor)), 1)[0]
    raw = -2.0 * float(slope)
    return DecayProfile(shells, float(np.clip(raw, 0.0, cap)) + 0.0, cap, raw_s=raw + 0.0,
                        saturated=bool(np.any(floored)))
