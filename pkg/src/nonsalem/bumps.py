"""Mollifier profiles used to smooth the plane measures L_q.

``compact-support``
    ``phi(x) = C exp(-1 / (1 - |x|^2))`` on the open unit ball, zero outside.
    Smooth with every derivative vanishing on the sphere, so its transform decays
    faster than any power.  Radial; transform computed by a Hankel quadrature.

``band-limited``
    Product of continuous Fejer kernels ``F(x) = a^-1 (sin(pi a x) / (pi x))^2``.
    Nonnegative, transform ``prod_j (1 - |xi_j| / a)_+`` supported in the cube
    ``[-a, a]^d``.  With ``a < 1/2`` it is bounded below on ``B_2(0)``.

Both satisfy ``phi_hat(0) = 1``.  The scaled profile is ``phi(x / width)``
(no ``width^-d`` prefactor), so its transform is ``width^d phi_hat(width xi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma, jv

KINDS = ("compact-support", "band-limited")

_RADIAL_NODES = 400
_PROJ_NODES = 160


def _bump_core(r):
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - r[inside] ** 2))
    return out


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere in R^k (k >= 1; S^0 has two points)."""
    return float(2.0 * math.pi ** (k / 2) / gamma(k / 2))


def ball_volume(k: int) -> float:
    """Volume of the unit ball in R^k (1 for k = 0)."""
    return float(math.pi ** (k / 2) / gamma(k / 2 + 1))


@lru_cache(maxsize=None)
def _radial_nodes():
    x, w = leggauss(_RADIAL_NODES)
    return (x + 1) / 2, w / 2


@lru_cache(maxsize=None)
def _bump_normalizer(d: int) -> float:
    r, w = _radial_nodes()
    return 1.0 / (sphere_area(d) * float(np.sum(w * _bump_core(r) * r ** (d - 1))))


@dataclass(frozen=True)
class BumpProfile:
    kind: str
    width: float
    dim: int
    band: float = 0.25

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.width <= 0 or self.dim < 1:
            raise ValueError("width and dim must be positive")
        if self.kind == "band-limited" and not 0 < self.band < 0.5:
            raise ValueError("Fejer band must lie in (0, 1/2)")

    # unit-scale profile ------------------------------------------------------
    def base(self, x) -> np.ndarray:
        """phi at points ``x`` of shape (..., d)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "compact-support":
            return _bump_normalizer(self.dim) * _bump_core(np.sqrt(np.sum(x * x, axis=-1)))
        return np.prod(fejer(x, self.band), axis=-1)

    def base_hat(self, xi) -> np.ndarray:
        """phi_hat at real frequencies ``xi`` of shape (..., d)."""
        xi = np.asarray(xi, dtype=float)
        if self.kind == "compact-support":
            return self.radial_hat(np.sqrt(np.sum(xi * xi, axis=-1)))
        return np.prod(np.clip(1.0 - np.abs(xi) / self.band, 0.0, None), axis=-1)

    def radial_hat(self, s) -> np.ndarray:
        """Radial profile of phi_hat (compact-support kind only)."""
        if self.kind != "compact-support":
            raise ValueError("radial_hat is defined for the radial profile only")
        return _hankel(np.asarray(s, dtype=float), self.dim)

    def sup(self) -> float:
        """|phi|_inf."""
        if self.kind == "compact-support":
            return _bump_normalizer(self.dim) * math.exp(-1.0)
        return self.band ** self.dim

    def min_on_ball(self, radius: float) -> float:
        """min of phi over the closed ball ``B_radius(0)``."""
        if self.kind == "compact-support":
            return float(self.base(np.array([radius] + [0.0] * (self.dim - 1))))
        if radius >= 1.0 / self.band:
            return 0.0
        # every Fejer factor decreases on [0, 1/a), so the minimum sits on the
        # sphere; scan its positive orthant through x_j^2 = radius^2 p_j, p in the simplex
        p = _simplex_samples(self.dim)
        return float(self.base(radius * np.sqrt(p)).min())

    def support_radius(self) -> float:
        return 1.0 if self.kind == "compact-support" else math.inf

    def band_radius(self) -> float:
        """Euclidean radius outside which phi_hat vanishes."""
        return math.inf if self.kind == "compact-support" else self.band * math.sqrt(self.dim)

    # scaled profile ----------------------------------------------------------
    def __call__(self, x) -> np.ndarray:
        return self.base(np.asarray(x, dtype=float) / self.width)

    def hat(self, xi) -> np.ndarray:
        return self.width**self.dim * self.base_hat(self.width * np.asarray(xi, dtype=float))

    def line_hat(self, direction, s) -> np.ndarray:
        """phi_hat(s * direction) for scalars ``s`` along an integer direction."""
        direction = np.asarray(direction, dtype=float)
        s = np.asarray(s, dtype=float)
        return self.base_hat(s[..., None] * direction)

    def projection(self, direction, h) -> np.ndarray:
        """Integral of phi over the hyperplane ``{x : x . e = h}``, ``e = direction/|direction|``.

        Compact-support kind only: reduces to a 1-D radial quadrature.
        """
        if self.kind != "compact-support":
            raise ValueError("plane integrals are evaluated spatially for the compact profile only")
        return _radial_projection(np.asarray(h, dtype=float), self.dim)


def _simplex_samples(d: int) -> np.ndarray:
    if d == 1:
        return np.ones((1, 1))
    if d == 2:
        t = np.linspace(0.0, 1.0, 2001)
        return np.stack([t, 1 - t], axis=1)
    rng = np.random.default_rng(0)
    pts = rng.dirichlet(np.ones(d), size=20000)
    return np.vstack([pts, np.eye(d), np.full((1, d), 1.0 / d)])


def fejer(x, a: float) -> np.ndarray:
    """Continuous Fejer kernel with transform ``(1 - |xi|/a)_+``."""
    x = np.asarray(x, dtype=float)
    out = np.full_like(x, a)
    nz = x != 0
    out[nz] = np.sin(math.pi * a * x[nz]) ** 2 / (math.pi**2 * x[nz] ** 2 * a)
    return out


def _hankel(s: np.ndarray, d: int) -> np.ndarray:
    r, w = _radial_nodes()
    flat = np.abs(s).reshape(-1)
    out = np.empty(flat.shape)
    C = _bump_normalizer(d)
    base = w * _bump_core(r)
    zero = flat == 0
    out[zero] = 1.0
    if np.any(~zero):
        ss = flat[~zero][:, None]
        nu = d / 2 - 1
        kern = jv(nu, 2 * math.pi * ss * r[None, :]) * r[None, :] ** (d / 2)
        out[~zero] = C * 2 * math.pi * ss[:, 0] ** (1 - d / 2) * (kern @ base)
    return out.reshape(s.shape)


@lru_cache(maxsize=None)
def _proj_nodes():
    x, w = leggauss(_PROJ_NODES)
    return (x + 1) / 2, w / 2


def _radial_projection(h: np.ndarray, d: int) -> np.ndarray:
    """``int_{R^{d-1}} phi(sqrt(h^2 + |u|^2)) du`` for the compact radial bump."""
    C = _bump_normalizer(d)
    h = np.abs(h)
    if d == 1:
        return C * _bump_core(h)
    flat = h.reshape(-1)
    out = np.zeros(flat.shape)
    inside = flat < 1
    if np.any(inside):
        hh = flat[inside][:, None]
        umax = np.sqrt(1 - hh**2)
        x, w = _proj_nodes()
        u = umax * x[None, :]
        vals = _bump_core(np.sqrt(hh**2 + u**2)) * u ** (d - 2)
        out[inside] = C * sphere_area(d - 1) * umax[:, 0] * (vals @ w)
    return out.reshape(h.shape)
