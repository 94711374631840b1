"""Lattice neighbourhoods A(delta, Q), linear-form slabs L_{delta,q} and plane measures L_q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from ._geometry import dist_to_int, grid_linear_form, lattice_distance
from .bumps import BumpProfile, ball_volume
from .errors import DimensionMismatch
from .fourier import FourierTable, TWO_PI
from .measures import AtomicMeasure, GridMeasure


@dataclass(frozen=True)
class LatticeNeighborhood:
    """A(delta, Q) = {x in R^n : ||Q x|| < delta}."""

    dim: int
    Q: int
    delta: float

    def __post_init__(self):
        if self.dim < 1 or self.Q < 1:
            raise ValueError("dim and Q must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")

    @property
    def overlapping(self) -> bool:
        return self.delta > 0.5


@dataclass(frozen=True)
class LinearFormSpec:
    """The slab union L_{delta,q} in R^d and its n-fold product."""

    q: tuple
    delta: float
    folds: int = 1

    def __post_init__(self):
        q = tuple(int(v) for v in np.atleast_1d(self.q))
        object.__setattr__(self, "q", q)
        if not any(q):
            raise ValueError("q must be nonzero")
        if self.delta <= 0 or self.folds < 1:
            raise ValueError("delta and folds must be positive")

    @property
    def d(self) -> int:
        return len(self.q)

    @property
    def qnorm(self) -> float:
        return math.sqrt(sum(v * v for v in self.q))

    @property
    def delta_star(self) -> float:
        """Euclidean half-thickness of each slab."""
        return self.delta / self.qnorm

    @property
    def overlapping(self) -> bool:
        return self.delta > 0.5


@dataclass(frozen=True)
class PlaneUnionMeasure:
    """Surface measure on L_q = union over r in Z of the planes q.x = r."""

    q: tuple

    def __post_init__(self):
        q = tuple(int(v) for v in np.atleast_1d(self.q))
        object.__setattr__(self, "q", q)
        if not any(q):
            raise ValueError("q must be nonzero")

    @property
    def d(self) -> int:
        return len(self.q)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.q))

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, (abs(v) for v in self.q))

    @property
    def solved_axis(self) -> int:
        """Coordinate eliminated in the plane parameterization (largest |q_j|)."""
        return int(np.argmax(np.abs(self.q)))


# -- membership ---------------------------------------------------------------


def in_lattice_neighborhood(x, nb: LatticeNeighborhood) -> bool:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != nb.dim:
        raise DimensionMismatch("point dimension does not match the neighbourhood")
    return bool(lattice_distance(nb.Q * x) < nb.delta)


def in_linear_form(x, spec: LinearFormSpec) -> bool:
    """Membership of a d-vector in L_{delta,q}, or of an nd-vector in the n-fold product."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size % spec.d:
        raise DimensionMismatch("point dimension is not a multiple of d")
    u = x.reshape(-1, spec.d) @ np.asarray(spec.q, dtype=float)
    return bool(np.all(dist_to_int(u) < spec.delta))


# -- measure evaluation -------------------------------------------------------


def _lattice_dist_grid(N: int, n: int, Q: int) -> np.ndarray:
    c = (np.arange(N) + 0.5) / N
    one = dist_to_int(Q * c) ** 2
    sq = np.zeros([1] * n)
    for ax in range(n):
        shape = [1] * n
        shape[ax] = N
        sq = sq + one.reshape(shape)
    return np.sqrt(sq)


def measure_of_lattice_neighborhood(mu, nb: LatticeNeighborhood, return_error: bool = False):
    """mu(A(delta, Q)); grid cells count by their center.

    With ``return_error`` also returns the mass of grid cells that may straddle
    the boundary, an upper bound on the discretisation error of the count.
    """
    if mu.dim != nb.dim:
        raise DimensionMismatch(f"measure dimension {mu.dim} != {nb.dim}")
    if isinstance(mu, AtomicMeasure):
        inside = lattice_distance(nb.Q * mu.points, axis=1) < nb.delta
        value = float(np.sum(mu.weights[inside]))
        return (value, 0.0) if return_error else value
    N = mu.resolution
    dist = np.broadcast_to(_lattice_dist_grid(N, nb.dim, nb.Q), mu.mass.shape)
    value = float(np.sum(mu.mass[dist < nb.delta]))
    if not return_error:
        return value
    slack = nb.Q * math.sqrt(nb.dim) / (2 * N)
    err = float(np.sum(mu.mass[np.abs(dist - nb.delta) <= slack]))
    return value, err


def linear_form_indicator(mu, spec: LinearFormSpec) -> np.ndarray:
    """Boolean mask over atoms (or grid cells) lying in the n-fold product."""
    nd = spec.folds * spec.d
    if mu.dim != nd:
        raise DimensionMismatch(f"measure dimension {mu.dim} != n*d = {nd}")
    q = np.asarray(spec.q, dtype=float)
    if isinstance(mu, AtomicMeasure):
        u = mu.points.reshape(len(mu), spec.folds, spec.d) @ q
        return np.all(dist_to_int(u) < spec.delta, axis=1)
    N = mu.resolution
    inside = np.ones([1] * nd, dtype=bool)
    for block in range(spec.folds):
        u = grid_linear_form(spec.q, N, range(block * spec.d, (block + 1) * spec.d), nd)
        inside = inside & (dist_to_int(u) < spec.delta)
    return np.broadcast_to(inside, mu.mass.shape)


def measure_of_linear_form(mu, spec: LinearFormSpec) -> float:
    mask = linear_form_indicator(mu, spec)
    w = mu.weights if isinstance(mu, AtomicMeasure) else mu.mass
    return float(np.sum(w[mask]))


# -- plane measures -----------------------------------------------------------


def in_integer_multiples(k, q) -> bool:
    """True iff k = t q for some integer t."""
    k = [int(v) for v in np.atleast_1d(k)]
    q = [int(v) for v in q]
    j = next(i for i, v in enumerate(q) if v)
    if k[j] % q[j]:
        return False
    t = k[j] // q[j]
    return all(ki == t * qi for ki, qi in zip(k, q))


def plane_fourier_coefficient(pm: PlaneUnionMeasure, k) -> float:
    """Closed form: |q| on Z q, 0 elsewhere."""
    return pm.norm if in_integer_multiples(k, pm.q) else 0.0


def _midpoint_factors(pm: PlaneUnionMeasure, k_solved, k_free: list, mesh: int):
    """Factors of the midpoint rule for exp(-2 pi i k.x) over L_q on the unit cube.

    Sheets of L_q are graphs ``x_j = (r - sum_a q_a x_a) / q_j (mod 1)`` over the free
    coordinates.  Since ``k_j`` is an integer the phase splits into a sum over the
    ``|q_j|`` sheets times one 1-D midpoint sum per free axis, each of frequency
    ``k_a - k_j q_a / q_j``.  ``k_free`` holds one frequency list per free axis.
    Returns ``(sheet, axis_sums)`` with ``sheet`` indexed by ``k_solved`` and
    ``axis_sums[i]`` of shape ``(len(k_solved), len(k_free[i]))``.
    """
    j = pm.solved_axis
    qj = pm.q[j]
    kj = np.asarray(k_solved, dtype=float)
    r = np.arange(abs(qj))
    sheet = np.exp(-1j * TWO_PI * np.outer(kj, r) / qj).sum(axis=1)
    nodes = (np.arange(mesh) + 0.5) / mesh
    axis_sums = []
    free = [a for a in range(pm.d) if a != j]
    for a, ka in zip(free, k_free):
        eff = np.asarray(ka, dtype=float)[None, :] - kj[:, None] * pm.q[a] / qj
        axis_sums.append(np.exp(-1j * TWO_PI * eff[..., None] * nodes).mean(axis=-1))
    return sheet, axis_sums


def plane_fourier_quadrature(pm: PlaneUnionMeasure, k, mesh: int = 512) -> complex:
    """Midpoint rule (``mesh`` nodes per free axis) for exp(-2 pi i k.x) against L_q."""
    if mesh < 2:
        raise ValueError("mesh must be >= 2")
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.size != pm.d:
        raise DimensionMismatch("frequency dimension does not match q")
    j = pm.solved_axis
    free = [a for a in range(pm.d) if a != j]
    sheet, axis_sums = _midpoint_factors(pm, k[j:j + 1], [k[a:a + 1] for a in free], mesh)
    value = complex(pm.norm / abs(pm.q[j]) * sheet[0])
    for sums in axis_sums:
        value *= complex(sums[0, 0])
    return value


def plane_fourier_table(pm: PlaneUnionMeasure, box_radius: int, mesh: int = 512) -> FourierTable:
    """Midpoint-rule values of L_q-hat on the whole box."""
    R = int(box_radius)
    xi = np.arange(-R, R + 1)
    j = pm.solved_axis
    free = [a for a in range(pm.d) if a != j]
    sheet, axis_sums = _midpoint_factors(pm, xi, [xi] * len(free), mesh)
    out = sheet * (pm.norm / abs(pm.q[j]))
    for sums in axis_sums:
        # out: (k_j, k_free...) ; sums: (k_j, k_a)
        out = out[..., None] * sums.reshape(sums.shape[:1] + (1,) * (out.ndim - 1) + sums.shape[1:])
    # axes are (k_j, k_free...); restore coordinate order
    out = np.moveaxis(out, list(range(pm.d)), [j] + free)
    q_str = ",".join(str(v) for v in pm.q)
    return FourierTable(out, meta={"provenance": f"plane:{q_str}", "mesh": mesh})


def plane_coefficient_table(pm: PlaneUnionMeasure, box_radius: int) -> FourierTable:
    """Closed-form L_q-hat on the box."""
    R = int(box_radius)
    side = 2 * R + 1
    out = np.zeros((side,) * pm.d)
    q = np.asarray(pm.q)
    bound = R // int(np.abs(q).max())
    for t in range(-bound, bound + 1):
        out[tuple(t * q + R)] = pm.norm
    q_str = ",".join(str(v) for v in pm.q)
    return FourierTable(out, meta={"provenance": f"plane:{q_str}", "closed_form": True})


def ball_mass(pm: PlaneUnionMeasure, x, eps: float) -> float:
    """L_q(B_eps(x)): sum over planes meeting the ball of the (d-1)-volume of the section."""
    x = np.asarray(x, dtype=float).reshape(-1)
    u = float(np.dot(pm.q, x))
    reach = eps * pm.norm
    rs = np.arange(math.floor(u - reach), math.ceil(u + reach) + 1)
    h = np.abs(u - rs) / pm.norm
    h = h[h < eps]
    return float(ball_volume(pm.d - 1) * np.sum((eps**2 - h**2) ** ((pm.d - 1) / 2)))


def points_on_planes(pm: PlaneUnionMeasure, count: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    x = rng.random((count, pm.d))
    j = pm.solved_axis
    rest = x @ np.asarray(pm.q, dtype=float) - pm.q[j] * x[:, j]
    r = rng.integers(0, abs(pm.q[j]), size=count)
    x[:, j] = np.mod((r - rest) / pm.q[j], 1.0)
    return x


def ad_constants(pm: PlaneUnionMeasure, eps_max: float, samples: int = 64, n_eps: int = 12,
                 seed: int = 0) -> tuple[float, float]:
    """Empirical (a, b) with a eps^{d-1} <= L_q(B_eps(x)) <= b eps^{d-1}.

    Sampled over points on the planes and a geometric grid of radii in
    ``(eps_max / 100, eps_max]``.
    """
    xs = points_on_planes(pm, samples, seed)
    eps_grid = eps_max * np.geomspace(0.01, 1.0, n_eps)
    ratios = [ball_mass(pm, x, e) / e ** (pm.d - 1) for x in xs for e in eps_grid]
    return float(min(ratios)), float(max(ratios))


# -- mollified plane densities -----------------------------------------------


def density_of_form(pm: PlaneUnionMeasure, profile: BumpProfile, u) -> np.ndarray:
    """(phi_w * L_q) as a function of u = q.x.

    Compact-support profiles: direct sum over the planes within reach of the
    bump, each contributing ``w^{d-1} Phi(distance / w)`` with ``Phi`` the
    hyperplane integral of phi.  Band-limited profiles have unbounded spatial
    support; the periodized plane sum is evaluated through its exact, finite
    Poisson dual ``w^d |q| sum_m phi_hat(w m q) exp(2 pi i m u)``.
    """
    if profile.dim != pm.d:
        raise DimensionMismatch("profile dimension does not match q")
    u = np.asarray(u, dtype=float)
    w = profile.width
    qn = pm.norm
    if profile.kind == "compact-support":
        reach = w * qn
        base = np.rint(u)
        span = int(math.ceil(reach)) + 1
        total = np.zeros(u.shape)
        for off in range(-span, span + 1):
            h = (u - (base + off)) / reach
            near = np.abs(h) < 1
            if np.any(near):
                total[near] += profile.projection(pm.q, h[near])
        return w ** (pm.d - 1) * total
    qinf = max(abs(v) for v in pm.q)
    mmax = int(math.ceil(profile.band / (w * qinf)))
    m = np.arange(1, mmax + 1)
    coef = profile.line_hat(pm.q, w * m)
    total = np.ones(u.shape)
    for mi, c in zip(m, coef):
        if c != 0.0:
            total = total + 2.0 * c * np.cos(TWO_PI * mi * u)
    return w**pm.d * qn * total


def mollified_plane_density(pm: PlaneUnionMeasure, profile: BumpProfile, x) -> np.ndarray:
    """(phi_{delta_*} * L_q)(x) for points ``x`` of shape (..., d)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != pm.d:
        raise DimensionMismatch("point dimension does not match q")
    return density_of_form(pm, profile, x @ np.asarray(pm.q, dtype=float))


def sandwich_constants(pm: PlaneUnionMeasure, profile: BumpProfile, a: float, b: float) -> tuple[float, float]:
    """(lower, upper) such that lower 1_L <= phi_w * L_q <= upper 1_L, per profile kind.

    The lower constant ``m(phi) a w^{d-1}`` needs ``m(phi) = min_{B_2} phi > 0``
    (band-limited profile); the upper constant ``|phi|_inf b (2w)^{d-1}`` needs
    phi supported in the unit ball (compact-support profile).  The constant that
    does not apply is returned as 0 (lower) or inf (upper).
    """
    w = profile.width
    d = pm.d
    lower = profile.min_on_ball(2.0) * a * w ** (d - 1)
    upper = profile.sup() * b * (2 * w) ** (d - 1) if profile.kind == "compact-support" else math.inf
    return lower, upper


def primitive_vectors(d: int, max_sup: int, min_sup: int = 1) -> list[tuple[int, ...]]:
    """Primitive integer vectors, one per line through 0, by increasing |q|_inf.

    The representative has its first nonzero coordinate positive; ties are in
    lexicographic order.
    """
    if max_sup < 1:
        return []
    axes = [np.arange(-max_sup, max_sup + 1)] * d
    v = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    sup = np.abs(v).max(axis=1)
    first = v[np.arange(v.shape[0]), np.argmax(v != 0, axis=1)]
    keep = (sup >= max(1, min_sup)) & (first > 0) & (np.gcd.reduce(np.abs(v), axis=1) == 1)
    v, sup = v[keep], sup[keep]
    order = np.lexsort(tuple(v.T[::-1]) + (sup,))
    return [tuple(int(c) for c in row) for row in v[order]]
