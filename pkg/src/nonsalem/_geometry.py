"""Small vectorised helpers shared by the measure and lattice modules."""

from __future__ import annotations

import numpy as np


def dist_to_int(u):
    """Distance from each real in ``u`` to the nearest integer."""
    u = np.asarray(u, dtype=float)
    return np.abs(u - np.rint(u))


def lattice_distance(x, axis: int = -1):
    """Euclidean distance from points ``x`` to the integer lattice along ``axis``."""
    return np.sqrt(np.sum(dist_to_int(x) ** 2, axis=axis))


def cell_centers(N: int) -> np.ndarray:
    return (np.arange(N, dtype=float) + 0.5) / N


def axis_view(values: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    """Reshape a 1-D array so it broadcasts along ``axis`` of an ``ndim`` array."""
    shape = [1] * ndim
    shape[axis] = values.shape[0]
    return values.reshape(shape)


def grid_linear_form(q, N: int, axes, ndim: int) -> np.ndarray:
    """``q . c`` evaluated at every cell center, for the coordinates listed in ``axes``.

    The result broadcasts against an ``(N,)*ndim`` grid.
    """
    c = cell_centers(N)
    total = np.zeros([1] * ndim)
    for qj, ax in zip(q, axes):
        if qj:
            total = total + axis_view(qj * c, ax, ndim)
    return total


def torus_distance_grid(center, N: int) -> np.ndarray:
    """Torus distance from every cell center of an ``N^d`` grid to ``center``."""
    d = len(center)
    sq = np.zeros([1] * d)
    c = cell_centers(N)
    for ax, x0 in enumerate(center):
        delta = dist_to_int(c - x0)
        sq = sq + axis_view(delta**2, ax, d)
    return np.sqrt(sq)


def torus_distance_points(points, center) -> np.ndarray:
    points = np.atleast_2d(points)
    return lattice_distance(points - np.asarray(center, dtype=float)[None, :], axis=1)
