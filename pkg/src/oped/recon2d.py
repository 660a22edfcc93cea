"""Reconstruction of densities on the unit disk from parallel-beam data."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidParameterError
from .kernel import eta_default, iter_kernel_chunks
from .polycore import QuadratureRule, angle_grid, cheb_u_all

__all__ = [
    "Image",
    "ImageGrid",
    "evaluate_points",
    "reconstruct",
    "reconstruct_eta",
    "reconstruct_general",
    "reconstruct_point",
]

_FILLS = {"zero": 0.0, "nan": np.nan}


@dataclass(frozen=True)
class ImageGrid:
    """Square raster over ``[-1, 1]^2``.

    Pixel ``(q, p)`` (row, column) has center
    ``(-1 + (2p + 1)/width, -1 + (2q + 1)/height)``; rows run upward in ``y``.
    """

    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise InvalidParameterError("grid dimensions must be positive")

    @classmethod
    def square(cls, n):
        return cls(n, n)

    @cached_property
    def xs(self):
        return -1.0 + (2.0 * np.arange(self.width) + 1.0) / self.width

    @cached_property
    def ys(self):
        return -1.0 + (2.0 * np.arange(self.height) + 1.0) / self.height

    @cached_property
    def mask(self):
        X, Y = np.meshgrid(self.xs, self.ys)
        m = X * X + Y * Y <= 1.0
        m.setflags(write=False)
        return m

    def centers(self):
        """All pixel centers, shape ``(height, width, 2)``."""
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.stack([X, Y], axis=-1)

    def masked_centers(self):
        """Centers inside the disk in row-major order, shape ``(npix, 2)``."""
        return self.centers()[self.mask]


@dataclass(frozen=True, eq=False)
class Image:
    grid: ImageGrid
    values: np.ndarray
    fill: float = 0.0

    def masked(self):
        return self.values[self.grid.mask]


def _fill_value(fill):
    if isinstance(fill, str):
        try:
            return _FILLS[fill]
        except KeyError:
            raise InvalidParameterError(f"fill must be 'zero' or 'nan', got {fill!r}") from None
    return float(fill)


def _accumulate(data, kern):
    """Neumaier-compensated ``sum_{nu,j} data[nu, j] kern[:, nu, j]``, nu outer."""
    s = np.zeros(kern.shape[0])
    comp = np.zeros_like(s)
    nv, nj = data.shape
    for nu in range(nv):
        for j in range(nj):
            term = data[nu, j] * kern[:, nu, j]
            t = s + term
            comp += np.where(np.abs(s) >= np.abs(term), (s - t) + term, (term - t) + s)
            s = t
    return s + comp


def _check_data(s):
    data = np.asarray(s.data, dtype=np.float64)
    if data.shape != (2 * s.m + 1, 2 * s.m):
        raise InvalidParameterError(f"sinogram shape {data.shape} does not match m={s.m}")
    return data


def evaluate_points(s, points, eta=None):
    """Evaluate the reconstruction at arbitrary points (no domain check).

    Parameters
    ----------
    s : Sinogram2D
    points : array_like
        Shape ``(..., 2)``.
    eta : Multiplier, optional
        Use the multiplier kernels instead of the plain ones.
    """
    data = _check_data(s)
    pts = np.asarray(points, dtype=np.float64)
    flat = pts.reshape(-1, 2)
    out = np.empty(len(flat))
    for sl, kern in iter_kernel_chunks(s.m, flat, eta=eta):
        out[sl] = _accumulate(data, kern)
    return out.reshape(pts.shape[:-1])


def _to_image(grid, masked_values, fill):
    vals = np.full((grid.height, grid.width), _fill_value(fill))
    vals[grid.mask] = masked_values
    return Image(grid=grid, values=vals, fill=_fill_value(fill))


def reconstruct(s, grid, table=None, fill="zero"):
    """Reconstruct the image of a :class:`~oped.radon.Sinogram2D` on ``grid``.

    With ``table`` the kernels are read from a :class:`KernelTable` built for
    the same ``m`` and grid; otherwise they are computed on the fly.
    """
    if table is None:
        vals = evaluate_points(s, grid.masked_centers())
        return _to_image(grid, vals, fill)
    if table.m != s.m:
        raise InvalidParameterError(f"kernel table is for m={table.m}, sinogram has m={s.m}")
    if table.grid != grid:
        raise InvalidParameterError("kernel table was built for a different grid")
    data = _check_data(s)
    return _to_image(grid, _accumulate(data, table.values), fill)


def reconstruct_point(s, p):
    """Reconstruction at a single point of the closed disk."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (2,):
        raise InvalidParameterError("point must have two coordinates")
    if p @ p > 1.0 + 1e-12:
        raise DomainError(f"point {tuple(p)} lies outside the unit disk")
    return float(evaluate_points(s, p[None, :])[0])


def reconstruct_eta(s, grid, eta=None, fill="zero"):
    """Reconstruction with multiplier-damped kernels (default: C^3 cutoff)."""
    eta = eta_default() if eta is None else eta
    vals = evaluate_points(s, grid.masked_centers(), eta=eta)
    return _to_image(grid, vals, fill)


def general_kernels(rule: QuadratureRule, m, points):
    """Kernels ``lambda_j Phi_nu(t_j; p) / (2 sqrt(1 - t_j^2))`` for an arbitrary rule."""
    t = rule.nodes
    if np.any(np.abs(t) >= 1.0):
        raise InvalidParameterError("quadrature nodes must lie strictly inside (-1, 1)")
    g = angle_grid(m)
    n = 2 * m + 1
    k = np.arange(n)
    w = (k + 1)[:, None] * cheb_u_all(2 * m, t) * (rule.weights / (2.0 * n * np.sqrt(1.0 - t * t)))
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    c = pts[:, 0:1] * np.cos(g.phi) + pts[:, 1:2] * np.sin(g.phi)
    return np.einsum("kpv,kj->pvj", cheb_u_all(2 * m, c), w)


def reconstruct_general(raw, rule, m, grid=None, points=None, fill="zero"):
    """Reconstruction from projections at the nodes of an arbitrary rule.

    Parameters
    ----------
    raw : array_like
        ``raw[nu, j] = R_{phi_nu}(f; rule.nodes[j])``, shape ``(2m+1, len(rule))``.
    rule : QuadratureRule
    m : int
    grid : ImageGrid, optional
        Return an :class:`Image` on this grid.
    points : array_like, optional
        Alternatively, evaluate at these points and return an array.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.shape != (2 * m + 1, len(rule)):
        raise InvalidParameterError(f"projection array needs shape {(2 * m + 1, len(rule))}, got {raw.shape}")
    if (grid is None) == (points is None):
        raise InvalidParameterError("give exactly one of grid or points")
    pts = grid.masked_centers() if grid is not None else np.asarray(points, dtype=np.float64)
    flat = pts.reshape(-1, 2)
    out = np.empty(len(flat))
    for start in range(0, len(flat), 1024):
        sl = slice(start, start + 1024)
        out[sl] = _accumulate(raw, general_kernels(rule, m, flat[sl]))
    if grid is not None:
        return _to_image(grid, out, fill)
    return out.reshape(pts.shape[:-1])
