"""Reconstruction on the cylinder ``B^2 x [0, L]`` from slice sinograms.

Slices are taken at the Gauss-Chebyshev heights of
:func:`~oped.polycore.gauss_t_nodes`. The height dependence is expanded in
the polynomials ``p_l`` orthonormal for ``1 / (pi sqrt(z (L - z)))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .polycore import angle_grid, cheb_u_all, scaled_cheb_t_all
from .recon2d import ImageGrid

__all__ = ["CylinderImage", "phi_nu_3d", "reconstruct3d", "reconstruct3d_points"]


@dataclass(frozen=True, eq=False)
class CylinderImage:
    """Stack of slices; ``values[iz]`` is the image at height ``zs[iz]``."""

    grid: ImageGrid
    zs: np.ndarray
    values: np.ndarray


def phi_nu_3d(m, nu, w, t, p3, L):
    """Cylinder kernel.

    ``sum_k (k+1) U_k(t) U_k(c_nu(x, y)) sum_{l <= 2m-k} p_l(w) p_l(z)``
    for ``p3 = (x, y, z)``.
    """
    g = angle_grid(m)
    if not 0 <= nu <= 2 * m:
        raise InvalidParameterError(f"view index nu must lie in 0..{2 * m}, got {nu}")
    p3 = np.asarray(p3, dtype=np.float64)
    c = p3[..., 0] * np.cos(g.phi[nu]) + p3[..., 1] * np.sin(g.phi[nu])
    pw = scaled_cheb_t_all(2 * m, w, L)
    pz = scaled_cheb_t_all(2 * m, p3[..., 2], L)
    # partial[l] = sum_{l' <= l} p_l'(w) p_l'(z)
    partial = np.cumsum(pw * pz, axis=0)
    ut = cheb_u_all(2 * m, t)
    uc = cheb_u_all(2 * m, c)
    total = 0.0
    for k in range(2 * m + 1):
        total = total + (k + 1) * ut[k] * uc[k] * partial[2 * m - k]
    return total.item() if np.ndim(total) == 0 else total


def _coefficients(s3, zs):
    """``E[iz, nu, k]`` so that ``value(p, z) = sum_{nu,k} E U_k(c_nu(p))``."""
    m, n = s3.m, s3.n
    if s3.data.shape != (n, 2 * m + 1, 2 * m):
        raise InvalidParameterError("3D sinogram data does not match (n, m)")
    g = angle_grid(m)
    z_nodes = s3.z
    p_nodes = scaled_cheb_t_all(2 * m, z_nodes, s3.L)  # (l, i)
    # Gamma[l, nu, j] = (1/n) sum_i gamma[i, nu, j] p_l(z_i)
    gamma = np.einsum("li,ivj->lvj", p_nodes, s3.data) / n
    p_eval = scaled_cheb_t_all(2 * m, zs, s3.L)  # (l, iz)
    # D[k, iz, nu, j] = sum_{l <= 2m-k} Gamma[l, nu, j] p_l(z)
    terms = np.einsum("lvj,lz->lzvj", gamma, p_eval)
    partial = np.cumsum(terms, axis=0)
    k = np.arange(2 * m + 1)
    d = partial[2 * m - k]
    w = (k + 1)[:, None] * np.sin(np.outer(k + 1, g.psi)) / (2 * m + 1) ** 2
    return np.einsum("kzvj,kj->zvk", d, w)


def reconstruct3d_points(s3, points3):
    """Evaluate the cylinder reconstruction at points ``(x, y, z)``."""
    pts = np.asarray(points3, dtype=np.float64)
    flat = pts.reshape(-1, 3)
    g = angle_grid(s3.m)
    e = _coefficients(s3, flat[:, 2])  # (P, nu, k)
    c = flat[:, 0:1] * np.cos(g.phi) + flat[:, 1:2] * np.sin(g.phi)
    u = cheb_u_all(2 * s3.m, c)  # (k, P, nu)
    return np.einsum("kpv,pvk->p", u, e).reshape(pts.shape[:-1])


def reconstruct3d(s3, grid, zs=None, fill="zero"):
    """Reconstruct a stack of slices at heights ``zs``.

    ``zs`` defaults to ``max(n, 16)`` uniformly spaced heights covering
    ``[0, L]``.
    """
    if zs is None:
        zs = np.linspace(0.0, s3.L, max(s3.n, 16))
    zs = np.atleast_1d(np.asarray(zs, dtype=np.float64))
    g = angle_grid(s3.m)
    e = _coefficients(s3, zs)  # (Z, nu, k)
    pts = grid.masked_centers()
    c = pts[:, 0:1] * np.cos(g.phi) + pts[:, 1:2] * np.sin(g.phi)
    u = cheb_u_all(2 * s3.m, c)  # (k, P, nu)
    masked = np.einsum("kpv,zvk->zp", u, e)
    fv = np.nan if fill == "nan" else 0.0
    values = np.full((len(zs), grid.height, grid.width), fv)
    values[:, grid.mask] = masked
    return CylinderImage(grid=grid, zs=zs, values=values)
