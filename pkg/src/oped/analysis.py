"""Lebesgue function, operator-norm scans, an expansion oracle and error studies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError
from .kernel import eta_default, iter_kernel_chunks
from .polycore import angle_grid, cheb_u_all, gauss_u_rule
from .radon import sinogram2d
from .recon2d import Image, ImageGrid, reconstruct, reconstruct_eta

__all__ = [
    "NormScan",
    "convergence_study",
    "error_metrics",
    "lebesgue",
    "lebesgue_points",
    "norm_scan",
    "s2m_oracle",
    "witness_point",
]


def _check_disk(pts):
    r2 = np.sum(np.asarray(pts, dtype=np.float64) ** 2, axis=-1)
    if np.any(r2 > 1.0 + 1e-12):
        raise DomainError("point lies outside the unit disk")


def lebesgue_points(m, points):
    """``Lambda_m`` at many points, shape ``points.shape[:-1]``."""
    pts = np.asarray(points, dtype=np.float64)
    flat = pts.reshape(-1, 2)
    sin_psi = np.sin(angle_grid(m).psi)
    out = np.empty(len(flat))
    for sl, kern in iter_kernel_chunks(m, flat):
        out[sl] = np.einsum("pvj,j->p", np.abs(kern), sin_psi)
    return out.reshape(pts.shape[:-1])


def lebesgue(m, p):
    """``Lambda_m(p) = sum_{nu,j} sin(psi_j) |T_{j,nu}(p)|``.

    Its maximum over the disk is the uniform operator norm of the
    reconstruction.
    """
    _check_disk(p)
    v = lebesgue_points(m, p)
    return v.item() if np.ndim(v) == 0 else v


def witness_point(m):
    """Point ``(cos(pi/(4m+2)), sin(pi/(4m+2)))`` where the norm grows like m log m."""
    a = np.pi / (4 * m + 2)
    return np.array([np.cos(a), np.sin(a)])


@dataclass(frozen=True)
class NormScan:
    ms: tuple
    maxima: tuple
    ratios: tuple
    witness: tuple


def norm_scan(ms, grid_res=128):
    """Maximum of ``Lambda_m`` over the masked pixels of a ``grid_res`` raster.

    The witness point is added to the candidate set. ``ratios`` divide each
    maximum by ``m log(m + 1)``.
    """
    if grid_res < 64:
        raise InvalidParameterError("grid_res must be at least 64")
    pts = ImageGrid.square(grid_res).masked_centers()
    maxima, ratios, witness = [], [], []
    for m in ms:
        w = float(lebesgue_points(m, witness_point(m)[None, :])[0])
        mx = max(float(lebesgue_points(m, pts).max()), w)
        maxima.append(mx)
        ratios.append(mx / (m * np.log(m + 1)))
        witness.append(w)
    return NormScan(tuple(ms), tuple(maxima), tuple(ratios), tuple(witness))


def s2m_oracle(ph, m, p, dense_order=None):
    """Truncated orthogonal expansion ``S_2m f`` at ``p`` from continuous projections.

    The ``t`` integrals ``(1/pi) int R(t) Phi_nu(t; p) dt`` are evaluated with
    the Gaussian rule for ``sqrt(1 - t^2)`` applied to ``R / sqrt(1 - t^2)``,
    using ``dense_order`` nodes (default ``8m``).
    """
    dense_order = 8 * m if dense_order is None else dense_order
    if dense_order < 4 * m:
        raise InvalidParameterError("dense_order must be at least 4m")
    _check_disk(p)
    g = angle_grid(m)
    rule = gauss_u_rule(dense_order)
    t = rule.nodes
    n = 2 * m + 1
    pts = np.asarray(p, dtype=np.float64).reshape(-1, 2)
    r = np.asarray(ph.radon(g.phi[:, None], t[None, :]), dtype=np.float64)  # (nu, i)
    # (1/pi) int R Phi dt = (1/2) sum_i lambda_i R(t_i) Phi(t_i) / sqrt(1 - t_i^2)
    q = 0.5 * r * rule.weights / np.sqrt(1.0 - t * t)
    k = np.arange(n)
    moments = np.einsum("vi,ki->vk", q, cheb_u_all(2 * m, t)) * (k + 1) / n  # (nu, k)
    c = pts[:, 0:1] * np.cos(g.phi) + pts[:, 1:2] * np.sin(g.phi)
    out = np.einsum("kpv,vk->p", cheb_u_all(2 * m, c), moments)
    out = out.reshape(np.shape(p)[:-1])
    return out.item() if out.ndim == 0 else out


def error_metrics(img: Image, ref):
    """Max and root-mean-square error over the disk mask.

    ``ref`` is either a pointwise callable ``ref(x, y)`` or an :class:`Image`
    on the same grid.
    """
    mask = img.grid.mask
    if isinstance(ref, Image):
        if ref.grid != img.grid:
            raise InvalidParameterError("images are on different grids")
        r = ref.values[mask]
    else:
        pts = img.grid.masked_centers()
        r = np.asarray(ref(pts[:, 0], pts[:, 1]), dtype=np.float64)
    diff = img.values[mask] - r
    return float(np.max(np.abs(diff))), float(np.sqrt(np.mean(diff * diff)))


def convergence_study(ph, ms, grid_res=64, variant="plain"):
    """Reconstruction error against the phantom for each ``m``.

    Returns a list of ``(m, linf, l2)`` rows.
    """
    grid = ImageGrid.square(grid_res)
    rows = []
    for m in ms:
        s = sinogram2d(ph, m)
        if variant == "plain":
            img = reconstruct(s, grid)
        elif variant == "eta":
            img = reconstruct_eta(s, grid, eta_default())
        else:
            raise InvalidParameterError(f"unknown variant {variant!r}")
        linf, l2 = error_metrics(img, ph)
        rows.append((int(m), linf, l2))
    return rows
