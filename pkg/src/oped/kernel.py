"""Reconstruction kernels and precomputed kernel tables.

For resolution ``m`` the reconstruction weights the sample taken at view
angle ``phi_nu`` and offset ``cos(psi_j)`` by the polynomial

    T_{j,nu}(p) = (2m+1)^-2 sum_{k=0}^{2m} (k+1) sin((k+1) psi_j) U_k(c_nu(p))

with ``c_nu(p) = x cos(phi_nu) + y sin(phi_nu)``. It can be summed directly
(:func:`kernel_sum`) or evaluated from a closed form in ``T_{2m+1}(c)`` and
``U_{2m}(c)`` (:func:`kernel_closed`).
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import FormatError, InvalidParameterError
from .polycore import angle_grid, cheb_u_all

__all__ = [
    "SINGULAR_DELTA",
    "KernelTable",
    "Multiplier",
    "build_table",
    "eta_default",
    "kernel_closed",
    "kernel_eta",
    "kernel_sum",
    "kernel_values",
    "load_table",
    "phi_nu",
    "save_table",
]

# |c - cos(psi_j)| below which the closed form hands over to the direct sum.
# The closed form loses about 1e-18 / d^2 in relative accuracy at distance d.
SINGULAR_DELTA = 1e-2

_CHUNK = 1024


@dataclass(frozen=True)
class Multiplier:
    """Cutoff ``eta`` with ``eta = 1`` on ``[0, 1]`` and support in ``[0, 2]``."""

    evaluator: Callable
    smoothness: int = 0
    name: str = "custom"

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=np.float64))

    def validate(self, step=1e-3, atol=0.0):
        """Check the plateau and support conditions on a grid of spacing ``step``."""
        plateau = np.arange(0.0, 1.0 + step / 2, step)
        tail = np.arange(2.0, 4.0 + step / 2, step)
        return bool(
            np.all(np.abs(self(plateau) - 1.0) <= atol) and np.all(np.abs(self(tail)) <= atol)
        )


def _smoothstep7(u):
    return u**4 * (35.0 - 84.0 * u + 70.0 * u**2 - 20.0 * u**3)


def _eta_c3(t):
    t = np.asarray(t, dtype=np.float64)
    u = np.clip(t - 1.0, 0.0, 1.0)
    return np.where(t <= 1.0, 1.0, np.where(t >= 2.0, 0.0, 1.0 - _smoothstep7(u)))


def eta_default():
    """C^3 multiplier: 1 on [0, 1], a degree-7 blend down to 0 on [1, 2]."""
    return Multiplier(_eta_c3, smoothness=3, name="default")


def _check_indices(m, j=None, nu=None):
    if int(m) != m or m < 1:
        raise InvalidParameterError(f"m must be a positive integer, got {m!r}")
    if nu is not None and not 0 <= nu <= 2 * m:
        raise InvalidParameterError(f"view index nu must lie in 0..{2 * m}, got {nu}")
    if j is not None and not 1 <= j <= 2 * m:
        raise InvalidParameterError(f"offset index j must lie in 1..{2 * m}, got {j}")
    return angle_grid(int(m))


def _direction(g, nu, p):
    p = np.asarray(p, dtype=np.float64)
    return p[..., 0] * np.cos(g.phi[nu]) + p[..., 1] * np.sin(g.phi[nu])


def _out(v):
    return v.item() if np.ndim(v) == 0 else v


def _sum_coefficients(m, eta=None):
    """Matrix ``W[k, j-1] = (k+1) sin((k+1) psi_j) eta(k/m) / (2m+1)^2``."""
    g = angle_grid(m)
    k = np.arange(2 * m + 1)
    w = (k + 1)[:, None] * np.sin(np.outer(k + 1, g.psi))
    if eta is not None:
        w = w * eta(k / m)[:, None]
    return w / (2 * m + 1) ** 2


def phi_nu(m, nu, t, p):
    """Degree-2m kernel ``(2m+1)^-1 sum_k (k+1) U_k(t) U_k(c_nu(p))``."""
    g = _check_indices(m, nu=nu)
    c = _direction(g, nu, p)
    t, c = np.broadcast_arrays(np.asarray(t, dtype=np.float64), c)
    ut = cheb_u_all(2 * m, t)
    uc = cheb_u_all(2 * m, c)
    k = np.arange(2 * m + 1).reshape((-1,) + (1,) * c.ndim)
    return _out(np.sum((k + 1) * ut * uc, axis=0) / (2 * m + 1))


def kernel_sum(m, j, nu, p):
    """``T_{j,nu}(p)`` by the explicit sum over ``k``."""
    g = _check_indices(m, j=j, nu=nu)
    c = _direction(g, nu, p)
    w = _sum_coefficients(g.m)[:, j - 1]
    uc = cheb_u_all(2 * g.m, c)
    return _out(np.tensordot(w, uc, axes=1))


def kernel_eta(m, j, nu, p, eta=None):
    """``T^eta_{j,nu}(p)``: the direct sum with term ``k`` damped by ``eta(k/m)``."""
    g = _check_indices(m, j=j, nu=nu)
    eta = eta_default() if eta is None else eta
    c = _direction(g, nu, p)
    w = _sum_coefficients(g.m, eta)[:, j - 1]
    return _out(np.tensordot(w, cheb_u_all(2 * g.m, c), axes=1))


def _closed_form(m, c, delta):
    """Kernel values ``T[..., j-1]`` for directional coordinates ``c``.

    ``c`` has arbitrary shape; output has one extra trailing axis of length 2m.
    Entries within ``delta`` of a node ``cos(psi_j)`` are recomputed by the sum.
    """
    g = angle_grid(m)
    n = 2 * m + 1
    c0 = np.asarray(c, dtype=np.float64)
    c = c0.reshape(-1)
    # T_{2m+1}(c) and U_{2m}(c) from one pass of each recurrence
    two_c = 2.0 * c
    t_prev, t_cur = np.ones_like(c), c.copy()
    u_prev, u_cur = np.ones_like(c), two_c.copy()
    for _ in range(2 * m - 1):
        t_prev, t_cur = t_cur, two_c * t_cur - t_prev
        u_prev, u_cur = u_cur, two_c * u_cur - u_prev
    t_top = two_c * t_cur - t_prev  # T_{2m+1}
    u_top = u_cur  # U_{2m}
    sign = np.where(np.arange(1, 2 * m + 1) % 2 == 0, 1.0, -1.0)
    sin_psi = np.sin(g.psi)
    d = c[..., None] - g.t
    near = np.abs(d) < delta
    d = np.where(near, 1.0, d)
    first = -sin_psi * (1.0 - sign * t_top[..., None]) / (2.0 * d * d)
    second = sign * sin_psi * n * u_top[..., None] / (2.0 * d)
    out = (first - second) / n**2
    if np.any(near):
        idx = np.nonzero(near)
        cs = c[idx[:-1]]
        w = _sum_coefficients(m)
        out[idx] = np.einsum("kq,kq->q", w[:, idx[-1]], cheb_u_all(2 * m, cs))
    return out.reshape(c0.shape + (2 * m,))


def kernel_closed(m, j, nu, p, delta=SINGULAR_DELTA):
    """``T_{j,nu}(p)`` from the closed form in ``T_{2m+1}`` and ``U_{2m}``.

    Where ``|c_nu(p) - cos(psi_j)| < delta`` both denominators vanish and the
    value is taken from :func:`kernel_sum` instead.
    """
    g = _check_indices(m, j=j, nu=nu)
    c = _direction(g, nu, p)
    return _out(_closed_form(g.m, c, delta)[..., j - 1])


def kernel_values(m, points, eta=None, delta=SINGULAR_DELTA):
    """All kernels at once: array of shape ``(npoints, 2m+1, 2m)``.

    The plain kernel uses the closed form; a multiplier ``eta`` switches to
    the damped direct sum.
    """
    g = _check_indices(m)
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    c = pts[:, 0:1] * np.cos(g.phi) + pts[:, 1:2] * np.sin(g.phi)
    if eta is None:
        return _closed_form(g.m, c, delta)
    w = _sum_coefficients(g.m, eta)
    return np.einsum("kpv,kj->pvj", cheb_u_all(2 * g.m, c), w)


def iter_kernel_chunks(m, points, eta=None, chunk=_CHUNK):
    """Yield ``(slice, kernels)`` over blocks of ``points`` to bound memory."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    for start in range(0, len(pts), chunk):
        sl = slice(start, min(start + chunk, len(pts)))
        yield sl, kernel_values(m, pts[sl], eta=eta)


@dataclass(frozen=True, eq=False)
class KernelTable:
    """Kernel values at the masked pixel centers of a grid.

    ``values[q, nu, j-1]`` is ``T_{j,nu}`` at the ``q``-th masked pixel in
    row-major order (see ``ImageGrid.masked_centers``).
    """

    m: int
    grid: object
    variant: str
    values: np.ndarray

    def lookup(self, pixel, nu, j):
        return self.values[pixel, nu, j - 1]


def _variant_name(variant):
    if variant is None or variant == "plain":
        return "plain", None
    if variant == "eta":
        return "eta", eta_default()
    if isinstance(variant, Multiplier):
        return ("eta" if variant.name == "default" else f"eta:{variant.name}"), variant
    raise InvalidParameterError(f"unknown kernel variant {variant!r}")


def build_table(m, grid, variant="plain"):
    """Precompute the kernels at every masked pixel center of ``grid``.

    ``variant`` is ``"plain"``, ``"eta"`` (default multiplier) or a
    :class:`Multiplier`. Builds are deterministic.
    """
    name, eta = _variant_name(variant)
    pts = grid.masked_centers()
    if len(pts) == 0:
        raise InvalidParameterError("grid has no pixels inside the disk")
    values = np.empty((len(pts), 2 * m + 1, 2 * m))
    for sl, block in iter_kernel_chunks(m, pts, eta=eta):
        values[sl] = block
    values.setflags(write=False)
    return KernelTable(m=int(m), grid=grid, variant=name, values=values)


_MAGIC = b"OPEDTBL1"
_HEADER = struct.Struct("<IIII")  # m, variant tag, width, height
_VARIANT_TAGS = {"plain": 0, "eta": 1}


def save_table(table, path):
    """Write a table cache file.

    Layout: magic ``OPEDTBL1``; little-endian uint32 ``m``, variant tag
    (0 plain, 1 default eta), grid width, grid height; uint64 value count;
    the values as float64 little-endian; a 32-byte SHA-256 of everything
    before it.
    """
    if table.variant not in _VARIANT_TAGS:
        raise InvalidParameterError("only plain and default-eta tables can be cached")
    body = (
        _MAGIC
        + _HEADER.pack(table.m, _VARIANT_TAGS[table.variant], table.grid.width, table.grid.height)
        + struct.pack("<Q", table.values.size)
        + np.ascontiguousarray(table.values, dtype="<f8").tobytes()
    )
    Path(path).write_bytes(body + hashlib.sha256(body).digest())


def load_table(path):
    """Read and verify a file written by :func:`save_table`."""
    from .recon2d import ImageGrid

    raw = Path(path).read_bytes()
    if len(raw) < len(_MAGIC) + _HEADER.size + 8 + 32 or raw[: len(_MAGIC)] != _MAGIC:
        raise FormatError(f"{path}: not a kernel table file")
    body, digest = raw[:-32], raw[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise FormatError(f"{path}: checksum mismatch")
    off = len(_MAGIC)
    m, tag, width, height = _HEADER.unpack_from(body, off)
    off += _HEADER.size
    (count,) = struct.unpack_from("<Q", body, off)
    off += 8
    grid = ImageGrid(width, height)
    shape = (int(grid.mask.sum()), 2 * m + 1, 2 * m)
    if count != np.prod(shape) or len(body) - off != 8 * count:
        raise FormatError(f"{path}: value count does not match header")
    values = np.frombuffer(body, dtype="<f8", count=count, offset=off).astype(np.float64).reshape(shape)
    values.setflags(write=False)
    variant = {v: k for k, v in _VARIANT_TAGS.items()}.get(tag)
    if variant is None:
        raise FormatError(f"{path}: unknown variant tag {tag}")
    return KernelTable(m=m, grid=grid, variant=variant, values=values)
