"""Phantoms with analytic Radon projections and parallel-beam sinograms.

A line ``x cos(theta) + y sin(theta) = t`` is parametrized by arc length
``s`` as ``(t cos(theta) - s sin(theta), t sin(theta) + s cos(theta))`` for
``|s| <= sqrt(1 - t^2)``; the Radon projection is the integral of the density
along that chord of the unit disk.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DomainError, FormatError, InvalidParameterError
from .polycore import angle_grid, cheb_u, cheb_u_all, gauss_t_nodes, gauss_u_rule

__all__ = [
    "EllipseComponent",
    "GaussianBump",
    "Phantom",
    "RidgePolynomial",
    "Sinogram2D",
    "Sinogram3D",
    "load_phantom",
    "parse_phantom",
    "projections",
    "radon_ellipse",
    "radon_numeric",
    "radon_poly",
    "sinogram2d",
    "sinogram3d",
]


def _check_offsets(t):
    t = np.asarray(t, dtype=np.float64)
    if np.any(np.abs(t) > 1.0):
        raise DomainError("line offset t must satisfy |t| <= 1")
    return t


def _out(v):
    return v.item() if np.ndim(v) == 0 else v


@lru_cache(maxsize=32)
def _legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def radon_numeric(f, theta, t, order=64):
    """Radon projection of ``f`` by Gauss-Legendre quadrature along the chord.

    This is the brute-force reference for the analytic projections.

    Parameters
    ----------
    f : callable
        Density ``f(x, y)`` vectorized over numpy arrays.
    theta, t : float or array_like
        Direction and offset; broadcast against each other.
    order : int
        Number of Gauss-Legendre nodes on the chord.
    """
    if int(order) != order or order < 1:
        raise InvalidParameterError(f"quadrature order must be >= 1, got {order!r}")
    theta, t = np.broadcast_arrays(np.asarray(theta, dtype=np.float64), _check_offsets(t))
    x, w = _legendre(int(order))
    half = np.sqrt(np.maximum(1.0 - t * t, 0.0))[..., None]
    s = half * x
    c, sn = np.cos(theta)[..., None], np.sin(theta)[..., None]
    tt = t[..., None]
    vals = np.broadcast_to(f(tt * c - s * sn, tt * sn + s * c), s.shape)
    return _out(half[..., 0] * np.sum(w * vals, axis=-1))


@dataclass(frozen=True)
class EllipseComponent:
    """Constant-density ellipse; semi-axis ``a`` points along ``rotation``."""

    center: tuple = (0.0, 0.0)
    semi_axes: tuple = (1.0, 1.0)
    rotation: float = 0.0
    weight: float = 1.0

    def __post_init__(self):
        a, b = self.semi_axes
        if not (a > 0 and b > 0):
            raise InvalidParameterError("ellipse semi-axes must be positive")

    def __call__(self, x, y):
        cx, cy = self.center
        a, b = self.semi_axes
        dx, dy = np.asarray(x) - cx, np.asarray(y) - cy
        cr, sr = np.cos(self.rotation), np.sin(self.rotation)
        u = (dx * cr + dy * sr) / a
        v = (-dx * sr + dy * cr) / b
        return np.where(u * u + v * v <= 1.0, self.weight, 0.0)

    def radon(self, theta, t):
        return radon_ellipse(self, theta, t)


def radon_ellipse(e, theta, t):
    """Weight times the chord length of the line ``(theta, t)`` through ``e``."""
    theta, t = np.broadcast_arrays(np.asarray(theta, dtype=np.float64), _check_offsets(t))
    a, b = e.semi_axes
    beta = theta - e.rotation
    s2 = (a * np.cos(beta)) ** 2 + (b * np.sin(beta)) ** 2
    tp = t - (e.center[0] * np.cos(theta) + e.center[1] * np.sin(theta))
    inside = tp * tp < s2
    chord = np.where(inside, 2.0 * a * b * np.sqrt(np.where(inside, s2 - tp * tp, 0.0)) / s2, 0.0)
    return _out(e.weight * chord)


def _tri(k, j):
    return k * (k + 1) // 2 + j


class RidgePolynomial:
    """Polynomial on the disk in the orthonormal ridge basis.

    ``P = sum_{k <= degree} sum_{j <= k} c[k, j] U_k(theta_{j,k}; x, y)`` with
    basis directions ``theta_{j,k} = j pi / (k + 1)``. Coefficients are stored
    as a flat triangular array of ``(degree + 1)(degree + 2)/2`` entries,
    entry ``(k, j)`` at position ``k (k + 1)/2 + j``.
    """

    def __init__(self, degree, coeffs=None):
        if int(degree) != degree or degree < 0:
            raise InvalidParameterError(f"degree must be a nonnegative integer, got {degree!r}")
        self.degree = int(degree)
        size = (self.degree + 1) * (self.degree + 2) // 2
        if coeffs is None:
            coeffs = np.zeros(size)
        coeffs = np.array(coeffs, dtype=np.float64)
        if coeffs.shape != (size,):
            raise InvalidParameterError(
                f"degree {self.degree} needs {size} coefficients, got shape {coeffs.shape}"
            )
        self.coeffs = coeffs

    def __repr__(self):
        return f"RidgePolynomial(degree={self.degree}, coeffs={self.coeffs!r})"

    @classmethod
    def basis(cls, k, j, degree=None):
        """The single basis element ``U_k(theta_{j,k}; .)``."""
        if not 0 <= j <= k:
            raise InvalidParameterError(f"basis index needs 0 <= j <= k, got k={k}, j={j}")
        p = cls(k if degree is None else degree)
        p.coeffs[_tri(k, j)] = 1.0
        return p

    @classmethod
    def from_callable(cls, f, degree, order=None):
        """Project a density onto polynomials of the given degree.

        Coefficients are ``(1/pi) int_{B^2} f U_k(theta_{j,k}; .)`` computed
        as ``(1/pi) int R_theta(f; t) U_k(t) dt`` with a Gaussian rule for
        ``sqrt(1 - t^2)`` in ``t`` and Gauss-Legendre along each chord. The
        result is exact when ``f`` is a polynomial of degree ``<= degree``.
        """
        p = cls(degree)
        n = order or (degree + 2)
        rule = gauss_u_rule(n)
        t = rule.nodes
        scale = 0.5 * rule.weights / np.sqrt(1.0 - t * t)
        for k in range(p.degree + 1):
            uk = cheb_u(k, t)
            for j in range(k + 1):
                theta = j * np.pi / (k + 1)
                r = radon_numeric(f, theta, t, order=n + 1)
                p.coeffs[_tri(k, j)] = np.dot(scale * uk, r)
        return p

    def coeff(self, k, j):
        return self.coeffs[_tri(k, j)]

    def terms(self):
        """Yield ``(k, j, c)`` for the nonzero coefficients."""
        for k in range(self.degree + 1):
            for j in range(k + 1):
                c = self.coeffs[_tri(k, j)]
                if c != 0.0:
                    yield k, j, c

    def __call__(self, x, y):
        x = np.asarray(x, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        total = np.zeros(np.broadcast(x, y).shape)
        for k, j, c in self.terms():
            th = j * np.pi / (k + 1)
            total = total + c * cheb_u(k, x * np.cos(th) + y * np.sin(th))
        return _out(total)

    def radon(self, theta, t):
        return radon_poly(self, theta, t)

    def __add__(self, other):
        n = max(self.degree, other.degree)
        out = RidgePolynomial(n)
        out.coeffs[: self.coeffs.size] += self.coeffs
        out.coeffs[: other.coeffs.size] += other.coeffs
        return out

    def __mul__(self, s):
        return RidgePolynomial(self.degree, self.coeffs * float(s))

    __rmul__ = __mul__


def radon_poly(p, theta, t):
    """Exact Radon projection of a :class:`RidgePolynomial`.

    Each basis element projects to ``2/(k+1) sqrt(1 - t^2) U_k(t)`` times its
    value at the boundary point ``(cos(theta), sin(theta))``.
    """
    theta, t = np.broadcast_arrays(np.asarray(theta, dtype=np.float64), _check_offsets(t))
    root = np.sqrt(np.maximum(1.0 - t * t, 0.0))
    ut = cheb_u_all(p.degree, t)
    total = np.zeros(t.shape)
    for k, j, c in p.terms():
        th = j * np.pi / (k + 1)
        total = total + c * (2.0 / (k + 1)) * ut[k] * cheb_u(k, np.cos(theta - th))
    return _out(root * total)


@dataclass(frozen=True)
class GaussianBump:
    """``weight * exp(-alpha |p - center|^2)`` restricted to the disk.

    Its projections are computed with :func:`radon_numeric`.
    """

    center: tuple = (0.0, 0.0)
    alpha: float = 8.0
    weight: float = 1.0
    order: int = 64

    def __call__(self, x, y):
        cx, cy = self.center
        return self.weight * np.exp(-self.alpha * ((np.asarray(x) - cx) ** 2 + (np.asarray(y) - cy) ** 2))

    def radon(self, theta, t):
        return radon_numeric(self, theta, t, order=self.order)


@dataclass(frozen=True)
class Phantom:
    """Ground-truth density: ellipses plus an optional ridge polynomial part.

    ``bumps`` holds smooth components (e.g. :class:`GaussianBump`) whose
    projections are evaluated numerically.
    """

    ellipses: tuple = ()
    poly: RidgePolynomial | None = None
    bumps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ellipses", tuple(self.ellipses))
        object.__setattr__(self, "bumps", tuple(self.bumps))
        for e in self.ellipses:
            if np.hypot(*e.center) + max(e.semi_axes) > 1.0 + 1e-12:
                raise DomainError(f"ellipse {e} is not contained in the unit disk")

    @property
    def components(self):
        comps = list(self.ellipses)
        if self.poly is not None:
            comps.append(self.poly)
        comps.extend(self.bumps)
        return comps

    def __call__(self, x, y):
        shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
        total = np.zeros(shape)
        for c in self.components:
            total = total + c(x, y)
        return _out(total)

    def radon(self, theta, t):
        theta, t = np.broadcast_arrays(np.asarray(theta, dtype=np.float64), _check_offsets(t))
        total = np.zeros(t.shape)
        for c in self.components:
            total = total + c.radon(theta, t)
        return _out(total)


@dataclass(frozen=True, eq=False)
class Sinogram2D:
    """Radon data ``R_{phi_nu}(f; cos(psi_j))``, rows ``nu``, columns ``j``."""

    m: int
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        if data.shape != (2 * self.m + 1, 2 * self.m):
            raise InvalidParameterError(
                f"sinogram for m={self.m} needs shape {(2 * self.m + 1, 2 * self.m)}, got {data.shape}"
            )
        data.setflags(write=False)
        object.__setattr__(self, "data", data)


@dataclass(frozen=True, eq=False)
class Sinogram3D:
    """Slice sinograms ``gamma[i, nu, j]`` at the Gauss-Chebyshev heights ``z_i``."""

    m: int
    n: int
    L: float
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        shape = (self.n, 2 * self.m + 1, 2 * self.m)
        if data.shape != shape:
            raise InvalidParameterError(f"3D sinogram needs shape {shape}, got {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def z(self):
        return gauss_t_nodes(self.n, self.L)

    def slice(self, i):
        return Sinogram2D(self.m, self.data[i])


def projections(ph, m, t):
    """Projections on the ``2m + 1`` view angles at arbitrary offsets ``t``."""
    g = angle_grid(m)
    t = _check_offsets(np.atleast_1d(t))
    return np.asarray(ph.radon(g.phi[:, None], t[None, :]), dtype=np.float64).reshape(g.n_views, t.size)


def sinogram2d(ph, m):
    """Sample the parallel-beam geometry of resolution ``m``."""
    return Sinogram2D(m, projections(ph, m, angle_grid(m).t))


def sinogram3d(slice_phantom: Callable[[float], Phantom], m, n, L):
    """Slice sinograms at the heights ``gauss_t_nodes(n, L)``."""
    z = gauss_t_nodes(n, L)
    g = angle_grid(m)
    data = np.stack([projections(slice_phantom(float(zi)), m, g.t) for zi in z])
    return Sinogram3D(m=m, n=int(n), L=float(L), data=data)


def parse_phantom(text: str) -> Phantom:
    """Parse the line-oriented phantom description format.

    One component per line, ``#`` starts a comment::

        ellipse cx cy a b rot weight
        poly k j c
        gauss cx cy alpha weight

    ``poly`` lines accumulate into a single :class:`RidgePolynomial`.
    """
    ellipses, bumps, terms = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, *args = line.split()
        try:
            if kind == "ellipse":
                if len(args) != 6:
                    raise FormatError("ellipse needs 6 numbers: cx cy a b rot weight", lineno)
                cx, cy, a, b, rot, w = map(float, args)
                e = EllipseComponent((cx, cy), (a, b), rot, w)
                if np.hypot(cx, cy) + max(a, b) > 1.0 + 1e-12:
                    raise FormatError("ellipse is not contained in the unit disk", lineno)
                ellipses.append(e)
            elif kind == "poly":
                if len(args) != 3:
                    raise FormatError("poly needs: k j c", lineno)
                k, j, c = int(args[0]), int(args[1]), float(args[2])
                if not 0 <= j <= k:
                    raise FormatError(f"poly index needs 0 <= j <= k, got k={k}, j={j}", lineno)
                terms[(k, j)] = terms.get((k, j), 0.0) + c
            elif kind == "gauss":
                if len(args) != 4:
                    raise FormatError("gauss needs 4 numbers: cx cy alpha weight", lineno)
                cx, cy, alpha, w = map(float, args)
                bumps.append(GaussianBump((cx, cy), alpha, w))
            else:
                raise FormatError(f"unknown component {kind!r}", lineno)
        except (ValueError, InvalidParameterError) as exc:
            if isinstance(exc, FormatError):
                raise
            raise FormatError(str(exc), lineno) from None
    poly = None
    if terms:
        poly = RidgePolynomial(max(k for k, _ in terms))
        for (k, j), c in terms.items():
            poly.coeffs[_tri(k, j)] = c
    return Phantom(ellipses=ellipses, poly=poly, bumps=bumps)


def load_phantom(path) -> Phantom:
    """Read a phantom description file (UTF-8)."""
    return parse_phantom(Path(path).read_text(encoding="utf-8"))
