"""Chebyshev polynomials, ridge polynomials, angle grids and quadrature rules.

Everything here is evaluated by three-term recurrence in ``x`` so that the
endpoints ``x = +-1`` are regular. Functions accept scalars or arrays and
broadcast like numpy ufuncs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, InvalidParameterError

__all__ = [
    "AngleGrid",
    "QuadratureRule",
    "angle_grid",
    "cheb_t",
    "cheb_t_all",
    "cheb_u",
    "cheb_u_all",
    "gauss_t_nodes",
    "gauss_u_rule",
    "ridge_u",
    "scaled_cheb_t",
    "scaled_cheb_t_all",
]


def _frozen(a):
    a = np.asarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def _check_degree(k):
    if int(k) != k or k < 0:
        raise InvalidParameterError(f"degree must be a nonnegative integer, got {k!r}")
    return int(k)


def _scalar_or_array(v):
    return v.item() if np.ndim(v) == 0 else v


def cheb_u_all(kmax, x):
    """Values ``U_0(x), ..., U_kmax(x)`` stacked along a new leading axis.

    Parameters
    ----------
    kmax : int
        Highest degree.
    x : array_like
        Evaluation points.

    Returns
    -------
    ndarray
        Array of shape ``(kmax + 1,) + np.shape(x)``.
    """
    kmax = _check_degree(kmax)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * x
    two_x = 2.0 * x
    for k in range(1, kmax):
        out[k + 1] = two_x * out[k] - out[k - 1]
    return out


def cheb_t_all(kmax, x):
    """Values ``T_0(x), ..., T_kmax(x)`` stacked along a new leading axis."""
    kmax = _check_degree(kmax)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = x
    two_x = 2.0 * x
    for k in range(1, kmax):
        out[k + 1] = two_x * out[k] - out[k - 1]
    return out


def _last_by_recurrence(k, x, first):
    # first = 2 for U_1 = 2x, 1 for T_1 = x
    x = np.asarray(x, dtype=np.float64)
    if k == 0:
        return np.ones_like(x)
    prev, cur = np.ones_like(x), first * x
    two_x = 2.0 * x
    for _ in range(k - 1):
        prev, cur = cur, two_x * cur - prev
    return cur


def cheb_u(k, x):
    """Chebyshev polynomial of the second kind ``U_k(x)``.

    ``|U_k(x)| <= k + 1`` on ``[-1, 1]`` with equality at the endpoints.
    """
    k = _check_degree(k)
    return _scalar_or_array(_last_by_recurrence(k, x, 2.0))


def cheb_t(k, x):
    """Chebyshev polynomial of the first kind ``T_k(x)``."""
    k = _check_degree(k)
    return _scalar_or_array(_last_by_recurrence(k, x, 1.0))


def ridge_u(k, theta, p):
    """Ridge polynomial ``U_k(x cos(theta) + y sin(theta))``.

    Parameters
    ----------
    k : int
        Degree.
    theta : float or array_like
        Direction angle in radians.
    p : array_like
        Point(s) with ``(x, y)`` on the last axis.
    """
    p = np.asarray(p, dtype=np.float64)
    s = p[..., 0] * np.cos(theta) + p[..., 1] * np.sin(theta)
    return cheb_u(k, s)


@dataclass(frozen=True, eq=False)
class AngleGrid:
    """Parallel-beam sampling grid for resolution ``m``.

    ``phi`` holds the ``2m + 1`` view angles ``2 pi nu / (2m + 1)``, ``psi``
    the ``2m`` offset angles ``j pi / (2m + 1)`` for ``j = 1..2m`` and
    ``t = cos(psi)`` the detector offsets, which are the zeros of ``U_2m``.
    """

    m: int
    phi: np.ndarray
    psi: np.ndarray
    t: np.ndarray

    @property
    def n_views(self):
        return 2 * self.m + 1

    @property
    def n_offsets(self):
        return 2 * self.m


@lru_cache(maxsize=64)
def angle_grid(m):
    """Return the (cached, immutable) :class:`AngleGrid` for ``m >= 1``."""
    if int(m) != m or m < 1:
        raise InvalidParameterError(f"m must be a positive integer, got {m!r}")
    m = int(m)
    n = 2 * m + 1
    phi = 2.0 * np.pi * np.arange(n) / n
    psi = np.pi * np.arange(1, 2 * m + 1) / n
    return AngleGrid(m=m, phi=_frozen(phi), psi=_frozen(psi), t=_frozen(np.cos(psi)))


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Rule ``(2/pi) int g(t) sqrt(1 - t^2) dt ~ sum_j weights[j] g(nodes[j])``."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise InvalidParameterError("nodes and weights must be 1-D arrays of equal length")

    def __len__(self):
        return len(self.nodes)

    def apply(self, g):
        """Apply the rule to a callable ``g`` vectorized over its argument."""
        return float(np.dot(self.weights, g(self.nodes)))


@lru_cache(maxsize=64)
def gauss_u_rule(n):
    """Gaussian rule for the weight ``sqrt(1 - t^2)`` with ``n`` nodes.

    Nodes are ``cos(j pi / (n + 1))``, ``j = 1..n``, and the weights
    ``2 sin^2(j pi / (n + 1)) / (n + 1)`` sum to one. The rule is exact for
    polynomials of degree ``2n - 1``.
    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"number of nodes must be >= 1, got {n!r}")
    n = int(n)
    ang = np.pi * np.arange(1, n + 1) / (n + 1)
    return QuadratureRule(
        nodes=np.cos(ang), weights=2.0 * np.sin(ang) ** 2 / (n + 1), exactness=2 * n - 1
    )


def gauss_t_nodes(n, L):
    """Nodes of the ``n``-point Gauss-Chebyshev rule on ``[0, L]``.

    The rule ``(1/pi) int_0^L g(z) dz / sqrt(z (L - z)) ~ (1/n) sum g(z_i)``
    is exact for degree ``2n - 1``. Nodes are ``L (1 + cos((2i+1) pi / 2n)) / 2``
    in decreasing order.
    """
    if int(n) != n or n < 1:
        raise InvalidParameterError(f"number of nodes must be >= 1, got {n!r}")
    if not L > 0:
        raise InvalidParameterError(f"cylinder height must be positive, got {L!r}")
    xi = (2 * np.arange(int(n)) + 1) * np.pi / (2 * int(n))
    return L * (1.0 + np.cos(xi)) / 2.0


def _check_height(z, L):
    z = np.asarray(z, dtype=np.float64)
    if not L > 0:
        raise InvalidParameterError(f"cylinder height must be positive, got {L!r}")
    tol = 1e-12 * L
    if np.any(z < -tol) or np.any(z > L + tol):
        raise DomainError(f"height outside [0, {L}]")
    return z


def scaled_cheb_t_all(lmax, z, L):
    """Orthonormal polynomials ``p_0, ..., p_lmax`` for the Chebyshev weight on ``[0, L]``."""
    z = _check_height(z, L)
    out = cheb_t_all(lmax, 2.0 * z / L - 1.0)
    out[1:] *= np.sqrt(2.0)
    return out


def scaled_cheb_t(l, z, L):
    """Orthonormal ``p_l(z)``: ``1`` for ``l = 0``, else ``sqrt(2) T_l(2z/L - 1)``."""
    l = _check_degree(l)
    z = _check_height(z, L)
    v = np.asarray(_last_by_recurrence(l, 2.0 * z / L - 1.0, 1.0))
    if l > 0:
        v = np.sqrt(2.0) * v
    return _scalar_or_array(v)
