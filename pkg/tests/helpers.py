"""Independent oracles and sampling utilities shared by the tests."""

import math
from fractions import Fraction

import mpmath
import numpy as np

from oped import RidgePolynomial


def disk_points(rng, n, radius=1.0):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    a = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.column_stack([r * np.cos(a), r * np.sin(a)])


def u_trig(k, x):
    """U_k by the sine quotient (interior points only)."""
    th = np.arccos(x)
    return np.sin((k + 1) * th) / np.sin(th)


def u_moment(d):
    """(2/pi) int_{-1}^{1} t^d sqrt(1 - t^2) dt, exactly: Catalan(d/2) / 4^(d/2)."""
    if d % 2:
        return Fraction(0)
    h = d // 2
    return Fraction(math.comb(2 * h, h), (h + 1) * 4**h)


def t_moment(d, L):
    """(1/pi) int_0^L z^d dz / sqrt(z (L - z)) = L^d binom(2d, d) / 4^d."""
    return Fraction(L) ** d * Fraction(math.comb(2 * d, d), 4**d)


def kernel_mp(m, j, nu, p, dps=40):
    """T_{j,nu}(p) summed in extended precision."""
    with mpmath.workdps(dps):
        n = 2 * m + 1
        phi = 2 * mpmath.pi * nu / n
        psi = mpmath.pi * j / n
        c = mpmath.mpf(p[0]) * mpmath.cos(phi) + mpmath.mpf(p[1]) * mpmath.sin(phi)
        total = mpmath.mpf(0)
        for k in range(n):
            total += (k + 1) * mpmath.sin((k + 1) * psi) * mpmath.chebyu(k, c)
        return float(total / n**2)


def random_ridge_poly(rng, degree):
    size = (degree + 1) * (degree + 2) // 2
    return RidgePolynomial(degree, rng.uniform(-1.0, 1.0, size))


def ridge_poly_eval_mp(p, x, y):
    """Evaluate a RidgePolynomial with mpmath Chebyshev polynomials."""
    total = mpmath.mpf(0)
    for k, j, c in p.terms():
        th = mpmath.pi * j / (k + 1)
        total += c * mpmath.chebyu(k, x * mpmath.cos(th) + y * mpmath.sin(th))
    return float(total)
