"""
Radon projections of phantoms
=============================

Ellipses project to weighted chord lengths. Ridge polynomials project in
closed form, one Chebyshev factor per basis term.
"""

# %%
import numpy as np

from oped import EllipseComponent, Phantom, RidgePolynomial, radon_numeric, sinogram2d

ell = EllipseComponent(center=(0.2, -0.1), semi_axes=(0.5, 0.3), rotation=0.4, weight=1.0)
print(ell.radon(0.3, 0.1))

# %%
# A polynomial: 0.5 + U_2(theta_{1,2}; x, y). Compare the exact projection
# with Gauss-Legendre along the chord.
p = RidgePolynomial(2)
p.coeffs[0] = 0.5
p += RidgePolynomial.basis(2, 1)
theta, t = 1.1, -0.35
print(p.radon(theta, t), radon_numeric(p, theta, t, order=32))

# %%
# Projections are symmetric under (theta, t) -> (theta + pi, -t).
print(p.radon(theta + np.pi, -t) - p.radon(theta, t))

# %%
# A sinogram on the parallel geometry for m = 4: rows are views, columns offsets.
ph = Phantom(ellipses=[ell], poly=p)
s = sinogram2d(ph, 4)
print(s.data.shape)
print(np.round(s.data[:3], 4))
