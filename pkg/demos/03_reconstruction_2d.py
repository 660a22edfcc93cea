"""
Reconstruction on the disk
==========================

The reconstruction is a weighted sum of the sinogram samples with kernels
that depend only on m and the evaluation point, so they can be tabulated.
Polynomials of degree up to 2m - 1 come back exactly.
"""

# %%
import numpy as np

from oped import ImageGrid, Phantom, RidgePolynomial, build_table, reconstruct, sinogram2d
from oped.analysis import error_metrics

rng = np.random.default_rng(0)
m = 6
p = RidgePolynomial(2 * m - 1, rng.uniform(-1, 1, (2 * m) * (2 * m + 1) // 2))
ph = Phantom(poly=p)

# %%
grid = ImageGrid.square(96)
table = build_table(m, grid)
img = reconstruct(sinogram2d(ph, m), grid, table=table)
print("max error, degree 2m-1:", error_metrics(img, ph)[0])

# %%
# One degree higher and reproduction is lost.
q = RidgePolynomial.basis(2 * m, 3)
img = reconstruct(sinogram2d(Phantom(poly=q), m), grid, table=table)
print("max error, degree 2m:  ", error_metrics(img, Phantom(poly=q))[0])

# %%
# Save a raster for a look.
from oped.fileio import write_pgm

write_pgm(img.values, "reconstruction.pgm")
