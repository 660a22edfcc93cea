"""
Slices stacked into a cylinder
==============================

Slice sinograms at the Gauss-Chebyshev heights combine into a
reconstruction at any height z in [0, L].
"""

# %%
import numpy as np

from oped import ImageGrid, Phantom, RidgePolynomial, reconstruct3d, scaled_cheb_t, sinogram3d

L = 2.0
base = RidgePolynomial.basis(2, 1)


def slice_at(z):
    return Phantom(poly=base * float(1.0 + 0.5 * scaled_cheb_t(1, z, L)))


m = 3
s3 = sinogram3d(slice_at, m, 2 * m, L)
print(s3.data.shape, np.round(s3.z, 4))

# %%
grid = ImageGrid.square(48)
zs = np.linspace(0, L, 5)
cyl = reconstruct3d(s3, grid, zs)
pts = grid.masked_centers()
for iz, z in enumerate(zs):
    ref = base(pts[:, 0], pts[:, 1]) * (1.0 + 0.5 * scaled_cheb_t(1, z, L))
    print(f"z={z:.2f}  max error {np.max(np.abs(cyl.values[iz][grid.mask] - ref)):.2e}")
