"""
How large can the reconstruction amplify errors?
================================================

The uniform operator norm is the maximum over the disk of
Lambda_m(p) = sum sin(psi_j) |T_{j,nu}(p)|. It grows like m log(m + 1).
"""

# %%
import numpy as np

from oped import lebesgue, norm_scan
from oped.analysis import witness_point

print(lebesgue(4, (0.0, 0.0)), lebesgue(4, witness_point(4)))

# %%
scan = norm_scan([4, 8, 16, 32], grid_res=128)
for m, mx, r, w in zip(scan.ms, scan.maxima, scan.ratios, scan.witness):
    print(f"m={m:2d}  max={mx:8.3f}  max/(m log(m+1))={r:.3f}  witness={w:8.3f}")

# %%
# Near the boundary the function peaks between neighbouring view directions.
ang = np.linspace(0, 2 * np.pi / 9, 7)
print(np.round([lebesgue(4, (0.999 * np.cos(a), 0.999 * np.sin(a))) for a in ang], 3))
