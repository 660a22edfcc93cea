"""
Chebyshev polynomials and the two Gaussian rules
================================================

Everything downstream rests on U_k, T_k and two quadrature rules: one for
the weight sqrt(1 - t^2) on [-1, 1] and one for 1/sqrt(z (L - z)) on [0, L].
"""

# %%
import math

import numpy as np

from oped import angle_grid, cheb_u, gauss_t_nodes, gauss_u_rule, scaled_cheb_t

# U_k by recurrence agrees with sin((k+1) a) / sin(a) at x = cos(a).
a = np.linspace(0.1, 3.0, 5)
print(np.max(np.abs(cheb_u(7, np.cos(a)) - np.sin(8 * a) / np.sin(a))))

# %%
# The scanning geometry for m = 3: 7 view angles, 6 offsets per view.
g = angle_grid(3)
print("phi:", np.round(g.phi, 4))
print("t:  ", np.round(g.t, 4))

# %%
# gauss_u_rule(n) is exact up to degree 2n - 1. At degree 2n the miss is 4^-n.
rule = gauss_u_rule(4)


def moment(d):
    """(2/pi) int t^d sqrt(1 - t^2) dt."""
    return 0.0 if d % 2 else math.comb(d, d // 2) / ((d // 2 + 1) * 2**d)


for d in (6, 7, 8):
    print(d, rule.apply(lambda t: t**d) - moment(d))

# %%
# The cylinder rule: equal weights 1/n, nodes scaled to [0, L].
z = gauss_t_nodes(4, 2.0)
print("nodes:", np.round(z, 6))
gram = np.array([[np.mean(scaled_cheb_t(a, z, 2.0) * scaled_cheb_t(b, z, 2.0)) for b in range(4)] for a in range(4)])
print(np.round(gram, 12))
