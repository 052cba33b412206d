# Slip coefficients from the Knudsen-layer problems
# ==================================================
#
# Build the moment system for a few orders, check the boundary condition and
# print the six slip/jump coefficients next to their converged BGK values.

import numpy as np

from gradslip import build_system, build_bc, check_maximal_positive, slip_coefficients
from gradslip.half_space import REFERENCE_BGK, generalized_eigen

# %% the system and its boundary operator
s = build_system(5)
print("M=5: N=%d, even=%d, odd=%d" % (s.N, s.basis.m, s.basis.n))
bc = build_bc(s, chi=1.0)
cert = check_maximal_positive(bc, s.A2)
print("boundary space dim", cert.dimN, "min -v'A2v", "%.1e" % cert.min_quadratic)

# %% the pencil A2 x = lam Q x that the layer modes come from
sp = generalized_eigen(s.A2, s.Q, s.G, s.H)
print({c: sp.count(c) for c in ("positive", "negative", "zero", "infinite")})
print("decay lengths:", np.round(sp.select("positive")[0], 4))

# %% coefficients against M
names = ("k0", "t0", "k2", "k1", "t1", "t2")
print("%4s" % "M" + "".join("%10s" % n for n in names))
for M in range(3, 11):
    c = slip_coefficients(M)
    print("%4d" % M + "".join("%10.5f" % getattr(c, n) for n in names))
print("%4s" % "ref" + "".join("%10.5f" % REFERENCE_BGK[n] for n in names))

# %% partial accommodation makes the wall slipperier
for chi in (1.0, 0.5, 0.25):
    c = slip_coefficients(7, chi)
    print("chi=%.2f  k0=%.4f  t1=%.4f" % (chi, c.k0, c.t1))
