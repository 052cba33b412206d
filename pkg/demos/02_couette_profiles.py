# Oscillating-plate Couette flow at eps = 0.1
# ===========================================
#
# The plate moves with u_w(t) = 1 - cos(2 pi t).  Compare the moment solution
# with three Navier-Stokes variants that differ only in their wall condition.

import math

import numpy as np

from gradslip.couette import (build_couette, couette_slip_constants, CouetteRun,
                              solve_moment_couette, solve_ns_couette)

eps, t = 0.1, 0.1
system = build_couette(7)
K, J = couette_slip_constants(system)
print("slip constants of the M=7 chain: K=%.5f J=%.5f" % (K, J))

base = dict(eps=eps, N_grid=2000, T=0.25, times=[t])
mom = solve_moment_couette(CouetteRun(solver="moment", **base), system)
ns = {v: solve_ns_couette(CouetteRun(solver=v, **base)) for v in ("ns_noslip", "ns_slip1", "ns_slip2")}

x = ns["ns_noslip"].x
um = np.interp(x, mom.x, mom.at(t))
y = x / math.sqrt(eps)

# %% a few stations across the viscous layer
print("%8s %8s %9s %9s %9s %9s" % ("x2", "y", "moment", "noslip", "slip1", "slip2"))
for yy in (0.0, 0.05, 0.1, 0.3, 0.6, 1.0, 2.0):
    i = np.argmin(abs(y - yy))
    print("%8.4f %8.3f %9.5f %9.5f %9.5f %9.5f" % (x[i], y[i], um[i],
          *(ns[v].at(t)[i] for v in ns)))

# %% distance to the moment profile away from the Knudsen layer
win = (y >= 0.3) & (y <= 1.0)
for v in ns:
    print("%-10s sup diff on 0.3<=y<=1: %.4f" % (v, np.abs(um - ns[v].at(t))[win].max()))
