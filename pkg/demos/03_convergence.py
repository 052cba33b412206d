# How fast do the wall conditions agree as eps -> 0?
# ==================================================
#
# Differences between the NS variants, and between the moment solution and
# the three-scale asymptotic approximation, on a sweep of Knudsen numbers.

from gradslip.cli import convergence_study
from gradslip.couette import fitted_slope

eps = [2.0 ** -k for k in range(5, 10)]
res = convergence_study(eps, grid=2000, T=0.25, M=7, composite=True)

for (family, t), pts in sorted(res.items()):
    rate = fitted_slope([p[0] for p in pts], [p[1] for p in pts])
    errs = "  ".join("%.2e" % e for _, e in pts)
    print("%-17s t=%.2f  rate %.3f   %s" % (family, t, rate, errs))
