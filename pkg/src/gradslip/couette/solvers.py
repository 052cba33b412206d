"""Time-dependent Couette solvers: upwind moment scheme and implicit NS.

Both solve on x in [0, L] with the moving plate at x = 0.  The moment solver
stores cell averages at x_i = (i - 1/2) h; the NS solver uses nodes x_i = i h.
"""

from dataclasses import dataclass, field
import math
from typing import Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.interpolate import CubicSpline
from scipy.sparse.linalg import splu

from ..half_space import REFERENCE_BGK


class CosineWall:
    """u_w(t) = a (1 - cos(omega t)); derivatives available to any order."""

    def __init__(self, amplitude=1.0, omega=2 * math.pi):
        self.amplitude = float(amplitude)
        self.omega = float(omega)

    def __call__(self, t):
        return self.amplitude * (1 - np.cos(self.omega * np.asarray(t, float)))

    def derivative(self, t, k=1):
        if k == 0:
            return self(t)
        # d^k/dt^k of -cos(w t) = -w^k cos(w t + k pi/2)
        t = np.asarray(t, float)
        return -self.amplitude * self.omega ** k * np.cos(self.omega * t + k * math.pi / 2)

    def __repr__(self):
        return "CosineWall(amplitude=%g, omega=%g)" % (self.amplitude, self.omega)


class TabulatedWall:
    """Wall speed interpolated from (t, u) samples with a cubic spline."""

    def __init__(self, t, u):
        t = np.asarray(t, float)
        u = np.asarray(u, float)
        if t.ndim != 1 or t.shape != u.shape or t.size < 4:
            raise ValueError("need at least four (t, u) samples")
        if t[0] != 0.0:
            raise ValueError("wall signal must start at t = 0")
        if abs(u[0]) > 1e-12:
            raise ValueError("wall signal must satisfy u_w(0) = 0")
        self.spline = CubicSpline(t, u)
        self.t_max = t[-1]

    @classmethod
    def from_file(cls, path):
        data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
        return cls(data[:, 0], data[:, 1])

    def __call__(self, t):
        return self.spline(t)

    def derivative(self, t, k=1):
        return self.spline(t, k) if k <= 3 else np.zeros_like(np.asarray(t, float))


SOLVERS = ("moment", "ns_noslip", "ns_slip1", "ns_slip2", "ns_constructed")


@dataclass(frozen=True)
class CouetteRun:
    eps: float
    N_grid: int = 2000
    dt: Optional[float] = None
    T: float = 0.25
    wall: object = field(default_factory=CosineWall)
    solver: str = "moment"
    times: Optional[Sequence[float]] = None
    length: float = 1.0
    k0: float = REFERENCE_BGK["k0"]
    k2: float = REFERENCE_BGK["k2"]
    theta: float = 1.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("Knudsen number must be positive")
        if self.N_grid < 4:
            raise ValueError("grid needs at least four cells")
        if self.solver not in SOLVERS:
            raise ValueError("solver must be one of %s" % (SOLVERS,))
        if abs(float(self.wall(0.0))) > 1e-12:
            raise ValueError("wall speed must vanish at t = 0")
        if self.T <= 0:
            raise ValueError("final time must be positive")
        if not 0.5 <= self.theta <= 1.0:
            raise ValueError("theta must lie in [1/2, 1]")

    @property
    def output_times(self):
        ts = sorted(set(float(t) for t in (() if self.times is None else self.times)) | {float(self.T)})
        if ts[0] < 0 or ts[-1] > self.T:
            raise ValueError("output times must lie in [0, T]")
        return ts

    @property
    def h(self):
        return self.length / self.N_grid


@dataclass
class CouetteProfile:
    run: CouetteRun
    x: np.ndarray
    times: list
    u: np.ndarray           # (len(times), len(x))
    W: Optional[np.ndarray] = None   # (len(times), len(x), M+1), moment runs only

    def at(self, t):
        return self.u[self.times.index(float(t))]


def _segments(times, dt_max):
    """Step sizes that land exactly on every output time."""
    t0 = 0.0
    for t in times:
        span = t - t0
        if span > 0:
            n = max(1, math.ceil(span / dt_max - 1e-9))
            yield t, n, span / n
        else:
            yield t, 0, 0.0
        t0 = t


def upwind_split(Ac):
    lam, R = np.linalg.eigh(Ac)
    Ap = (R * np.maximum(lam, 0)) @ R.T
    Am = (R * np.minimum(lam, 0)) @ R.T
    return Ap, Am, lam, R


def solve_moment_couette(run, system, keep_moments=False):
    """First-order upwind with implicit relaxation.

    Incoming characteristics at the wall come from B_c W = b_c, outgoing ones
    are copied from the first cell; the far end sees a zero state.
    """
    h = run.h
    Ap, Am, lam, R = upwind_split(system.Ac)
    speed = np.abs(lam).max()
    dt_cfl = h / speed
    if run.dt is not None and run.dt > dt_cfl * (1 + 1e-12):
        raise ValueError("dt = %g violates the CFL limit h/max|lambda| = %g" % (run.dt, dt_cfl))
    dt_max = run.dt if run.dt is not None else 0.9 * dt_cfl
    Rp = R[:, lam > 0]
    Bc = system.Bc
    BRinv = np.linalg.inv(Bc @ Rp)
    gain = Rp * lam[lam > 0]           # maps the incoming correction to a flux
    q = np.diag(system.Qc)
    bvec = system.chi_hat * system.Sc[:, 0]

    x = (np.arange(run.N_grid) + 0.5) * h
    W = np.zeros((run.N_grid, system.size))
    out_u, out_W = [], []
    t = 0.0
    for t_out, nsteps, dt in _segments(run.output_times, dt_max):
        relax = 1.0 / (1.0 + dt / run.eps * q)
        for _ in range(nsteps):
            F = np.empty((run.N_grid + 1, system.size))
            F[1:-1] = W[:-1] @ Ap.T + W[1:] @ Am.T
            F[-1] = W[-1] @ Ap.T
            delta = BRinv @ (bvec * float(run.wall(t)) - Bc @ W[0])
            F[0] = system.Ac @ W[0] + gain @ delta
            W = (W - dt / h * (F[1:] - F[:-1])) * relax
            t += dt
        t = t_out
        out_u.append(W[:, 0].copy())
        if keep_moments:
            out_W.append(W.copy())
    return CouetteProfile(run, x, run.output_times, np.array(out_u),
                          np.array(out_W) if keep_moments else None)


def ns_bc_coefficients(run, K_M=None, J_M=None):
    """(a1, a2, a3) in u - a1 u_x - a2 u_xx = u_w + a3 u_w' at x = 0."""
    e = run.eps
    if run.solver == "ns_noslip":
        return 0.0, 0.0, 0.0
    if run.solver == "ns_slip1":
        return math.sqrt(2) * run.k0 * e, 0.0, 0.0
    if run.solver == "ns_slip2":
        return math.sqrt(2) * run.k0 * e, 2 * run.k2 * e * e, 0.0
    if run.solver == "ns_constructed":
        if K_M is None or J_M is None:
            raise ValueError("constructed BC needs the Couette constants K_M and J_M")
        return K_M * e, 0.0, J_M * e
    raise ValueError("solver %r is not a Navier-Stokes variant" % run.solver)


def solve_ns_couette(run, K_M=None, J_M=None, mu=1.0, dt=None):
    """Theta-scheme for u_t = mu eps u_xx with a slip row at the wall, u(L) = 0.

    One-sided second-order stencils enter the wall row; the matrix is factored
    once.  Without run.dt the step defaults to h (first-order in time would
    otherwise dominate the comparisons).
    """
    a1, a2, a3 = ns_bc_coefficients(run, K_M, J_M)
    N, h = run.N_grid, run.h
    dt_max = dt or run.dt or 0.2 * h
    x = np.arange(N + 1) * h
    th = run.theta
    out, t, u = [], 0.0, np.zeros(N + 1)
    for t_out, nsteps, step in _segments(run.output_times, dt_max):
        if nsteps:
            r = mu * run.eps * step / h ** 2
            main = np.full(N + 1, 1 + 2 * th * r)
            off = np.full(N, -th * r)
            A = sparse.diags([off, main, off], [-1, 0, 1], format="lil")
            A[0, :4] = [1 + 1.5 * a1 / h - 2 * a2 / h ** 2, -2 * a1 / h + 5 * a2 / h ** 2,
                        0.5 * a1 / h - 4 * a2 / h ** 2, a2 / h ** 2]
            A[N, N - 1], A[N, N] = 0.0, 1.0
            lu = splu(A.tocsc())
        for _ in range(nsteps):
            t += step
            rhs = u.copy()
            if th < 1:
                rhs[1:-1] += (1 - th) * r * (u[2:] - 2 * u[1:-1] + u[:-2])
            rhs[0] = float(run.wall(t)) + a3 * float(run.wall.derivative(t))
            rhs[N] = 0.0
            u = lu.solve(rhs)
        t = t_out
        out.append(u.copy())
    return CouetteProfile(run, x, run.output_times, np.array(out))


def run_couette(run, system=None, K_M=None, J_M=None):
    if run.solver == "moment":
        if system is None:
            raise ValueError("moment runs need a CouetteSystem")
        return solve_moment_couette(run, system)
    return solve_ns_couette(run, K_M, J_M)


def l2_norm(x, f):
    """Trapezoidal L2 norm of samples f on the grid x."""
    return math.sqrt(np.trapezoid(np.asarray(f) ** 2, x))


def profile_difference(a, b, t):
    """Difference of two profiles at time t on the grid of b (a interpolated)."""
    if a.run.length != b.run.length:
        raise ValueError("profiles live on different domains")
    ua = a.at(t)
    ub = b.at(t)
    if a.x.shape != b.x.shape or not np.array_equal(a.x, b.x):
        ua = np.interp(b.x, a.x, ua)
    return b.x, ua - ub


def fitted_slope(eps, errors):
    """Convergence rate p of error ~ eps^p from a least-squares fit in log2.

    On axes (-log2 eps, log2 error) the fitted line falls with slope -p.
    Returns None for fewer than three points.
    """
    eps = np.asarray(eps, float)
    errors = np.asarray(errors, float)
    if eps.size < 3:
        return None
    return float(np.polyfit(np.log2(eps), np.log2(errors), 1)[0])


@dataclass
class ErrorReport:
    l2_by_eps: dict         # family -> [(eps, error), ...]
    fitted_slopes: dict     # family -> rate or None


def error_report(pairs, t):
    """L2 differences at time t and fitted rates for families of profile pairs.

    pairs maps a family name to [(eps, profile_a, profile_b), ...]; both
    profiles of a pair must share one grid.
    """
    errs, rates = {}, {}
    for fam, items in pairs.items():
        rows = []
        for eps, a, b in items:
            if a.x.shape != b.x.shape or not np.array_equal(a.x, b.x):
                raise ValueError("family %s, eps=%g: profiles live on different grids" % (fam, eps))
            rows.append((eps, l2_norm(b.x, a.at(t) - b.at(t))))
        errs[fam] = rows
        rates[fam] = fitted_slope([r[0] for r in rows], [r[1] for r in rows])
    return ErrorReport(errs, rates)
