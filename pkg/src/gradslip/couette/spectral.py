"""High-accuracy Couette reference solutions for convergence studies.

Legendre-Gauss-Lobatto collocation on a mapped interval [0, L], integrated
exactly in time for walls of the form a (1 - cos(omega t)).  The moment system
uses SAT penalties (the LGL weights make the derivative summation-by-parts, so
a strictly dissipative BC gives an energy estimate); the NS heat equation
imposes its slip row strongly.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import linalg as sla
from scipy.interpolate import BarycentricInterpolator

from ..boundary_ops import check_strict_dissipativity
from .solvers import CosineWall


@dataclass(frozen=True)
class MappedGrid:
    """LGL nodes s_j in [0, 1] mapped by x = L (exp(beta s) - 1) / (exp(beta) - 1)."""
    s: np.ndarray
    x: np.ndarray
    weights: np.ndarray     # quadrature weights in x
    D: np.ndarray           # d/dx at the nodes
    length: float
    beta: float

    def to_s(self, x):
        x = np.asarray(x, float)
        if self.beta == 0:
            return x / self.length
        return np.log1p(x / self.length * math.expm1(self.beta)) / self.beta

    def interpolate(self, values, x):
        """Polynomial interpolant (in s) of nodal values, last axis = nodes."""
        f = BarycentricInterpolator(self.s, np.asarray(values).T)
        return np.asarray(f(self.to_s(x))).T


def lgl(n):
    """Nodes, weights and differentiation matrix of degree n on [-1, 1]."""
    P = np.polynomial.legendre.Legendre.basis(n)
    x = np.r_[-1.0, np.sort(P.deriv().roots().real), 1.0]
    Pn = P(x)
    w = 2.0 / (n * (n + 1) * Pn ** 2)
    with np.errstate(divide="ignore"):
        D = np.outer(Pn, 1.0 / Pn) / np.subtract.outer(x, x)
    np.fill_diagonal(D, 0.0)
    D[0, 0] = -n * (n + 1) / 4.0
    D[-1, -1] = n * (n + 1) / 4.0
    return x, w, D


def mapped_grid(n, length, beta=4.0):
    xi, w, D = lgl(n)
    s = 0.5 * (xi + 1)
    if beta == 0:
        x = length * s
        dxds = np.full_like(s, length)
    else:
        c = length / math.expm1(beta)
        x = c * np.expm1(beta * s)
        x[-1] = length
        dxds = c * beta * np.exp(beta * s)
    Dx = (2.0 * D) / dxds[:, None]
    return MappedGrid(s, x, 0.5 * w * dxds, Dx, float(length), float(beta))


def exact_periodic_response(L, f0, f1, omega, times):
    """W(t) for W' = L W + f0 + Re(f1 e^{i omega t}), W(0) = 0."""
    n = L.shape[0]
    a0 = np.linalg.solve(L, f0)
    a1 = np.linalg.solve(1j * omega * np.eye(n) - L, f1)
    out = []
    for t in times:
        E = sla.expm(L * t)
        w = E @ a0 - a0 + np.real(np.exp(1j * omega * t) * a1 - E @ a1)
        out.append(w)
    return np.array(out)


def _cosine(wall):
    if not isinstance(wall, CosineWall):
        raise TypeError("the reference solver integrates cosine walls exactly; got %r" % (wall,))
    return wall.amplitude, wall.omega


def default_length(eps, T):
    """Domain long enough that the diffusive layer is negligible at x = L."""
    return min(1.0, 16.0 * math.sqrt(eps * T))


@dataclass
class SpectralSolution:
    grid: MappedGrid
    times: list
    W: np.ndarray           # (len(times), components, nodes)

    def at(self, t):
        return self.W[self.times.index(float(t))]

    def evaluate(self, t, x):
        return self.grid.interpolate(self.at(t), x)


def moment_reference(system, eps, times, wall=None, n=160, length=None, beta=4.0):
    """Moment solution of the Couette chain by SAT-LGL collocation."""
    wall = wall or CosineWall()
    amp, omega = _cosine(wall)
    times = [float(t) for t in times]
    grid = mapped_grid(n, length or default_length(eps, max(times)), beta)
    nn = n + 1
    Ac, Bc = system.Ac, system.Bc
    lam, R = np.linalg.eigh(Ac)
    Am = (R * np.minimum(lam, 0)) @ R.T
    c = check_strict_dissipativity(Bc, Ac).c
    sig = 1.0 / c
    e0 = np.zeros((nn, nn)); e0[0, 0] = 1.0
    eL = np.zeros((nn, nn)); eL[-1, -1] = 1.0
    I = np.eye(nn)
    L = (-np.kron(Ac, grid.D) - np.kron(system.Qc, I) / eps
         - sig / grid.weights[0] * np.kron(Bc.T @ Bc, e0)
         + 1.0 / grid.weights[-1] * np.kron(Am, eL))
    beta_vec = system.chi_hat * system.Sc[:, 0]
    g = sig / grid.weights[0] * np.kron(Bc.T @ beta_vec, I[:, 0])
    W = exact_periodic_response(L, amp * g, -amp * g.astype(complex), omega, times)
    return SpectralSolution(grid, times, W.reshape(len(times), system.size, nn))


def ns_reference(eps, times, a1=0.0, a2=0.0, a3=0.0, wall=None, n=160, length=None,
                 beta=4.0, mu=1.0):
    """u_t = mu eps u_xx, u - a1 u_x - a2 u_xx = u_w + a3 u_w' at 0, u(L) = 0."""
    wall = wall or CosineWall()
    amp, omega = _cosine(wall)
    times = [float(t) for t in times]
    grid = mapped_grid(n, length or default_length(eps, max(times)), beta)
    D = grid.D
    D2 = D @ D
    row = -a1 * D[0] - a2 * D2[0]
    row[0] += 1.0
    # u_0 = (f - row[1:-1] u_int) / row[0], u_N = 0
    inner = slice(1, n)
    Lint = mu * eps * (D2[inner, inner] - np.outer(D2[inner, 0], row[inner]) / row[0])
    gvec = mu * eps * D2[inner, 0] / row[0]
    # f(t) = amp - Re(amp (1 + i a3 omega) e^{i omega t})
    f1 = -amp * (1 + 1j * a3 * omega) * gvec
    U = exact_periodic_response(Lint, amp * gvec, f1, omega, times)
    full = np.zeros((len(times), n + 1))
    full[:, inner] = U
    for k, t in enumerate(times):
        f = amp * (1 - math.cos(omega * t)) + a3 * amp * omega * math.sin(omega * t)
        full[k, 0] = (f - row[inner] @ U[k]) / row[0]
    return SpectralSolution(grid, times, full[:, None, :])


def layer_quadrature(length, eps, levels=None, order=16):
    """Gauss-Legendre panels on [0, length], halving toward the wall down to ~eps/64."""
    if levels is None:
        levels = max(1, int(math.ceil(math.log2(length / (eps / 64.0)))))
    edges = np.r_[0.0, length * 2.0 ** -np.arange(levels, -1, -1)]
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = edges[:-1, None], edges[1:, None]
    return (0.5 * (b - a) * x + 0.5 * (b + a)).ravel(), (0.5 * (b - a) * w).ravel()
