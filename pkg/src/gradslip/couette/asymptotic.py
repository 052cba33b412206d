"""Three-scale approximation of the Couette moment solution.

Viscous-layer fields live on y = x / sqrt(eps), Knudsen-layer fields on
z = x / eps; the outer solution is zero.  Viscous fields are written through
the heat-equation Dirichlet operator

    D[g](t, y) = g(0) erfc(y / 2 sqrt t) + int_0^t g'(tau) erfc(y / 2 sqrt(t - tau)) dtau,

evaluated with Gauss-Legendre panels in s = sqrt(t - tau), graded toward s = 0.
With this, u0 = D[u_w], u1 = K dy u0 and u2 = (K^2 + J) dt u0 - (y/2) dy dt u0.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import erfc

from .system import couette_knudsen_basis, couette_slip_constants, slip_matrix

_GL = np.polynomial.legendre.leggauss(16)


def _panel_nodes(t, levels=40):
    """Nodes/weights in s on [0, sqrt t], panels halving toward s = 0."""
    st = math.sqrt(t)
    edges = np.r_[0.0, st * 2.0 ** -np.arange(levels, -1, -1)]
    x, w = _GL
    a, b = edges[:-1, None], edges[1:, None]
    s = (0.5 * (b - a) * x + 0.5 * (b + a)).ravel()
    ws = (0.5 * (b - a) * w).ravel()
    return s, ws


def heat_value(g0, dg, t, y):
    """D[g](t, y) for data with value g0 = g(0) and derivative callable dg."""
    y = np.atleast_1d(np.asarray(y, float))
    if t <= 0:
        return np.zeros_like(y)
    s, w = _panel_nodes(t)
    ker = erfc(np.divide.outer(y, 2 * s))          # (ny, ns)
    val = ker @ (w * 2 * s * dg(t - s * s))
    return val + g0 * erfc(y / (2 * math.sqrt(t)))


def heat_flux(g0, dg, t, y):
    """dy D[g](t, y)."""
    y = np.atleast_1d(np.asarray(y, float))
    if t <= 0:
        return np.zeros_like(y)
    s, w = _panel_nodes(t)
    ker = np.exp(-np.divide.outer(y * y, 4 * s * s))
    val = -(ker @ (w * dg(t - s * s))) * (2 / math.sqrt(math.pi))
    return val - g0 * np.exp(-y * y / (4 * t)) / math.sqrt(math.pi * t)


@dataclass
class AsymptoticCouette:
    """Composite approximation for one Couette system, wall signal and eps."""
    system: object
    wall: object
    eps: float
    K: float
    J: float
    kb: object
    p: np.ndarray       # w_- per unit of dy u0(t, 0) at order one
    q: np.ndarray       # w_- per unit of u_w'(t) at order two

    # viscous layer ---------------------------------------------------------

    def _u0_parts(self, t, y):
        w = self.wall
        d = lambda k: (lambda tau: w.derivative(tau, k))
        u0 = heat_value(float(w(0.0)), d(1), t, y)
        u0y = heat_flux(float(w(0.0)), d(1), t, y)
        u0t = heat_value(float(w.derivative(0.0, 1)), d(2), t, y)
        u0ty = heat_flux(float(w.derivative(0.0, 1)), d(2), t, y)
        u0tt = heat_value(float(w.derivative(0.0, 2)), d(3), t, y)
        return u0, u0y, u0t, u0ty, u0tt

    def viscous(self, t, y):
        """Viscous-layer fields at time t on the stretched variable y."""
        y = np.atleast_1d(np.asarray(y, float))
        u0, u0y, u0t, u0ty, u0tt = self._u0_parts(t, y)
        K, J = self.K, self.J
        s2 = math.sqrt(2)
        u1 = K * u0y
        u2 = (K * K + J) * u0t - 0.5 * y * u0ty
        u2y = (K * K + J - 0.5) * u0ty - 0.5 * y * u0tt
        return {
            "u0": u0, "u1": u1, "u2": u2,
            "sigma1": -u0y,
            "sigma2": -K * u0t,                 # -dy u1
            "w2_2": s2 * u0t,                   # -sqrt2 dy sigma1 = sqrt2 dyy u0
            "sigma3": -u0ty - u2y,              # -dt sigma1 - dy u2 - sqrt2 dy w2_2
            "w2_3": s2 * K * u0ty,              # -sqrt2 dy sigma2 = sqrt2 dt u1
            "w3_3": -math.sqrt(6) * u0ty,       # -sqrt3 dy w2_2
        }

    def ns_approximation(self, t, x):
        """u_a = u0 + sqrt(eps) u1 + eps u2 on the physical variable x."""
        v = self.viscous(t, np.asarray(x, float) / math.sqrt(self.eps))
        return v["u0"] + math.sqrt(self.eps) * v["u1"] + self.eps * v["u2"]

    # Knudsen layer ---------------------------------------------------------

    def _wall_rates(self, t):
        w = self.wall
        d = lambda k: (lambda tau: w.derivative(tau, k))
        u0y = heat_flux(float(w(0.0)), d(1), t, 0.0)[0]
        u0ty = heat_flux(float(w.derivative(0.0, 1)), d(2), t, 0.0)[0]
        return u0y, u0ty, float(w.derivative(t, 1))

    def knudsen(self, t, z):
        """Knudsen-layer corrections of orders 1, 2, 3 at time t.

        Each entry is a dict with 'u', 'we', 'sigma', 'wo' arrays over z, where
        'we' = (w2, w4, ...) and 'wo' = (w3, w5, ...).
        """
        z = np.atleast_1d(np.asarray(z, float))
        Re, Ro, lam = self.kb.Re, self.kb.Ro, self.kb.lam
        g = self.system.g
        E = np.exp(-np.outer(1.0 / lam, z))               # (modes, nz)
        u0y, u0ty, dw = self._wall_rates(t)

        def modal(c):
            we = Re @ (c[:, None] * E)
            return {"u": -g @ we, "we": we, "sigma": np.zeros_like(z), "wo": Ro @ (c[:, None] * E)}

        c1 = u0y * self.p
        c2 = (self.K * self.p + self.q) * dw
        k1, k2 = modal(c1), modal(c2)

        # order three: forcing from dt W^(1) and from sigma-check^(3) in the w2 row
        d = u0ty * self.p
        P = Re.T @ np.outer(g, g) @ Re
        Fm = (np.eye(lam.size) + P) * d[None, :]
        Fp = P * d[None, :]
        wm = np.zeros((lam.size, z.size))
        wp = np.zeros((lam.size, z.size))
        for k in range(lam.size):
            for l in range(lam.size):
                if l == k:
                    wm[k] += -Fm[k, k] / lam[k] * z * E[k]
                else:
                    wm[k] += -Fm[k, l] * lam[l] / (lam[l] - lam[k]) * E[l]
                wp[k] += -Fp[k, l] * lam[l] / (lam[k] + lam[l]) * E[l]
        we3 = Re @ (wm + wp)
        wo3 = Ro @ (wm - wp)
        gRe = g @ Re
        sig3 = -(gRe * d * lam) @ E
        u3 = -g @ we3 - (gRe * d * lam ** 2) @ E
        k3 = {"u": u3, "we": we3, "sigma": sig3, "wo": wo3}
        return k1, k2, k3

    # composite ---------------------------------------------------------------

    def composite(self, t, x):
        """W_app(t, x) in chain order (u, w2, ..., sigma, w3, ...), shape (M+1, nx)."""
        x = np.atleast_1d(np.asarray(x, float))
        e = self.eps
        r = math.sqrt(e)
        h = self.system.half
        v = self.viscous(t, x / r)
        k1, k2, k3 = self.knudsen(t, x / e)
        W = np.zeros((self.system.size, x.size))
        W[0] = v["u0"] + r * (v["u1"] + k1["u"]) + e * (v["u2"] + k2["u"]) + e * r * k3["u"]
        W[1:h] = r * k1["we"] + e * k2["we"] + e * r * k3["we"]
        W[1] += e * v["w2_2"] + e * r * v["w2_3"]
        W[h] = r * v["sigma1"] + e * v["sigma2"] + e * r * (v["sigma3"] + k3["sigma"])
        W[h + 1:] = r * k1["wo"] + e * k2["wo"] + e * r * k3["wo"]
        W[h + 1] += e * r * v["w3_3"]
        return W


def build_asymptotic_couette(system, wall, eps, constants=None):
    kb = couette_knudsen_basis(system)
    K, J = constants if constants is not None else couette_slip_constants(system, kb)
    HM = slip_matrix(system, kb)
    one_g = np.concatenate([[1.0], system.g])
    zero_g = np.concatenate([[0.0], system.g])
    p = np.linalg.solve(HM, one_g)[1:]
    q = -np.linalg.solve(HM, system.chi_hat * system.Sc @ zero_g)[1:]
    if abs(float(wall(0.0))) > 1e-12:
        raise ValueError("wall speed must vanish at t = 0")
    return AsymptoticCouette(system, wall, float(eps), K, J, kb, p, q)
