"""Knudsen-layer half-space problems and the slip/transport coefficients.

The layer solves A2 W' = -Q W on z >= 0 with W -> 0 at infinity.  Decaying
solutions are spanned by x exp(-z/lam) for the generalized eigenpairs
A2 x = lam Q x with lam > 0.
"""

from dataclasses import dataclass, fields
import math
from typing import NamedTuple
import warnings

import numpy as np
from scipy import linalg as sla

from .moment_core import build_system, shift, unit
from .boundary_ops import build_bc

ZERO_TOL = 1e-9

# converged BGK values for a fully diffuse wall (chi = 1)
REFERENCE_BGK = {"k0": 1.01619, "t0": 0.38316, "t1": 1.30272,
                 "k1": 0.44046, "k2": -0.76632, "t2": -1.42758}

# hard-sphere transport coefficients quoted from the literature
HARD_SPHERE_GAMMA = {"gamma1": 1.270042, "gamma2": 1.922284}


class SpectralDecomposition(NamedTuple):
    """Finite pairs of A2 x = lam Q x plus the infinite part.

    `vectors` are Q-orthonormal and sorted by (class, lam); `classes` holds
    'positive' | 'negative' | 'zero' per finite pair.  The infinite part has
    algebraic multiplicity `n_infinite`; its eigenvectors span Null(Q).
    """
    values: np.ndarray
    vectors: np.ndarray
    classes: tuple
    n_infinite: int
    infinite_vectors: np.ndarray

    def count(self, cls):
        if cls == "infinite":
            return self.n_infinite
        return sum(c == cls for c in self.classes)

    def select(self, cls):
        mask = np.array([c == cls for c in self.classes], dtype=bool)
        return self.values[mask], self.vectors[:, mask]


def _fix_sign(X):
    for k in range(X.shape[1]):
        col = X[:, k]
        big = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())
        if big.size and col[big[0]] < 0:
            X[:, k] = -col
    return X


def _null_basis(Q, tol=1e-10):
    """Orthonormal null space of Q and its orthonormal complement."""
    w, V = np.linalg.eigh(Q)
    small = np.abs(w) <= tol * max(1.0, np.abs(w).max())
    return V[:, small], V[:, ~small]


def generalized_eigen(A2, Q, G=None, H=None, zero_tol=ZERO_TOL):
    """Solve A2 x = lam Q x by deflating Null(Q) = span(G).

    With x = G a + H b the G-rows force A_gg a + A_gh b = 0.  On the range of
    A_gg this fixes a, on its kernel it restricts b to Y = null(Z^T A_gh).  The
    remaining problem is symmetric definite on Y.
    """
    A2 = np.asarray(A2, float)
    Q = np.asarray(Q, float)
    if G is None or H is None:
        G, H = _null_basis(Q)
    K = H.T @ Q @ H
    Agg, Agh, Ahh = G.T @ A2 @ G, G.T @ A2 @ H, H.T @ A2 @ H
    w, V = np.linalg.eigh(Agg)
    rng = np.abs(w) > 1e-10 * max(1.0, np.abs(w).max())
    R, Z = V[:, rng], V[:, ~rng]
    Ar = R.T @ Agg @ R
    Sred = Ahh - Agh.T @ R @ np.linalg.solve(Ar, R.T @ Agh)
    Y = sla.null_space(Z.T @ Agh) if Z.shape[1] else np.eye(H.shape[1])
    lam, c = sla.eigh(Y.T @ Sred @ Y, Y.T @ K @ Y)
    b = Y @ c
    ar = -np.linalg.solve(Ar, R.T @ Agh @ b)
    rhs = (K @ b) * lam - Sred @ b
    az = np.linalg.lstsq(Agh.T @ Z, rhs, rcond=None)[0] if Z.shape[1] else np.zeros((0, b.shape[1]))
    X = G @ (R @ ar + Z @ az) + H @ b

    scale = max(np.abs(lam).max(), 1e-300) if lam.size else 1.0
    cls = np.where(np.abs(lam) <= zero_tol * scale, 0, np.where(lam > 0, 1, 2))
    gray = (np.abs(lam) <= zero_tol * scale) & (np.abs(lam) > 1e-12 * scale)
    if gray.any():
        warnings.warn("%d eigenvalue(s) near zero were classified as zero" % gray.sum())
    order = np.lexsort((lam, cls))
    names = {0: "zero", 1: "positive", 2: "negative"}
    lam = lam[order].copy()
    lam[cls[order] == 0] = 0.0
    X = _fix_sign(X[:, order])
    return SpectralDecomposition(lam, X, tuple(names[k] for k in cls[order]),
                                 A2.shape[0] - lam.size, G.copy())


@dataclass(frozen=True)
class KnudsenLayer:
    """Decaying layer W(z) = sum_i coeffs_i vectors_i exp(-z / rates_i)."""
    coeffs: np.ndarray
    vectors: np.ndarray
    rates: np.ndarray
    ge_h: np.ndarray

    def __call__(self, z):
        z = np.atleast_1d(np.asarray(z, float))
        E = np.exp(-np.outer(1.0 / self.rates, z)) * self.coeffs[:, None]
        return self.vectors @ E

    def derivative(self, z):
        z = np.atleast_1d(np.asarray(z, float))
        E = np.exp(-np.outer(1.0 / self.rates, z)) * (-self.coeffs / self.rates)[:, None]
        return self.vectors @ E


def _decaying(system, spectrum=None):
    if spectrum is None:
        spectrum = generalized_eigen(system.A2, system.Q, system.G, system.H)
    return spectrum.select("positive")


def solve_half_space(system, bc, h_known, spectrum=None):
    """Solve A2 W' = -Q W, B(W(0) - h) = 0, W(inf) = 0 given H^T h.

    Returns the layer and G_e^T h.  The decaying ansatz W(0) = X_+ c makes
    every non-positive characteristic component vanish, which leaves a square
    system in (c, G_e^T h).
    """
    if bc.kind != "modified":
        raise ValueError("half-space problems use the modified boundary condition")
    h_known = np.asarray(h_known, float)
    if h_known.shape != (system.H.shape[1],):
        raise ValueError("H^T h must have length N - 5 = %d" % system.H.shape[1])
    lam, X = _decaying(system, spectrum)
    B = bc.B
    Mat = np.hstack([B @ X, -B @ system.Ge])
    if Mat.shape[0] != Mat.shape[1]:
        raise np.linalg.LinAlgError("half-space system is %dx%d, expected square" % Mat.shape)
    rhs = B @ (system.H @ h_known)
    lu = sla.lu_factor(Mat)
    if np.abs(np.diag(lu[0])).min() < 1e-13 * np.abs(Mat).max():
        raise np.linalg.LinAlgError("half-space boundary system is singular")
    sol = sla.lu_solve(lu, rhs)
    p = X.shape[1]
    return KnudsenLayer(sol[:p], X, lam, sol[p:])


def solve_elemental(system, bc, driver, spectrum=None):
    """Elemental problem B(G_e G_e^T h + W) = B H K^-1 A at z = 0.

    Returns (G_e^T h, layer) in the sign convention of that problem.
    """
    hk = np.linalg.solve(system.K, driver)
    layer = solve_half_space(system, bc, hk, spectrum)
    return -layer.ge_h, layer


class DriverVector(NamedTuple):
    name: str
    A_vec: np.ndarray


def r_vector(system, i, d):
    """r_id: unit entry at the H-column labelled e_i + e_d (axes 1..3)."""
    v = np.zeros(system.H.shape[1])
    v[system.h_index(shift(unit(i - 1), d - 1))] = 1.0
    return v


def s_vector(system, d):
    v = np.zeros(system.H.shape[1])
    v[system.h_index(shift((0, 0, 0), d - 1, 3))] = math.sqrt(1.5)
    for i in range(3):
        if i != d - 1:
            v[system.h_index(shift(shift((0, 0, 0), d - 1), i, 2))] = math.sqrt(0.5)
    return v


def elemental_drivers(system):
    """The six driving terms, in the order of the extraction table."""
    K = system.K
    HAH = system.H.T @ system.A2 @ system.H
    r12, s1, s2 = r_vector(system, 1, 2), s_vector(system, 1), s_vector(system, 2)
    # r22 taken as the moment-space unit vector at 2e_2, projected by H^T
    e22 = np.zeros(system.N)
    e22[system.basis.index((0, 2, 0))] = 1.0
    return [DriverVector("r12", r12),
            DriverVector("s2", s2),
            DriverVector("s1", s1),
            DriverVector("sqrt2_Hr22", math.sqrt(2) * system.H.T @ e22),
            DriverVector("A2_r12", -HAH @ np.linalg.solve(K, r12)),
            DriverVector("A2_s2", -HAH @ np.linalg.solve(K, s2))]


# coefficient name, driver, Ge column (0: phi0, 1: phi1, 2: phi3, 3: phi4), weight
_EXTRACT = (("k0", "r12", 1, math.sqrt(2) / 2),
            ("t1", "s2", 3, math.sqrt(3) / 3),
            ("t0", "s1", 1, 0.5),
            ("k1", "sqrt2_Hr22", 3, math.sqrt(6) / 3),
            ("k2", "A2_r12", 1, 0.5),
            ("t2", "A2_s2", 3, math.sqrt(6) / 6))


@dataclass(frozen=True)
class SlipCoefficientSet:
    k0: float
    t0: float
    t1: float
    k1: float
    k2: float
    t2: float
    gamma1: float = 1.0
    gamma2: float = 1.0
    gamma3: float = 1.0
    M: int = 0
    chi: float = 1.0
    model: str = "bgk"

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def reference_coefficients():
    """Converged BGK coefficients for chi = 1."""
    return SlipCoefficientSet(**REFERENCE_BGK, M=0, chi=1.0, model="bgk")


def gamma_coefficients(system):
    """Viscosity, conductivity and cross coefficient from (H^T Q H)^-1 forms."""
    K = system.K
    r12, s1 = r_vector(system, 1, 2), s_vector(system, 1)
    Kr = np.linalg.solve(K, r12)
    Ks = np.linalg.solve(K, s1)
    HAH = system.H.T @ system.A2 @ system.H
    return float(r12 @ Kr), float(0.4 * s1 @ Ks), float(Kr @ HAH @ Ks)


def slip_coefficients(M, chi=1.0, collision="bgk", system=None):
    if system is None:
        system = build_system(M, collision)
    bc = build_bc(system, chi, "modified")
    spectrum = generalized_eigen(system.A2, system.Q, system.G, system.H)
    drivers = {d.name: d.A_vec for d in elemental_drivers(system)}
    vals = {}
    for name, drv, col, wgt in _EXTRACT:
        try:
            d, _ = solve_elemental(system, bc, drivers[drv], spectrum)
        except np.linalg.LinAlgError as exc:
            raise np.linalg.LinAlgError("driver %s: %s" % (drv, exc)) from exc
        vals[name] = float(wgt * d[col])
    g1, g2, g3 = gamma_coefficients(system)
    return SlipCoefficientSet(gamma1=g1, gamma2=g2, gamma3=g3, M=system.basis.M,
                              chi=float(chi), model=system.model, **vals)


@dataclass(frozen=True)
class NSSlipBC:
    """Coefficients of the second-order slip conditions at Knudsen number eps.

    u_2 = 0
    u_i - u_i^w = velocity_slip (du_i/dx2 + du_2/dx_i) + thermal_creep dtheta/dx_i
                  + second_order_slip d2u_i/dx2^2
    theta - theta^w = temperature_jump dtheta/dx2 + second_order_jump d2theta/dx2^2
                      + cross du_2/dx2
    """
    eps: float
    velocity_slip: float
    thermal_creep: float
    second_order_slip: float
    temperature_jump: float
    second_order_jump: float
    cross: float

    @property
    def is_no_slip(self):
        return all(getattr(self, f.name) == 0.0 for f in fields(self) if f.name != "eps")


def ns_slip_bc(coeffs, eps):
    if eps <= 0:
        raise ValueError("Knudsen number must be positive")
    s2 = math.sqrt(2)
    return NSSlipBC(eps, s2 * coeffs.k0 * eps, 2 * coeffs.t0 * eps, 2 * coeffs.k2 * eps ** 2,
                    s2 * coeffs.t1 * eps, 2 * coeffs.t2 * eps ** 2, coeffs.k1 * eps)
