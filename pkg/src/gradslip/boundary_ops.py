"""Wall boundary conditions for the moment system and their certificates.

The wall sits at x2 = 0 with normal n = (0, -1, 0).  Gas-side half-space
integrals of Hermite products reduce to the 1D factors computed here exactly.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
from typing import NamedTuple

import numpy as np
from scipy import linalg as sla


@lru_cache(maxsize=None)
def _hermite_coeffs(k):
    """Integer monomial coefficients of the probabilists' Hermite He_k."""
    prev, cur = (1,), (0, 1)
    if k == 0:
        return prev
    for j in range(1, k):
        nxt = [0] * (j + 2)
        for i, c in enumerate(cur):
            nxt[i + 1] += c
        for i, c in enumerate(prev):
            nxt[i] -= j * c
        prev, cur = cur, tuple(nxt)
    return cur


def _product_moments(i, j, moment):
    a, b = _hermite_coeffs(i), _hermite_coeffs(j)
    s = 0
    for p, ca in enumerate(a):
        for q, cb in enumerate(b):
            if ca and cb:
                s += ca * cb * moment(p + q)
    return s


def half_space_hermite_integral(i, j):
    """<|x| g He_i He_j> over the real line, He orthonormal, g standard Gaussian.

    Uses  int |x| x^(2q) g dx = sqrt(2/pi) 2^q q!  on the exact integer
    expansion, so the only rounding is the final division.
    """
    if i < 0 or j < 0:
        raise ValueError("Hermite degrees must be non-negative")
    if (i + j) % 2:
        return 0.0
    s = _product_moments(i, j, lambda p: 0 if p % 2 else 2 ** (p // 2) * math.factorial(p // 2))
    return math.sqrt(2 / math.pi) * s / math.sqrt(math.factorial(i) * math.factorial(j))


def full_space_hermite_integral(i, j):
    """<x g He_i He_j> over the real line (orthonormal He)."""
    if (i + j + 1) % 2:
        return 0.0
    # int x^p g dx = (p-1)!! for even p
    dfact = lambda p: 0 if p % 2 else math.prod(range(p - 1, 0, -2))
    s = _product_moments(i, j, lambda p: dfact(p + 1))
    return s / math.sqrt(math.factorial(i) * math.factorial(j))


def chi_hat(chi):
    return 2 * chi / ((2 - chi) * math.sqrt(2 * math.pi))


def assemble_S(basis):
    """S over even-alpha_2 indices: (sqrt(2 pi)/2) <|xi_2| M phi_a phi_b>.

    Independent of the accommodation coefficient, which enters B only through
    chi_hat.
    """
    even = basis.even
    S = np.zeros((basis.m, basis.m))
    c = math.sqrt(2 * math.pi) / 2
    for r, a in enumerate(even):
        for s, b in enumerate(even):
            if a[0] == b[0] and a[2] == b[2]:
                S[r, s] = c * half_space_hermite_integral(a[1], b[1])
    return S


def assemble_Mo(basis):
    """M_o = <xi_2 M phi_a phi_b> for a even, b odd in alpha_2."""
    Mo = np.zeros((basis.m, basis.n))
    for r, a in enumerate(basis.even):
        for s, b in enumerate(basis.odd):
            if a[0] == b[0] and a[2] == b[2]:
                Mo[r, s] = full_space_hermite_integral(a[1], b[1])
    return Mo


def assemble_E(basis):
    """Selector with E[alpha, beta] = 1 iff alpha = beta + e_2 (alpha odd, beta even)."""
    E = np.zeros((basis.n, basis.m))
    for r, a in enumerate(basis.odd):
        E[r, basis.index((a[0], a[1] - 1, a[2]))] = 1.0
    return E


@dataclass(frozen=True)
class WallData:
    rho_w: float
    u_w: tuple
    theta_w: float
    b: np.ndarray


def wall_vector(basis, rho_w=0.0, u_w=(0.0, 0.0, 0.0), theta_w=0.0):
    """Inhomogeneity b of the wall condition B (W - b) = 0."""
    u_w = tuple(float(x) for x in u_w)
    if len(u_w) != 3:
        raise ValueError("wall velocity must be a 3-vector")
    if u_w[1] != 0.0:
        raise ValueError("wall-normal velocity must vanish")
    b = np.zeros(basis.N)
    b[basis.index((0, 0, 0))] = rho_w
    for d in range(3):
        e = [0, 0, 0]
        e[d] = 1
        b[basis.index(tuple(e))] = u_w[d]
        e[d] = 2
        b[basis.index(tuple(e))] = theta_w / math.sqrt(2)
    b.setflags(write=False)
    return WallData(float(rho_w), u_w, float(theta_w), b)


@dataclass(frozen=True)
class BoundaryOperator:
    chi: float
    chi_hat: float
    S: np.ndarray
    Mo: np.ndarray
    E: np.ndarray
    B: np.ndarray
    kind: str


def build_bc(system, chi, kind="modified"):
    """Grad (E[chi_hat S, M_o]) or modified ([chi_hat M_o^T, M_o^T S^-1 M_o]) BC."""
    if kind not in ("grad", "modified"):
        raise ValueError("kind must be 'grad' or 'modified'")
    if not 0.0 <= chi <= 1.0:
        raise ValueError("accommodation coefficient must lie in [0, 1]")
    if chi == 0.0 and kind == "modified":
        raise ValueError("chi = 0 (specular wall) is only supported for kind='grad'")
    basis = system.basis
    S = assemble_S(basis)
    Mo = assemble_Mo(basis)
    E = assemble_E(basis)
    ch = chi_hat(chi)
    if kind == "grad":
        B = E @ np.hstack([ch * S, Mo])
    else:
        B = np.hstack([ch * Mo.T, Mo.T @ np.linalg.solve(S, Mo)])
    for a in (S, Mo, E, B):
        a.setflags(write=False)
    return BoundaryOperator(float(chi), ch, S, Mo, E, B, kind)


class PositivityCertificate(NamedTuple):
    dimN: int
    min_quadratic: float
    passed: bool
    basis: np.ndarray
    witness: np.ndarray


def boundary_space(op):
    """Columns spanning {v : B(v - rho_w e_0) = 0 and u_2 = 0 for some rho_w}.

    Parameterized by v_e.  With P = (M_o^T S^-1 M_o)^-1 M_o^T the BC gives
    v_o = -chi_hat P (v_e - rho_w e_0), and rho_w is fixed by the u_2 row of P,
    whose leading entry a11 must not vanish.  Both e_0 and e_2 lead their
    parity blocks, so they sit at position 0 of v_e and v_o.
    """
    if op.kind != "modified":
        raise ValueError("maximal positivity is certified for the modified BC only")
    m, n = op.Mo.shape
    V = np.zeros((m + n, m))
    V[:m] = np.eye(m)
    if op.chi_hat == 0.0:
        return V
    P = np.linalg.solve(op.Mo.T @ np.linalg.solve(op.S, op.Mo), op.Mo.T)
    a11 = P[0, 0]
    if abs(a11) < 1e-12 * np.abs(P).max():
        raise np.linalg.LinAlgError("leading coefficient a11 vanishes; boundary space is ill-defined")
    rho_w = P[0] / a11
    shifted = np.eye(m)
    shifted[0] -= rho_w
    V[m:] = -op.chi_hat * P @ shifted
    return V


def check_maximal_positive(op, A2, tol=1e-10):
    """Certify -v^T A2 v >= 0 on the whole boundary space, which must have dim m."""
    m = op.Mo.shape[0]
    Qb = sla.orth(boundary_space(op))
    F = -Qb.T @ A2 @ Qb
    w, U = np.linalg.eigh(0.5 * (F + F.T))
    return PositivityCertificate(Qb.shape[1], float(w[0]),
                                 bool(Qb.shape[1] == m and w[0] >= -tol), Qb, Qb @ U[:, 0])


def dissipativity_margin(Bc, Ac, c):
    """Smallest eigenvalue of Bc^T Bc - c Ac - c^2 I."""
    n = Ac.shape[0]
    return float(np.linalg.eigvalsh(Bc.T @ Bc - c * Ac - c * c * np.eye(n))[0])


class DissipativityCertificate(NamedTuple):
    c: float
    margin: float
    c_sup: float


def check_strict_dissipativity(Bc, Ac, tol=1e-6):
    """Certify Bc^T Bc - c Ac - c^2 I > 0 for some c in (0, 1].

    Bisection locates the edge c_sup of the admissible range; the returned c
    is half of it so the margin is not at rounding level.
    """
    f = lambda c: dissipativity_margin(Bc, Ac, c)
    if f(1.0) > 0:
        return DissipativityCertificate(1.0, f(1.0), 1.0)
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    c = lo
    if c == 0.0:
        # admissible set may sit below the bisection resolution
        c = tol
        while c > 1e-12 and f(c) <= 0:
            c *= 0.5
        if f(c) <= 0:
            raise ValueError("no c in (0, 1] makes the boundary strictly dissipative")
    half = 0.5 * c
    if f(half) > 0:
        return DissipativityCertificate(half, f(half), c)
    return DissipativityCertificate(c, f(c), c)
