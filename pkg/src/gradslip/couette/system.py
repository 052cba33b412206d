"""Decoupled shear-flow (Couette) chain of the moment system.

Only the moments w_k = w_{e1 + k e2}, k = 0..M, survive for a plate moving in
x1 with no x1/x3 dependence.  States are ordered (u, w2, w4, ..., w_{M-1},
sigma, w3, ..., w_M), i.e. even k first.
"""

from dataclasses import dataclass
import math

import numpy as np

from ..moment_core import build_basis, assemble_transport, assemble_collision_bgk
from ..boundary_ops import assemble_S, chi_hat


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CouetteSystem:
    M: int
    chi: float
    chi_hat: float
    Ac: np.ndarray
    Mc: np.ndarray
    Qc: np.ndarray
    Sc: np.ndarray
    Bc: np.ndarray

    @property
    def size(self):
        return self.M + 1

    @property
    def half(self):
        return (self.M + 1) // 2

    @property
    def g(self):
        """g-check = (sqrt 2, 0, ..., 0), the coupling of sigma to w2."""
        v = np.zeros(self.half - 1)
        v[0] = math.sqrt(2)
        return v

    def wall_data(self, uw):
        """b_c with B_c W = b_c for wall speed uw (scalar or array of times)."""
        uw = np.asarray(uw, float)
        return self.chi_hat * np.multiply.outer(self.Sc[:, 0], uw)

    def chain_order(self):
        return [2 * i for i in range(self.half)] + [2 * i + 1 for i in range(self.half)]


def build_couette(M, chi=1.0):
    if int(M) != M or M < 3 or M % 2 == 0:
        raise ValueError("Couette chain needs an odd order M >= 3 (even M gives a characteristic boundary)")
    if not 0.0 < chi <= 1.0:
        raise ValueError("accommodation coefficient must lie in (0, 1]")
    M = int(M)
    # order M+1 so that the whole chain e1 + k e2, k <= M, is present
    basis = build_basis(M + 1)
    chain = [basis.index((1, k, 0)) for k in range(M + 1)]
    sel = [chain[k] for k in range(0, M + 1, 2)] + [chain[k] for k in range(1, M + 1, 2)]
    A2 = assemble_transport(basis, 2)
    Q = assemble_collision_bgk(basis)[0]
    Ac = A2[np.ix_(sel, sel)]
    half = (M + 1) // 2
    Mc = Ac[:half, half:]
    Qc = Q[np.ix_(sel, sel)]
    even = [basis.even.index((1, k, 0)) for k in range(0, M + 1, 2)]
    Sc = assemble_S(basis)[np.ix_(even, even)]
    ch = chi_hat(chi)
    Bc = np.hstack([ch * Sc, Mc])
    return CouetteSystem(M, float(chi), ch, *(_frozen(a) for a in (Ac, Mc, Qc, Sc, Bc)))


@dataclass(frozen=True)
class KnudsenBasis:
    """Block eigenbasis of the Knudsen matrix A-check = [[0, M-check], [M-check^T, 0]].

    R = [[Re, Re], [Ro, -Ro]] is orthogonal and A-check R = R diag(lam, -lam).
    """
    Re: np.ndarray
    Ro: np.ndarray
    lam: np.ndarray

    @property
    def R(self):
        return np.block([[self.Re, self.Re], [self.Ro, -self.Ro]])


def couette_knudsen_basis(system):
    Mchk = system.Mc[1:, 1:]
    U, sv, Vt = np.linalg.svd(Mchk)
    V = Vt.T
    for k in range(sv.size):
        j = np.argmax(np.abs(U[:, k]))
        if U[j, k] < 0:
            U[:, k] *= -1
            V[:, k] *= -1
    if sv.min() <= 0:
        raise np.linalg.LinAlgError("Knudsen matrix is singular")
    r = 1 / math.sqrt(2)
    return KnudsenBasis(_frozen(U * r), _frozen(V * r), _frozen(sv))


def slip_matrix(system, kb=None):
    """H_M, whose inverse maps boundary forcing to (u(0), w_-)."""
    if kb is None:
        kb = couette_knudsen_basis(system)
    h = system.half
    T = np.zeros((h, h))
    T[0, 0] = 1.0
    T[0, 1:] = -system.g @ kb.Re
    T[1:, 1:] = kb.Re
    HM = system.chi_hat * system.Sc @ T
    HM[1:, 1:] += system.Mc[1:, 1:] @ kb.Ro
    return HM


def couette_slip_constants(system, kb=None):
    """Slip constants (K_M, J_M) of the Couette chain."""
    HM = slip_matrix(system, kb)
    if np.linalg.cond(HM) > 1e12:
        raise np.linalg.LinAlgError("H_M is numerically singular")
    one_g = np.concatenate([[1.0], system.g])
    zero_g = np.concatenate([[0.0], system.g])
    K = np.linalg.solve(HM, one_g)[0]
    J = -np.linalg.solve(HM, system.chi_hat * system.Sc @ zero_g)[0]
    return float(K), float(J)
