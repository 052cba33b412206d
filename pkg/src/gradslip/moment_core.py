"""Hermite multi-index bookkeeping and the linear Grad moment system.

Moments w_alpha are indexed by alpha in N^3 with |alpha| <= M.  Indices with
even alpha_2 come first, then odd alpha_2; inside each parity block the order
is by |alpha| and then anti-lexicographic.  All positions are 0-based.
"""

from dataclasses import dataclass, field
import itertools
import math
from typing import Callable, Optional, Union

import numpy as np


def _frozen(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def ordered_indices(M):
    """All alpha with |alpha| <= M in the moment ordering (any M >= 0)."""
    idx = [a for a in itertools.product(range(M + 1), repeat=3) if sum(a) <= M]
    idx.sort(key=lambda a: (a[1] % 2, sum(a), tuple(-x for x in a)))
    return idx


@dataclass(frozen=True)
class MomentBasis:
    M: int
    indices: tuple
    m: int
    n: int
    _pos: dict = field(repr=False, compare=False)

    @property
    def N(self):
        return len(self.indices)

    def index(self, alpha):
        """Position of the multi-index alpha (KeyError if |alpha| > M)."""
        return self._pos[tuple(int(a) for a in alpha)]

    def __contains__(self, alpha):
        return tuple(alpha) in self._pos

    def alpha(self, k):
        return self.indices[k]

    @property
    def even(self):
        return self.indices[:self.m]

    @property
    def odd(self):
        return self.indices[self.m:]


def build_basis(M):
    if int(M) != M or M < 3:
        raise ValueError("moment order M must be an integer >= 3, got %r" % (M,))
    return _make_basis(int(M))


def _make_basis(M):
    idx = tuple(ordered_indices(M))
    m = sum(1 for a in idx if a[1] % 2 == 0)
    return MomentBasis(M, idx, m, len(idx) - m, {a: k for k, a in enumerate(idx)})


def unit(d):
    e = [0, 0, 0]
    e[d] = 1
    return tuple(e)


def shift(alpha, d, k=1):
    a = list(alpha)
    a[d] += k
    return tuple(a)


def assemble_transport(basis, d):
    """A_d for axis d in {1, 2, 3}: A_d[alpha, alpha+e_d] = sqrt(alpha_d + 1)."""
    if d not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    d -= 1
    A = np.zeros((basis.N, basis.N))
    for i, a in enumerate(basis.indices):
        b = shift(a, d)
        if b in basis:
            j = basis.index(b)
            A[i, j] = A[j, i] = math.sqrt(a[d] + 1)
    return A


def equilibrium_basis(basis):
    """G = [phi0, phi1, phi2, phi3, phi4], the null space of the collision term."""
    G = np.zeros((basis.N, 5))
    G[basis.index((0, 0, 0)), 0] = 1.0
    for d in range(3):
        G[basis.index(unit(d)), 1 + d] = 1.0
        G[basis.index(shift((0, 0, 0), d, 2)), 4] = math.sqrt(3) / 3
    return G


# columns of H skipped because they are spanned by G (2e1 is replaced by the
# two mixed columns placed at 2e2 and 2e3)
_H_SKIP = {(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (2, 0, 0)}


def complement_basis(basis):
    """Orthonormal complement H of G and the multi-index labelling each column."""
    labels = [a for a in basis.indices if a not in _H_SKIP]
    H = np.zeros((basis.N, len(labels)))
    s3 = math.sqrt(3)
    i1, i2, i3 = (basis.index(shift((0, 0, 0), d, 2)) for d in range(3))
    for c, b in enumerate(labels):
        if b == (0, 2, 0):
            H[[i1, i2, i3], c] = s3 / 3, (-3 - s3) / 6, (3 - s3) / 6
        elif b == (0, 0, 2):
            H[[i1, i2, i3], c] = s3 / 3, (3 - s3) / 6, (-3 - s3) / 6
        else:
            H[basis.index(b), c] = 1.0
    return H, tuple(labels)


def assemble_collision_bgk(basis):
    """BGK collision matrix Q = I - G G^T with the bases (Q, G, H, Ge)."""
    G = equilibrium_basis(basis)
    H, _ = complement_basis(basis)
    Q = np.eye(basis.N) - G @ G.T
    return Q, G, H, G[:, [0, 1, 3, 4]]


@dataclass(frozen=True)
class MomentSystem:
    basis: MomentBasis
    A1: np.ndarray
    A2: np.ndarray
    A3: np.ndarray
    Q: np.ndarray
    G: np.ndarray
    H: np.ndarray
    Ge: np.ndarray
    h_labels: tuple
    model: str = "bgk"

    @property
    def N(self):
        return self.basis.N

    @property
    def Mo(self):
        m = self.basis.m
        return self.A2[:m, m:]

    @property
    def K(self):
        """H^T Q H, the collision operator restricted to non-equilibrium moments."""
        return self.H.T @ self.Q @ self.H

    def h_index(self, alpha):
        """Column of H labelled by alpha."""
        return self.h_labels.index(tuple(alpha))


CollisionSource = Union[str, np.ndarray, Callable[[MomentBasis], np.ndarray]]


def build_system(M, collision: CollisionSource = "bgk", tol=1e-10):
    """Assemble A_1..A_3, Q and the null-space bases for order M.

    `collision` is "bgk", an N x N matrix, or a callable basis -> Q.  An
    injected Q must be symmetric PSD and annihilate span(G).
    """
    basis = build_basis(M)
    A = [assemble_transport(basis, d) for d in (1, 2, 3)]
    Qb, G, H, Ge = assemble_collision_bgk(basis)
    _, labels = complement_basis(basis)
    if isinstance(collision, str):
        if collision != "bgk":
            raise ValueError("unknown collision model %r" % collision)
        Q, model = Qb, "bgk"
    else:
        Q = collision(basis) if callable(collision) else np.asarray(collision, float)
        model = "external"
        if Q.shape != (basis.N, basis.N):
            raise ValueError("collision matrix must be %d x %d" % (basis.N, basis.N))
        scale = max(1.0, np.abs(Q).max())
        if np.abs(Q - Q.T).max() > tol * scale:
            raise ValueError("collision matrix is not symmetric")
        if np.abs(Q @ G).max() > tol * scale:
            raise ValueError("collision matrix does not annihilate the equilibrium moments")
        if np.linalg.eigvalsh(H.T @ Q @ H).min() <= 0:
            raise ValueError("collision matrix is not positive definite off equilibrium")
    return MomentSystem(basis, *(_frozen(a) for a in A), _frozen(Q), _frozen(G),
                        _frozen(H), _frozen(Ge), labels, model)


@dataclass(frozen=True)
class MacroState:
    rho: float
    u: np.ndarray
    theta: float
    sigma: np.ndarray
    q: np.ndarray


def moments_to_macro(W, basis):
    W = np.asarray(W, dtype=float)
    if W.shape != (basis.N,):
        raise ValueError("moment vector must have length %d" % basis.N)
    w = lambda a: W[basis.index(a)]
    E = [unit(d) for d in range(3)]
    theta = math.sqrt(2) / 3 * sum(w(shift(e, d)) for d, e in enumerate(E))
    sigma = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            a = tuple(x + y for x, y in zip(E[i], E[j]))
            sigma[i, j] = math.sqrt(1 + (i == j)) * w(a) - theta * (i == j)
    q = np.zeros(3)
    for i in range(3):
        for j in range(3):
            a = shift(E[i], j, 2)
            q[i] += 0.5 * math.sqrt(math.prod(math.factorial(k) for k in a)) * w(a)
    return MacroState(w((0, 0, 0)), np.array([w(e) for e in E]), theta, sigma, q)
