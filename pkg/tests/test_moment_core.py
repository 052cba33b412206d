import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradslip.moment_core import (ordered_indices, build_basis, build_system,
                                  assemble_transport, moments_to_macro)


def test_rule_engine_order_M1():
    assert ordered_indices(1) == [(0, 0, 0), (1, 0, 0), (0, 0, 1), (0, 1, 0)]


def test_basis_counts_M3():
    b = build_basis(3)
    assert b.N == 20 and b.m + b.n == 20
    assert b.m == sum(a[1] % 2 == 0 for a in b.indices)


def test_low_order_rejected():
    with pytest.raises(ValueError):
        build_basis(2)


@pytest.mark.parametrize("M", [3, 4, 7])
def test_parity_rule(M):
    b = build_basis(M)
    k = b.index((0, 1, 0))
    assert all(k > b.index(a) for a in b.indices if a[1] % 2 == 0)


@pytest.mark.parametrize("M", [3, 6, 9])
def test_dimension_formula(M):
    assert build_basis(M).N == math.comb(M + 3, 3)


def test_transport_entries():
    s = build_system(4)
    b = s.basis
    assert s.A2[b.index((0, 0, 0)), b.index((0, 1, 0))] == 1.0
    assert s.A2[b.index((0, 1, 0)), b.index((0, 2, 0))] == pytest.approx(math.sqrt(2), abs=1e-15)


@pytest.mark.parametrize("M", range(3, 10))
def test_transport_symmetric_and_signature(M):
    s = build_system(M)
    for d in (1, 2, 3):
        A = assemble_transport(s.basis, d)
        assert np.array_equal(A, A.T)
    lam = np.linalg.eigvalsh(s.A2)
    pos = np.sort(lam[lam > 1e-10])
    neg = np.sort(-lam[lam < -1e-10])
    assert pos.size == neg.size == s.basis.n
    assert np.allclose(pos, neg, atol=1e-10)
    assert np.sum(np.abs(lam) <= 1e-10) == s.basis.m - s.basis.n


def test_transport_axis_validated():
    with pytest.raises(ValueError):
        assemble_transport(build_basis(3), 4)


@pytest.mark.parametrize("M", range(3, 10))
def test_bgk_collision_structure(M):
    s = build_system(M)
    Q = s.Q
    assert np.array_equal(Q, Q.T)
    w = np.linalg.eigvalsh(Q)
    assert w.min() > -1e-12
    assert np.sum(np.abs(w) < 1e-10) == 5
    assert np.abs(Q @ s.G).max() <= 1e-14
    assert np.abs(s.G @ s.G.T + s.H @ s.H.T - np.eye(s.N)).max() <= 1e-12
    assert np.allclose(s.K, np.eye(s.N - 5), atol=1e-12)


def test_phi4_in_null_space():
    s = build_system(5)
    b = s.basis
    phi4 = np.zeros(s.N)
    for d in range(3):
        e = [0, 0, 0]
        e[d] = 2
        phi4[b.index(tuple(e))] = math.sqrt(2) / math.sqrt(6)
    assert np.abs(s.Q @ phi4).max() < 1e-14


def test_collision_restricted_to_chain():
    # the chain e1 + k e2, k = 0..M, lives in the basis of order M + 1
    s = build_system(8)
    idx = [s.basis.index((1, k, 0)) for k in range(8)]
    assert np.allclose(s.Q[np.ix_(idx, idx)], np.diag([0.0] + [1.0] * 7), atol=1e-14)


def test_injected_collision_matrix_checked():
    s = build_system(3)
    s2 = build_system(3, collision=2 * s.Q)
    assert np.allclose(s2.K, 2 * np.eye(s.N - 5))
    bad = s.Q.copy()
    bad[0, 1] += 1.0
    with pytest.raises(ValueError):
        build_system(3, collision=bad)


def test_macro_unit_density():
    b = build_basis(3)
    W = np.zeros(b.N)
    W[b.index((0, 0, 0))] = 1.0
    ms = moments_to_macro(W, b)
    assert ms.rho == 1.0 and ms.theta == 0.0
    assert not ms.u.any() and not ms.sigma.any() and not ms.q.any()


def test_macro_temperature():
    b = build_basis(3)
    W = np.zeros(b.N)
    for a in ((2, 0, 0), (0, 2, 0), (0, 0, 2)):
        W[b.index(a)] = math.sqrt(2) / 2
    ms = moments_to_macro(W, b)
    assert ms.theta == pytest.approx(1.0, abs=1e-15)
    assert np.abs(ms.sigma).max() < 1e-15


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=20, max_size=20))
def test_stress_traceless(vals):
    b = build_basis(3)
    ms = moments_to_macro(np.array(vals), b)
    assert abs(np.trace(ms.sigma)) <= 1e-12 * (1 + np.abs(vals).max())
    assert np.allclose(ms.sigma, ms.sigma.T)


def test_macro_shape_checked():
    with pytest.raises(ValueError):
        moments_to_macro(np.zeros(3), build_basis(3))
