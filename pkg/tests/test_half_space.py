import functools
import math
import os

import numpy as np
import pytest
from scipy import linalg as sla

from gradslip.moment_core import build_system
from gradslip.boundary_ops import build_bc
from gradslip.half_space import (generalized_eigen, solve_half_space, solve_elemental,
                                 elemental_drivers, slip_coefficients, gamma_coefficients,
                                 reference_coefficients, ns_slip_bc, REFERENCE_BGK,
                                 HARD_SPHERE_GAMMA)
from conftest import system
from reference_tables import EVEN_M, ODD_M, CONVERGED


@functools.lru_cache(maxsize=None)
def coeffs(M, chi=1.0):
    return slip_coefficients(M, chi)


@pytest.mark.parametrize("M", [3, 4, 5, 6])
def test_pencil_vs_qz(M):
    s = system(M)
    sp = generalized_eigen(s.A2, s.Q, s.G, s.H)
    a, b = sla.eigvals(s.A2, s.Q, homogeneous_eigvals=True)
    inf = np.abs(b) < 1e-10 * np.abs(a)
    assert sp.n_infinite == inf.sum()
    assert np.allclose(np.sort(sp.values), np.sort((a[~inf] / b[~inf]).real), atol=1e-12)
    # each null direction of Q either pairs off through G^T A2 G or starts a chain of two
    r = np.linalg.matrix_rank(s.G.T @ s.A2 @ s.G)
    assert sp.n_infinite == 2 * s.G.shape[1] - r
    assert sp.values.size + sp.n_infinite == s.N
    assert sp.count("positive") == sp.count("negative") == s.basis.n - 4
    assert sp.count("zero") == s.basis.m - s.basis.n


def test_pencil_eigenpairs():
    s = system(5)
    sp = generalized_eigen(s.A2, s.Q, s.G, s.H)
    X, lam = sp.vectors, sp.values
    assert np.abs(s.A2 @ X - (s.Q @ X) * lam).max() < 1e-12


def test_pencil_scaling():
    s = system(4)
    a = generalized_eigen(s.A2, s.Q, s.G, s.H)
    b = generalized_eigen(s.A2, 2 * s.Q, s.G, s.H)
    assert np.array_equal(a.classes, b.classes)
    assert np.allclose(b.values, a.values / 2, atol=1e-14)


def test_pencil_deterministic():
    s = system(6)
    a = generalized_eigen(s.A2, s.Q, s.G, s.H)
    b = generalized_eigen(s.A2, s.Q, s.G, s.H)
    assert np.array_equal(a.values, b.values) and np.array_equal(a.vectors, b.vectors)


def test_zero_data_gives_zero_layer():
    s = system(4)
    layer = solve_half_space(s, build_bc(s, 1.0), np.zeros(s.N - 5))
    assert not layer.coeffs.any() and not layer.ge_h.any()
    assert not layer(np.linspace(0, 3, 5)).any()


def test_layer_solves_ode_and_decays():
    s = system(5)
    bc = build_bc(s, 1.0)
    h = np.random.default_rng(0).standard_normal(s.N - 5)
    layer = solve_half_space(s, bc, h)
    z = np.array([0.0, 0.3, 2.0])
    assert np.abs(s.A2 @ layer.derivative(z) + s.Q @ layer(z)).max() < 1e-11
    assert np.abs(layer(np.array([60.0]))).max() < 1e-8
    W0 = layer(np.array([0.0]))[:, 0]
    assert np.abs(bc.B @ (W0 - s.H @ h - s.Ge @ layer.ge_h)).max() < 1e-11


def test_linearity_in_driver():
    s = system(6)
    bc = build_bc(s, 1.0)
    d = elemental_drivers(s)[0].A_vec
    g1, _ = solve_elemental(s, bc, d)
    g3, _ = solve_elemental(s, bc, 3 * d)
    assert np.allclose(g3, 3 * g1, rtol=1e-13, atol=1e-15)


def test_wrong_length_rejected():
    s = system(3)
    with pytest.raises(ValueError):
        solve_half_space(s, build_bc(s, 1.0), np.zeros(4))


@pytest.mark.parametrize("M", sorted(EVEN_M))
def test_table_even(M):
    c = coeffs(M)
    for name, ref in zip(("k0", "t0", "k2"), EVEN_M[M]):
        assert getattr(c, name) == pytest.approx(ref, abs=2e-5)


@pytest.mark.parametrize("M", sorted(ODD_M))
def test_table_odd(M):
    c = coeffs(M)
    for name, ref in zip(("k1", "t1", "t2"), ODD_M[M]):
        if ref is not None:
            assert getattr(c, name) == pytest.approx(ref, abs=2e-5)


def test_M12_within_one_percent():
    assert abs(coeffs(12).k0 / REFERENCE_BGK["k0"] - 1) < 0.01


@pytest.mark.parametrize("names,Ms", [(("k0", "t0", "k2"), sorted(EVEN_M)),
                                      (("k1", "t1", "t2"), sorted(ODD_M))])
def test_monotone_toward_converged(names, Ms):
    for name in names:
        gaps = [abs(getattr(coeffs(M), name) - CONVERGED[name]) for M in Ms]
        assert all(a >= b for a, b in zip(gaps, gaps[1:])), (name, gaps)


@pytest.mark.parametrize("M", [5, 7, 9])
@pytest.mark.parametrize("chi", [0.25, 0.5, 1.0])
def test_positive_slip_and_jump(M, chi):
    c = coeffs(M, chi)
    assert c.k0 > 0 and c.t1 > 0


def test_coefficients_reproducible():
    assert slip_coefficients(7) == slip_coefficients(7)


@pytest.mark.parametrize("M", range(3, 10))
def test_bgk_gammas(M):
    g = gamma_coefficients(system(M))
    assert np.allclose(g, 1.0, atol=1e-10, rtol=0)


def test_gamma_scaling_with_Q():
    s = build_system(4, collision=2 * system(4).Q)
    g1, g2, _ = gamma_coefficients(s)
    assert g1 == pytest.approx(0.5, abs=1e-13) and g2 == pytest.approx(0.5, abs=1e-13)


HS_FILE = os.environ.get("GRADSLIP_HARD_SPHERE_Q")


@pytest.mark.skipif(not HS_FILE, reason="set GRADSLIP_HARD_SPHERE_Q to a .npy collision matrix")
def test_hard_sphere_gammas():
    Q = np.load(HS_FILE)
    M = next(M for M in range(3, 40) if math.comb(M + 3, 3) == Q.shape[0])
    g1, g2, _ = gamma_coefficients(build_system(M, collision=Q))
    assert g1 == pytest.approx(HARD_SPHERE_GAMMA["gamma1"], rel=1e-3)
    assert g2 == pytest.approx(HARD_SPHERE_GAMMA["gamma2"], rel=1e-3)


def test_kramers_problem_check():
    bc = ns_slip_bc(reference_coefficients(), math.sqrt(2 / math.pi))
    assert bc.velocity_slip == pytest.approx(1.146, abs=2e-3)
    assert bc.second_order_slip == pytest.approx(-0.976, abs=2e-3)


def test_degenerate_slip_bcs():
    c = reference_coefficients()
    first = ns_slip_bc(c.__class__(**{**c.as_dict(), "k2": 0.0}), 0.1)
    assert first.second_order_slip == 0.0 and first.velocity_slip > 0
    zero = ns_slip_bc(c.__class__(0, 0, 0, 0, 0, 0), 0.1)
    assert zero.is_no_slip
    with pytest.raises(ValueError):
        ns_slip_bc(c, 0.0)
