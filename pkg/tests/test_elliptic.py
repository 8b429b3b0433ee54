"""Elliptic integrals and Jacobi functions against mpmath quadrature oracles."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from etoc import elliptic as ell

mp.mp.dps = 30
M_GRID = [0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99]
TOL_INT = 1e-11
TOL_FN = 1e-11


def quad_k(m):
    return float(mp.quad(lambda t: 1 / mp.sqrt(1 - m * mp.sin(t) ** 2), [0, mp.pi / 2]))


def quad_e(phi, m):
    # subintervals keep the quadrature accurate over several periods
    nodes = mp.linspace(0, phi, max(2, int(abs(phi))) + 1)
    return float(mp.quad(lambda t: mp.sqrt(1 - m * mp.sin(t) ** 2), nodes))


def quad_f(phi, m):
    # break at the peaks sin^2 = 1 of the integrand
    step = math.copysign(math.pi / 2, phi)
    nodes = [k * step for k in range(int(abs(phi) / (math.pi / 2)) + 1)] + [phi]
    return float(mp.quad(lambda t: 1 / mp.sqrt(1 - m * mp.sin(t) ** 2), nodes))


def quad_eps(u, m):
    # Jacobi epsilon as the integral of dn^2
    n = max(2, int(abs(u) / 0.5))
    nodes = mp.linspace(0, u, n + 1)
    return float(mp.quad(lambda s: mp.ellipfun("dn", s, m=m) ** 2, nodes))


@pytest.mark.parametrize("m", M_GRID)
def test_complete_integrals_match_quadrature(m):
    assert abs(ell.ellip_k(m) - quad_k(m)) < TOL_INT
    assert abs(ell.ellip_e_complete(m) - quad_e(math.pi / 2, m)) < TOL_INT


@pytest.mark.parametrize("m", M_GRID)
@pytest.mark.parametrize("phi", [-5.0, -1.3, 0.2, 0.9, 1.5, 2.4, 4.0, 7.5])
def test_incomplete_e_matches_quadrature(m, phi):
    assert abs(ell.ellip_e_incomplete(phi, m) - quad_e(phi, m)) < TOL_INT


@pytest.mark.parametrize("m", M_GRID)
def test_jacobi_matches_mpmath(m):
    k = ell.ellip_k(m)
    u = np.linspace(-3 * k, 3 * k, 37)
    sn, cn, dn, am, _ = ell.jacobi(u, m)
    for i, ui in enumerate(u):
        assert abs(sn[i] - float(mp.ellipfun("sn", ui, m=m))) < TOL_FN
        assert abs(cn[i] - float(mp.ellipfun("cn", ui, m=m))) < TOL_FN
        assert abs(dn[i] - float(mp.ellipfun("dn", ui, m=m))) < TOL_FN


@pytest.mark.parametrize("m", M_GRID)
def test_amplitude_inverts_first_kind_integral(m):
    # F(am(u), m) = u, evaluated by quadrature
    k = ell.ellip_k(m)
    for u in (-2.5 * k, -0.4 * k, 0.3 * k, 1.0 * k, 2.7 * k):
        am = ell.jacobi(u, m).am
        assert abs(quad_f(am, m) - u) < TOL_FN


@pytest.mark.parametrize("m", M_GRID)
def test_jacobi_epsilon_matches_integral_of_dn_squared(m):
    k = ell.ellip_k(m)
    for u in np.linspace(-3 * k, 3 * k, 9):
        assert abs(ell.jacobi_epsilon(u, m) - quad_eps(u, m)) < TOL_INT


def test_trigonometric_limit():
    u = np.linspace(-7.0, 7.0, 29)
    sn, cn, dn, am, _ = ell.jacobi(u, 0.0)
    np.testing.assert_allclose(sn, np.sin(u), atol=1e-10)
    np.testing.assert_allclose(cn, np.cos(u), atol=1e-10)
    np.testing.assert_allclose(dn, 1.0, atol=1e-10)
    np.testing.assert_allclose(am, u, atol=1e-10)
    np.testing.assert_allclose(ell.jacobi_epsilon(u, 0.0), u, atol=1e-10)
    assert abs(ell.ellip_k(0.0) - math.pi / 2) < 1e-10
    assert abs(ell.ellip_e_complete(0.0) - math.pi / 2) < 1e-10


def test_hyperbolic_limit():
    u = np.linspace(-5.0, 5.0, 21)
    trip = ell.jacobi(u, 1.0)
    assert trip.hyperbolic
    np.testing.assert_allclose(trip.sn, np.tanh(u), atol=1e-10)
    np.testing.assert_allclose(trip.cn, 1 / np.cosh(u), atol=1e-10)
    np.testing.assert_allclose(trip.dn, 1 / np.cosh(u), atol=1e-10)
    with pytest.raises(ell.DomainError):
        ell.jacobi_epsilon(0.5, 1.0)
    assert abs(ell.ellip_e_complete(1.0) - 1.0) < 1e-10
    with pytest.raises(ell.DomainError):
        ell.ellip_k(1.0)


def test_near_one_is_clamped_to_hyperbolic():
    trip = ell.jacobi(0.8, 1.0 - 1e-13)
    assert trip.hyperbolic
    assert trip.sn == pytest.approx(math.tanh(0.8), abs=1e-12)
    assert not ell.jacobi(0.8, 0.999999).hyperbolic


def test_reference_values():
    assert ell.ellip_k(0.5) == pytest.approx(1.854075, abs=1e-6)
    assert ell.ellip_k(0.99) > ell.ellip_k(0.5)
    assert ell.ellip_e_complete(0.5) == pytest.approx(1.350644, abs=1e-6)
    assert ell.ellip_e_incomplete(0.0, 0.5) == 0.0
    assert ell.ellip_e_incomplete(math.pi / 2, 0.5) == pytest.approx(1.350644, abs=1e-6)
    assert ell.ellip_e_incomplete(math.pi, 0.5) == pytest.approx(2.701288, abs=1e-6)


def test_quarter_period_values():
    assert tuple(ell.jacobi(0.0, 0.7)[:4]) == (0.0, 1.0, 1.0, 0.0)
    k = ell.ellip_k(0.5)
    sn, cn, dn, am, _ = ell.jacobi(k, 0.5)
    assert sn == pytest.approx(1.0, abs=1e-14)
    assert cn == pytest.approx(0.0, abs=1e-14)
    assert dn == pytest.approx(math.sqrt(0.5), abs=1e-14)
    assert am == pytest.approx(math.pi / 2, abs=1e-14)
    # half-argument identity sn(K/2) = 1 / sqrt(1 + sqrt(1 - m))
    assert ell.jacobi(k / 2, 0.5).sn == pytest.approx(1 / math.sqrt(1 + math.sqrt(0.5)), abs=1e-14)
    assert ell.jacobi(0.927037, 0.5).sn == pytest.approx(0.765367, abs=1e-6)


def test_epsilon_reference_values():
    k = ell.ellip_k(0.5)
    assert ell.jacobi_epsilon(0.0, 0.5) == 0.0
    assert ell.jacobi_epsilon(k, 0.5) == pytest.approx(1.350644, abs=1e-6)
    assert ell.jacobi_epsilon(2 * k, 0.5) == pytest.approx(2.701288, abs=1e-6)


@pytest.mark.parametrize("m", [0.1, 0.5, 0.9])
def test_epsilon_derivative_is_dn_squared(m):
    h = 1e-5
    u = np.linspace(-6.0, 6.0, 49)
    d = (ell.jacobi_epsilon(u + h, m) - ell.jacobi_epsilon(u - h, m)) / (2 * h)
    np.testing.assert_allclose(d, ell.jacobi(u, m).dn ** 2, atol=1e-7)


@pytest.mark.parametrize("m", [0.2, 0.8])
def test_full_periods(m):
    k = ell.ellip_k(m)
    u = np.linspace(-5.0, 5.0, 21)
    a, b = ell.jacobi(u, m), ell.jacobi(u + 4 * k, m)
    np.testing.assert_allclose(b.sn, a.sn, atol=1e-10)
    np.testing.assert_allclose(b.cn, a.cn, atol=1e-10)
    np.testing.assert_allclose(ell.jacobi(u + 2 * k, m).dn, a.dn, atol=1e-10)
    np.testing.assert_allclose(np.sin(a.am), a.sn, atol=1e-12)
    np.testing.assert_allclose(np.cos(a.am), a.cn, atol=1e-12)


def test_sn_solves_its_defining_ode():
    # (sn')^2 = (1 - sn^2)(1 - m sn^2) and sn' = cn dn, checked by central differences
    m, h = 0.5, 1e-5
    u = np.linspace(-4.0, 4.0, 41)
    d = (ell.jacobi(u + h, m).sn - ell.jacobi(u - h, m).sn) / (2 * h)
    sn, cn, dn, _, _ = ell.jacobi(u, m)
    np.testing.assert_allclose(d, cn * dn, atol=1e-9)


def test_carlson_matches_scipy():
    from scipy.special import elliprd, elliprf
    pts = [(0.5, 1.0, 1.5), (0.2, 0.3, 0.4), (10.0, 12.5, 1.1), (1e-3, 2e-3, 3e-3), (0.0, 0.75, 1.1)]
    for x, y, z in pts:
        assert ell.carlson_rf(x, y, z) == pytest.approx(elliprf(x, y, z), rel=1e-13)
        assert ell.carlson_rd(x, y, z) == pytest.approx(elliprd(x, y, z), rel=1e-13)


@pytest.mark.parametrize("bad", [-0.1, 1.5, math.nan])
def test_parameter_domain(bad):
    with pytest.raises(ell.DomainError):
        ell.jacobi(0.3, bad)
    with pytest.raises(ell.DomainError):
        ell.ellip_k(bad)


ms = st.floats(0.0, 0.999, allow_nan=False)
us = st.floats(-50.0, 50.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(u=us, m=ms)
def test_pythagorean_identities(u, m):
    sn, cn, dn, _, _ = ell.jacobi(u, m)
    assert abs(sn * sn + cn * cn - 1) < 1e-13
    assert abs(dn * dn + m * sn * sn - 1) < 1e-13


@settings(max_examples=150, deadline=None)
@given(u=st.floats(-10.0, 10.0), m=st.floats(0.0, 0.99))
def test_periods_and_quasi_periodicity(u, m):
    k, e = ell.ellip_k(m), ell.ellip_e_complete(m)
    a, b = ell.jacobi(u, m), ell.jacobi(u + 2 * k, m)
    assert abs(b.sn + a.sn) < 1e-12
    assert abs(b.cn + a.cn) < 1e-12
    assert abs(b.dn - a.dn) < 1e-12
    assert abs(b.am - a.am - math.pi) < 1e-11
    assert abs(ell.jacobi_epsilon(u + 2 * k, m) - ell.jacobi_epsilon(u, m) - 2 * e) < 1e-11


@settings(max_examples=100, deadline=None)
@given(u=st.floats(-10.0, 10.0), m=st.floats(0.0, 0.99))
def test_oddness(u, m):
    a, b = ell.jacobi(u, m), ell.jacobi(-u, m)
    assert abs(a.sn + b.sn) < 1e-14
    assert abs(a.cn - b.cn) < 1e-14
    assert abs(a.am + b.am) < 1e-14
    assert abs(ell.jacobi_epsilon(u, m) + ell.jacobi_epsilon(-u, m)) < 1e-13


@settings(max_examples=50, deadline=None)
@given(m=st.floats(0.0, 0.99))
def test_amplitude_is_continuous_and_increasing(m):
    k = ell.ellip_k(m)
    am = ell.jacobi(np.linspace(-6 * k, 6 * k, 2001), m).am
    assert np.all(np.diff(am) > 0)
    assert np.max(np.diff(am)) < 0.1


@settings(max_examples=60, deadline=None)
@given(phi=st.floats(-8.0, 8.0), m=st.floats(0.0, 1.0))
def test_incomplete_e_is_odd_and_quasi_periodic(phi, m):
    e = ell.ellip_e_incomplete(phi, m)
    assert abs(e + ell.ellip_e_incomplete(-phi, m)) < 1e-13
    shifted = ell.ellip_e_incomplete(phi + math.pi, m)
    assert abs(shifted - e - 2 * ell.ellip_e_complete(m)) < 1e-12
