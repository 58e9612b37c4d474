import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from bertrand_atoms.errors import DomainError
from bertrand_atoms.specfun import (
    HarmonicIndex, assoc_legendre, assoc_legendre_gegenbauer, assoc_legendre_ode_residual,
    fock_cos_alpha, gauss_legendre, gegenbauer, gegenbauer_addition_check,
    gegenbauer_norm_closed_form, gegenbauer_norm_integral, gegenbauer_ode_residual,
    gegenbauer_ode_residual_exact, hyperspherical_gram, hyperspherical_harmonic,
    hyperspherical_indices, momentum_amplitude, spherical_harmonic,
)

LAMBDAS = (0.5, 1.0, 1.5, 2.5)
GRID = np.linspace(-1, 1, 101)


# --- Gegenbauer ------------------------------------------------------------

def test_gegenbauer_examples():
    assert gegenbauer(0, 1.5, 0.7) == 1.0
    assert gegenbauer(1, 2, 0.3) == pytest.approx(1.2, abs=1e-15)
    assert gegenbauer(2, 1, 0.5) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_gegenbauer_matches_scipy(lam):
    for k in range(21):
        ref = special.eval_gegenbauer(k, lam, GRID)
        assert np.allclose(gegenbauer(k, lam, GRID), ref, rtol=1e-12, atol=1e-12 * np.max(np.abs(ref)))


@pytest.mark.parametrize("bad", [(-1, 1.0, 0.0), (2, -0.5, 0.0), (2, 0.0, 0.0), (2, 1.0, 1.5)])
def test_gegenbauer_domain(bad):
    with pytest.raises(DomainError):
        gegenbauer(*bad)


@given(k=st.integers(0, 20), lam=st.sampled_from(LAMBDAS), x=st.floats(-1, 1))
def test_gegenbauer_parity(k, lam, x):
    a, b = gegenbauer(k, lam, -x), gegenbauer(k, lam, x)
    assert abs(a - (-1) ** k * b) <= 1e-12 * max(1.0, abs(b))


def _fd_relative_residual(k, lam):
    # residual measured against the size of the largest term, k (k + 2 lam) |C|
    res = gegenbauer_ode_residual(k, lam, GRID)
    return np.max(np.abs(res)) / (k * (k + 2 * lam) * np.max(np.abs(gegenbauer(k, lam, GRID))))


@pytest.mark.xfail(strict=True, reason="second-order differences with h=1e-4 have "
                   "truncation error ~h^2 k^4 |C|; at k=20 the relative residual is ~1e-5")
def test_gegenbauer_fd_residual_all_degrees():
    worst = max(_fd_relative_residual(k, lam) for lam in LAMBDAS for k in range(1, 21))
    assert worst <= 1e-6


def test_gegenbauer_fd_residual_low_degree():
    for lam in LAMBDAS:
        for k in range(1, 11):
            assert _fd_relative_residual(k, lam) <= 1e-6, (k, lam)


def test_gegenbauer_fd_residual_is_truncation_error():
    # halving h divides the residual by about four
    x = GRID[5:-5]
    r1 = np.max(np.abs(gegenbauer_ode_residual(20, 2.5, x, h=1e-3)))
    r2 = np.max(np.abs(gegenbauer_ode_residual(20, 2.5, x, h=5e-4)))
    assert 3.5 < r1 / r2 < 4.5


def test_gegenbauer_exact_residual():
    for lam in LAMBDAS:
        for k in range(21):
            scale = max(1.0, np.max(np.abs(gegenbauer(k, lam, GRID)))) * k * (k + 2 * lam) if k else 1.0
            assert np.max(np.abs(gegenbauer_ode_residual_exact(k, lam, GRID))) <= 1e-10 * scale


def test_addition_examples():
    assert gegenbauer_addition_check(0, 1, 1, 0.4) == 0.0
    assert gegenbauer_addition_check(1, 1, 2, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert gegenbauer_addition_check(5, 0.5, 1.5, -0.3) <= 1e-10


@settings(max_examples=50)
@given(n=st.integers(0, 20), a=st.sampled_from(LAMBDAS), b=st.sampled_from(LAMBDAS), x=st.floats(-1, 1))
def test_addition_formula(n, a, b, x):
    scale = max(1.0, abs(gegenbauer(n, a + b, x)))
    assert gegenbauer_addition_check(n, a, b, x) <= 1e-10 * scale


# --- Legendre and spherical harmonics --------------------------------------

def test_assoc_legendre_examples():
    assert assoc_legendre(0, 0, 0.9) == 1.0
    assert assoc_legendre(1, 0, 0.4) == pytest.approx(0.4)
    assert assoc_legendre(2, 1, 0.5) == pytest.approx(3 * 0.5 * math.sqrt(0.75), rel=1e-14)
    assert assoc_legendre(2, 1, 0.5) == pytest.approx(1.29904, abs=1e-5)


def test_assoc_legendre_no_phase():
    # scipy includes (-1)^m; ours does not
    for l in range(8):
        for m in range(l + 1):
            ref = (-1) ** m * special.lpmv(m, l, GRID)
            assert np.allclose(assoc_legendre(l, m, GRID), ref, rtol=1e-10, atol=1e-10)


def test_assoc_legendre_routes_agree():
    for l in range(11):
        for m in range(l + 1):
            a, b = assoc_legendre(l, m, GRID), assoc_legendre_gegenbauer(l, m, GRID)
            assert np.max(np.abs(a - b)) <= 1e-10 * max(1.0, np.max(np.abs(a)))


def test_assoc_legendre_ode():
    x = np.linspace(-0.9, 0.9, 37)
    for l in range(6):
        for m in range(l + 1):
            scale = max(1.0, np.max(np.abs(assoc_legendre(l, m, x)))) * (l * (l + 1) + m * m + 1)
            assert np.max(np.abs(assoc_legendre_ode_residual(l, m, x))) <= 1e-5 * scale


def test_assoc_legendre_domain():
    with pytest.raises(DomainError):
        assoc_legendre(1, 2, 0.0)
    with pytest.raises(DomainError):
        assoc_legendre(2, 1, 1.2)


def test_spherical_harmonic_examples():
    assert spherical_harmonic(0, 0, 0.3, 1.1) == pytest.approx(0.2820948, abs=1e-7)
    assert spherical_harmonic(1, 0, 0.0, 0.0) == pytest.approx(math.sqrt(3 / (4 * math.pi)), rel=1e-14)
    assert abs(spherical_harmonic(1, 0, 0.0, 0.0) - 0.4886025) < 1e-7


def _s2_inner(l1, m1, l2, m2, n=64):
    qt = gauss_legendre(n, 0, math.pi)
    qp = gauss_legendre(n, 0, 2 * math.pi)
    T, P = np.meshgrid(qt.nodes, qp.nodes, indexing="ij")
    w = (qt.weights * np.sin(qt.nodes))[:, None] * qp.weights[None, :]
    return np.sum(np.conj(spherical_harmonic(l1, m1, T, P)) * spherical_harmonic(l2, m2, T, P) * w)


def test_spherical_harmonic_orthonormal():
    assert abs(_s2_inner(1, 0, 1, 1)) <= 1e-10
    for l in range(5):
        for m in range(-l, l + 1):
            assert _s2_inner(l, m, l, m) == pytest.approx(1.0, abs=1e-12)


def test_spherical_harmonic_phase_convention():
    # |Y_lm| agrees with scipy; the sign differs by (-1)^m for m > 0
    th, ph = 0.7, 0.4
    for l in range(4):
        for m in range(0, l + 1):
            ref = special.sph_harm_y(l, m, th, ph)
            assert spherical_harmonic(l, m, th, ph) == pytest.approx((-1) ** m * ref, abs=1e-12)


# --- hyperspherical harmonics ----------------------------------------------

def test_harmonic_index_validation():
    HarmonicIndex(3, 2, -2)
    for bad in [(0, 0, 0), (2, 2, 0), (3, 1, 2)]:
        with pytest.raises(DomainError):
            HarmonicIndex(*bad)


def test_hyperspherical_ground_state():
    val = hyperspherical_harmonic(HarmonicIndex(1, 0, 0), 0.4, 1.0, 2.0)
    assert val == pytest.approx(1 / (math.sqrt(2) * math.pi), rel=1e-14)
    assert abs(val - 0.2250791) < 1e-7
    # |Y_100|^2 times the volume 2 pi^2 of S^3 is one
    assert abs(val) ** 2 * 2 * math.pi**2 == pytest.approx(1.0, rel=1e-14)


def test_hyperspherical_gram():
    idx, G = hyperspherical_gram(4)
    assert len(idx) == sum(n * n for n in range(1, 5))
    assert np.max(np.abs(G - np.eye(len(idx)))) <= 1e-6
    pos = {i: k for k, i in enumerate(idx)}
    assert G[pos[HarmonicIndex(2, 1, 0)], pos[HarmonicIndex(2, 1, 0)]].real == pytest.approx(1.0, abs=1e-8)
    assert abs(G[pos[HarmonicIndex(2, 1, 1)], pos[HarmonicIndex(1, 0, 0)]]) <= 1e-10


def test_indices_order():
    idx = hyperspherical_indices(2)
    assert [(i.n, i.l, i.m) for i in idx] == [(1, 0, 0), (2, 0, 0), (2, 1, -1), (2, 1, 0), (2, 1, 1)]


# --- momentum space ---------------------------------------------------------

def test_fock_map():
    assert fock_cos_alpha(1.0, 1.0) == 0.0
    assert fock_cos_alpha(0.0, 3.0) == 1.0
    with pytest.raises(DomainError):
        fock_cos_alpha(-1.0, 1.0)


def test_momentum_amplitude_decay():
    idx = HarmonicIndex(1, 0)
    big = np.array([1e2, 1e3, 1e4])
    f = momentum_amplitude(idx, big)
    assert np.all(f * big**4 == pytest.approx(f[0] * big[0] ** 4, rel=1e-3))
    assert momentum_amplitude(idx, 1e6) < 1e-20


@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (2, 1), (3, 1), (4, 2), (5, 3)])
def test_momentum_amplitude_normalized(n, l):
    from scipy import integrate
    f = lambda p: momentum_amplitude(HarmonicIndex(n, l), p) ** 2 * p * p
    val, _ = integrate.quad(f, 0, np.inf, limit=400, epsabs=0, epsrel=1e-11)
    assert val == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("n,l", [(1, 0), (2, 1), (3, 0), (3, 2), (4, 1), (5, 2)])
def test_momentum_amplitude_proportional_to_sphere_factor(n, l):
    p = np.linspace(0.01, 3.0, 200) / n
    p0 = 1.0 / n
    lhs = momentum_amplitude(HarmonicIndex(n, l), p) * p0 ** -1 * (p * p + p0 * p0) ** 2 / 4
    ca = fock_cos_alpha(p, n)
    sa = np.sqrt(1 - ca * ca)
    rhs = sa**l * gegenbauer(n - l - 1, l + 1, ca)
    mask = np.abs(rhs) > 1e-3 * np.max(np.abs(rhs))
    ratio = lhs[mask] / rhs[mask]
    c = np.median(ratio)
    assert np.max(np.abs(ratio / c - 1)) <= 1e-8


# --- Gegenbauer normalization ------------------------------------------------

def test_norm_examples():
    assert gegenbauer_norm_integral(0, 1) == pytest.approx(math.pi / 2, rel=1e-12)
    assert gegenbauer_norm_integral(1, 1) == pytest.approx(math.pi / 2, rel=1e-12)
    assert gegenbauer_norm_integral(3, 2.5) == pytest.approx(gegenbauer_norm_closed_form(3, 2.5), rel=1e-8)


def test_norm_sweep():
    for l in range(9):
        for p in (0.5, 1, 1.5, 2, 2.5, 3, 4, 5):
            assert gegenbauer_norm_integral(l, p) == pytest.approx(gegenbauer_norm_closed_form(l, p), rel=1e-8)


def test_quadrature_grid():
    q = gauss_legendre(64, 0, math.pi)
    assert np.sum(q.weights) == pytest.approx(math.pi, abs=1e-12)
    assert np.all(np.diff(q.nodes) > 0) and np.all(q.weights > 0)
    with pytest.raises(DomainError):
        type(q)(nodes=np.array([1.0, 0.0]), weights=np.array([1.0, 1.0]), domain=(0, 1))
