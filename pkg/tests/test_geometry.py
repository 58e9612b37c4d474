import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from bertrand_atoms.errors import DomainError, SingularityError
from bertrand_atoms.geometry import (
    PerlickParams, PluckerLine, antipodal_image, christoffel_trace_check,
    conformal_christoffel_check, conformal_factor_sphere, homogeneous, hopf_map,
    invariant_battery, inversion, inversion_momentum, inversion_phase_jacobian,
    levi_civita, perlick_conformal_factor, perlick_drtilde_dr, perlick_radial_map,
    perlick_radius, plucker_from_points, plucker_incidence, pullback_metric,
    refractive_index, refractive_index_2d, so4_basis, so4_coefficients, so4_commutator,
    so4_commutator_table, stereo_ab, stereo_ab_inverse, stereo_from_sphere,
    stereo_polar_angle, stereo_r3_to_s3, stereo_s3_to_r3, stereo_to_sphere,
    symplectic_defect,
)

finite = st.floats(-50, 50, allow_nan=False)
vec3 = arrays(float, 3, elements=finite)


# --- stereographic projection -------------------------------------------------

def test_stereo_examples():
    assert np.array_equal(stereo_r3_to_s3([0, 0, 0]), [0, 0, 0, 1])
    assert np.allclose(stereo_r3_to_s3([1, 0, 0]), [1, 0, 0, 0], atol=0)
    # cot(alpha/2) = 1/r with cos(alpha) = s4; r = 1 is the equator
    alpha = stereo_polar_angle(1.0)
    assert alpha == pytest.approx(math.pi / 2)
    assert 1 / math.tan(alpha / 2) == pytest.approx(1.0)
    assert math.cos(alpha) == pytest.approx(stereo_r3_to_s3([0, 1, 0])[3], abs=1e-15)


@given(vec3)
def test_stereo_round_trip(x):
    s = stereo_r3_to_s3(x)
    assert abs(np.linalg.norm(s) - 1) <= 1e-14
    assert np.allclose(stereo_s3_to_r3(s), x, rtol=1e-12, atol=1e-12 * (1 + np.linalg.norm(x) ** 2))


def test_stereo_pole():
    with pytest.raises(SingularityError):
        stereo_s3_to_r3([0, 0, 0, -1])
    with pytest.raises(DomainError):
        stereo_r3_to_s3([0, np.nan, 0])


def test_quarter_convention_round_trip():
    x = np.array([0.3, -1.2, 2.0])
    assert np.allclose(stereo_from_sphere(stereo_to_sphere(x, "quarter"), "quarter"), x, atol=1e-13)


def test_stereo_ab():
    x = np.array([0.4, -0.7, 1.3])
    a, b = 2.0, 0.5
    s = stereo_ab(x, a, b)
    assert np.linalg.norm(s) == pytest.approx(a, rel=1e-14)
    assert np.allclose(stereo_ab_inverse(s, a, b), x, atol=1e-13)
    # antipode on the sphere corresponds to r r' = b^2
    xp = antipodal_image(x, b)
    assert np.linalg.norm(x) * np.linalg.norm(xp) == pytest.approx(b * b)
    assert np.allclose(stereo_ab(xp, a, b), -s, atol=1e-13)


def test_conformal_factor_examples():
    assert conformal_factor_sphere([0, 0, 0]) == 1.0
    assert conformal_factor_sphere([1, 0], "unit") == 1.0
    x = [0.3, 0.4, 0.0]
    for conv in ("quarter", "unit"):
        g = pullback_metric(x, conv)
        assert np.max(np.abs(g - conformal_factor_sphere(x, conv) * np.eye(3))) <= 1e-6


def test_conformal_factor_2d_pullback():
    x = [0.8, -0.3]
    g = pullback_metric(x, "unit")
    assert np.max(np.abs(g - conformal_factor_sphere(x, "unit") * np.eye(2))) <= 1e-6


# --- refractive index ---------------------------------------------------------

def test_refractive_examples():
    assert refractive_index(1.0, 1.0, n0=3.0) == pytest.approx(1.5)
    # (r/a)^{-1/2} + (r/a)^{1/2} = 2 at r = a, so n = n0 / 2
    assert refractive_index(2.0, 0.5, n0=3.0, a=2.0) == pytest.approx(1.5)
    r = np.linspace(0, 5, 100)
    assert np.max(np.abs(refractive_index(r, 1.0, n0=1.7, a=1.3) - 1.7 / (1 + (r / 1.3) ** 2))) <= 1e-14


def test_refractive_origin_limits():
    assert refractive_index(0.0, 1.0) == 1.0
    assert refractive_index(0.0, 2.0) == 0.0
    assert refractive_index(0.0, 0.5) == math.inf
    with pytest.raises(DomainError):
        refractive_index(-1.0, 1.0)
    with pytest.raises(DomainError):
        refractive_index(1.0, 0.0)


def test_refractive_2d():
    assert refractive_index_2d(1.0, 1.0) == pytest.approx(1.0)
    r = np.linspace(0.1, 3, 30)
    assert np.allclose(refractive_index_2d(r, 1.0), 2 / (1 + r * r))


# --- Hopf map ---------------------------------------------------------------

def test_hopf_examples():
    assert np.allclose(hopf_map([0, 0, 1, 0]), [0, 0, -1])
    assert np.allclose(hopf_map([1, 0, 0, 0]), [0, 0, 1])
    for t in (0.0, 1.0, 2.0):
        assert np.allclose(hopf_map([math.cos(t), math.sin(t), 0, 0]), [0, 0, 1], atol=1e-15)


def test_hopf_fibers():
    rng = np.random.default_rng(7)
    s = rng.normal(size=(100, 4))
    s /= np.linalg.norm(s, axis=1, keepdims=True)
    base = hopf_map(s)
    assert np.max(np.abs(np.linalg.norm(base, axis=1) - 1)) <= 1e-12
    for theta in rng.uniform(0, 2 * np.pi, 8):
        z1 = (s[:, 0] + 1j * s[:, 1]) * np.exp(1j * theta)
        z2 = (s[:, 2] + 1j * s[:, 3]) * np.exp(1j * theta)
        img = hopf_map(np.column_stack([z1.real, z1.imag, z2.real, z2.imag]))
        assert np.max(np.abs(img - base)) <= 1e-10


def test_hopf_rejects_off_sphere():
    with pytest.raises(DomainError):
        hopf_map([1, 1, 0, 0])


# --- inversion --------------------------------------------------------------

def test_inversion_examples():
    x = np.array([0.6, 0.8, 0.0])
    assert np.allclose(inversion(x), x)
    assert np.allclose(inversion([2, 0, 0]), [0.5, 0, 0])
    with pytest.raises(SingularityError):
        inversion([0, 0, 0])


@given(vec3.filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_inversion_involution(x):
    assert np.allclose(inversion(inversion(x)), x, rtol=1e-12, atol=1e-12)


def test_inversion_momentum_involution():
    x, p = np.array([0.3, -1.1, 0.7]), np.array([0.2, 0.5, -0.4])
    xp, pp = inversion(x), inversion_momentum(x, p)
    assert np.allclose(inversion_momentum(xp, pp), p, atol=1e-13)
    # x . p changes sign: the dilatation generator flips
    assert np.dot(xp, pp) == pytest.approx(-np.dot(x, p))


def test_inversion_symplectic():
    J = inversion_phase_jacobian([1, 1, 0], [0.2, -0.3, 0.1])
    assert np.linalg.det(J) == pytest.approx(1.0, abs=1e-8)
    assert symplectic_defect(J) <= 1e-8


# --- Perlick radial map -----------------------------------------------------

def test_perlick_params():
    p = PerlickParams(0.5, -1.0)
    assert p.beta == Fraction(1, 2) and p.beta_pair == (1, 2)
    with pytest.raises(DomainError):
        PerlickParams(0)


def test_perlick_examples():
    rt, f2 = perlick_radial_map(PerlickParams(1, 0.0), 2.0)
    assert rt == pytest.approx(1.0) and f2 == pytest.approx(4.0)
    rt = np.linspace(0.01, 0.99, 100)
    f2 = perlick_conformal_factor(PerlickParams(1, -1.0), rt)
    assert np.max(np.abs(f2 - 4 / (1 + rt * rt) ** 2)) <= 1e-12
    # beta = 1/2, K = -1: rt^2 (rt^-1/2 + rt^1/2)^2 = rt (1 + rt)^2
    p = PerlickParams(Fraction(1, 2), -1.0)
    assert np.allclose(4 / perlick_conformal_factor(p, rt), rt * (1 + rt) ** 2, rtol=1e-13)


@given(st.floats(0.01, 50), st.sampled_from([Fraction(1), Fraction(1, 2), Fraction(3, 2), Fraction(2, 3)]),
       st.floats(-0.5, 2.0))
def test_perlick_inverse(r, beta, K):
    p = PerlickParams(beta, K)
    if 1 + K * r * r <= 0.01:
        return
    rt, _ = perlick_radial_map(p, r)
    assert perlick_radius(p, rt) == pytest.approx(r, rel=1e-10)


def test_perlick_identity_and_derivative():
    p = PerlickParams(Fraction(1, 2), -1.0)
    r = np.linspace(0.05, 0.95, 19)
    rt, _ = perlick_radial_map(p, r)
    b = 0.5
    assert np.allclose(np.sqrt(r**-2.0 + p.K), 0.5 * (rt**-b + p.K * rt**b), rtol=1e-12)
    h = 1e-6
    fd = (perlick_radial_map(p, r + h)[0] - perlick_radial_map(p, r - h)[0]) / (2 * h)
    assert np.allclose(perlick_drtilde_dr(p, r), fd, rtol=1e-7)


def test_perlick_domain():
    with pytest.raises(DomainError):
        perlick_radial_map(PerlickParams(1, -1.0), 1.5)


# --- Pluecker coordinates -----------------------------------------------------

def test_plucker_examples():
    line = plucker_from_points([1, 0, 0], [0, 1, 0])
    assert line.as_tuple() == (-1, 1, 0, 0, 0, 1)
    assert line.relation == 0
    assert np.max(np.abs(plucker_incidence(line, homogeneous([0.5, 0.5, 0])))) <= 1e-12
    assert np.max(np.abs(plucker_incidence(line, homogeneous([0, 0, 1])))) > 0.1
    with pytest.raises(DomainError):
        plucker_from_points([1, 2, 3], [1, 2, 3])


@given(vec3, vec3, st.floats(-3, 3))
def test_plucker_relation_and_incidence(x, y, lam):
    if np.allclose(x, y):
        return
    line = plucker_from_points(x, y)
    scale = (1 + np.max(np.abs(x))) * (1 + np.max(np.abs(y)))
    assert abs(line.relation) <= 1e-12 * scale**2
    q = homogeneous((1 - lam) * np.asarray(x) + lam * np.asarray(y))
    assert np.max(np.abs(plucker_incidence(line, q))) <= 1e-12 * scale * (1 + abs(lam)) ** 2 * 10


def test_plucker_integer_relation_exact():
    rng = np.random.default_rng(3)
    for _ in range(50):
        x, y = rng.integers(-9, 10, size=(2, 3))
        if np.array_equal(x, y):
            continue
        assert plucker_from_points(x, y).relation == 0


# --- so(4) ------------------------------------------------------------------

def test_so4_basis_antisymmetric_integer():
    for m in so4_basis():
        assert m.dtype.kind == "i"
        assert np.array_equal(m, -m.T)


def test_so4_examples():
    A1, A2, A3, B1, B2, B3 = so4_basis()
    assert np.array_equal(so4_commutator(A1, A2), A3)
    assert np.array_equal(so4_commutator(B1, B2), A3)
    assert not np.array_equal(so4_commutator(B1, B2), B3)


def test_so4_structure():
    basis = so4_basis()
    A, B = basis[:3], basis[3:]
    for i in range(3):
        for j in range(3):
            eps = [levi_civita(i, j, k) for k in range(3)]
            assert np.array_equal(so4_commutator(A[i], A[j]), sum(e * a for e, a in zip(eps, A)))
            assert np.array_equal(so4_commutator(B[i], B[j]), sum(e * a for e, a in zip(eps, A)))
            assert np.array_equal(so4_commutator(A[i], B[j]), sum(e * b for e, b in zip(eps, B)))
            # [J+_i, J-_j] = 0 with J+- = (A +- B)/2; the factor 1/4 is dropped to stay integral
            assert not np.any(so4_commutator(A[i] + B[i], A[j] - B[j]))


def test_so4_closure_table():
    table = so4_commutator_table()
    assert len(table) == 36
    assert table[("B1", "B2")] == (0, 0, 1, 0, 0, 0)
    assert table[("A1", "B2")] == (0, 0, 0, 0, 0, 1)
    assert all(all(c.denominator == 1 for c in coeffs) for coeffs in table.values())
    with pytest.raises(DomainError):
        so4_coefficients(np.eye(4, dtype=np.int64))


# --- Christoffel symbols --------------------------------------------------------

def _fisheye(x):
    return (1.0 / (1 + np.dot(x, x) / 4)) ** 2


def test_christoffel_examples():
    assert conformal_christoffel_check(lambda x: 2.5, [0.1, 0.2, 0.3]) == 0.0
    rho2 = lambda x: math.exp(0.3 * x[0] - 0.2 * x[1] ** 2)
    assert conformal_christoffel_check(rho2, [0.4, -0.1], d=2) <= 1e-5
    assert conformal_christoffel_check(_fisheye, [0.2, 0.1, 0.3], d=3) <= 1e-5


@pytest.mark.parametrize("d", [2, 3, 4])
def test_christoffel_dimensions(d):
    rng = np.random.default_rng(d)
    for p in rng.uniform(-1, 1, size=(5, d)):
        assert conformal_christoffel_check(_fisheye, p) <= 1e-5
        assert christoffel_trace_check(_fisheye, p) <= 1e-5


def test_christoffel_rejects_nonpositive():
    with pytest.raises(DomainError):
        conformal_christoffel_check(lambda x: x[0], [0.0, 0.5])
    with pytest.raises(DomainError):
        conformal_christoffel_check(_fisheye, [0.1, 0.2], d=3)


def test_invariant_battery_passes():
    results = invariant_battery()
    failed = [r["name"] for r in results if not r["passed"]]
    assert not failed
    assert len({r["name"] for r in results}) == len(results)
