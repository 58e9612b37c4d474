"""
Geometric maps and algebraic identities.

Stereographic projections between R^n and the unit sphere, conformal
factors, the Hopf map, coordinate inversion with its canonical momentum
lift, the Perlick type-I radial reduction, Pluecker line coordinates,
the so(4) basis, and a finite-difference check of the contracted
Christoffel symbols of a conformally flat metric.

The sphere has unit radius and projection is from the north pole
``s_4 = -1`` side: ``x -> (2x, 1 - r^2) / (1 + r^2)``.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools
import math

import numpy as np

from .errors import DomainError, SingularityError

FD_STEP = 1e-4


def _vec(x, dim=None):
    x = np.asarray(x, dtype=float)
    if dim is not None and x.shape[-1] != dim:
        raise DomainError(f"expected a {dim}-vector, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("coordinates must be finite")
    return x


# ---------------------------------------------------------------------------
# stereographic projection

def stereo_to_sphere(x, convention="unit"):
    """Inverse stereographic projection ``R^n -> S^n``.

    ``convention="unit"``: ``s = (2x, 1 - r^2) / (1 + r^2)``.
    ``convention="quarter"``: ``s = (x, 1 - r^2/4) / (1 + r^2/4)``.
    """
    x = _vec(x)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    if convention == "unit":
        return np.concatenate([2 * x, 1 - r2], axis=-1) / (1 + r2)
    if convention == "quarter":
        return np.concatenate([x, 1 - r2 / 4], axis=-1) / (1 + r2 / 4)
    raise DomainError(f"unknown convention {convention!r}")


def stereo_from_sphere(s, convention="unit"):
    """Stereographic projection ``S^n -> R^n`` (inverse of :func:`stereo_to_sphere`)."""
    s = _vec(s)
    last = s[..., -1:]
    if np.any(np.isclose(last, -1.0, rtol=0, atol=1e-15)):
        raise SingularityError("the projection pole s_last = -1 has no finite image")
    scale = 1.0 if convention == "unit" else 2.0
    if convention not in ("unit", "quarter"):
        raise DomainError(f"unknown convention {convention!r}")
    return scale * s[..., :-1] / (1 + last)


def stereo_r3_to_s3(x):
    return stereo_to_sphere(_vec(x, 3))


def stereo_s3_to_r3(s):
    return stereo_from_sphere(_vec(s, 4))


def stereo_polar_angle(r):
    """Polar angle on the sphere of a point at flat radius ``r``; ``cot(alpha/2) = 1/r``."""
    return 2.0 * np.arctan(r)


def stereo_ab(x, a, b):
    """Projection onto the sphere of radius ``a`` seen from distance ``b``.

    Returns ``(xi, eta, zeta, tau)`` with ``xi^2 + ... + tau^2 = a^2``.
    """
    x = _vec(x, 3)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    return np.concatenate([2 * a * b * x, a * (b * b - r2)], axis=-1) / (b * b + r2)


def stereo_ab_inverse(s, a, b):
    s = _vec(s, 4)
    tau = s[..., 3:]
    if np.any(np.isclose(tau, -a, rtol=0, atol=1e-15)):
        raise SingularityError("tau = -a has no finite image")
    return b * s[..., :3] / (a + tau)


def antipodal_image(x, b=1.0):
    """Flat image of the antipode: ``x' = -b^2 x / r^2`` (so ``r r' = b^2``)."""
    x = _vec(x)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    if np.any(r2 == 0):
        raise SingularityError("the origin has no finite antipodal image")
    return -b * b * x / r2


def conformal_factor_sphere(x, convention="quarter"):
    """Conformal factor of the round metric pulled back to flat space.

    ``"quarter"``: ``(1 + r^2/4)^{-2}``; ``"unit"``: ``4 / (1 + r^2)^2``.
    """
    x = _vec(x)
    r2 = np.sum(x * x, axis=-1)
    if convention == "quarter":
        out = (1.0 / (1 + r2 / 4)) ** 2
    elif convention == "unit":
        out = 4.0 / (1 + r2) ** 2
    else:
        raise DomainError(f"unknown convention {convention!r}")
    return float(out) if np.ndim(out) == 0 else out


def pullback_metric(x, convention="quarter", h=FD_STEP):
    """Round metric pulled back through the projection, by a central-difference Jacobian."""
    x = _vec(x)
    n = x.size
    J = np.empty((n + 1, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        J[:, j] = (stereo_to_sphere(x + e, convention) - stereo_to_sphere(x - e, convention)) / (2 * h)
    return J.T @ J


def refractive_index(r, gamma=1.0, n0=1.0, a=1.0):
    """Deformed fish-eye index ``(a/r) n0 / ((r/a)^-gamma + (r/a)^gamma)``.

    At ``r = 0`` the limit is returned: ``n0`` for ``gamma = 1``, ``0`` for
    ``gamma > 1`` and ``inf`` for ``gamma < 1``.
    """
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    s = r / a
    with np.errstate(divide="ignore", invalid="ignore"):
        out = n0 * s ** (gamma - 1) / (1 + s ** (2 * gamma))
    if gamma == 1:
        out = n0 / (1 + s * s)
    out = np.where(s == 0, n0 if gamma == 1 else (0.0 if gamma > 1 else np.inf), out)
    return float(out) if out.ndim == 0 else out


def refractive_index_2d(r, gamma=1.0):
    """Two-dimensional conformal index ``2 gamma r^{gamma-1} / (1 + r^{2 gamma})``."""
    r = np.asarray(r, dtype=float)
    out = 2 * gamma * r ** (gamma - 1) / (1 + r ** (2 * gamma))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Hopf map and inversion

def hopf_map(s):
    """Hopf fibration ``S^3 -> S^2``.

    With ``z1 = s1 + i s2`` and ``z2 = s3 + i s4`` the image is the inverse
    stereographic projection of ``w = z1 / z2``: ``(2w, |w|^2 - 1) / (|w|^2 + 1)``,
    so ``z1 = 0`` goes to ``(0, 0, -1)`` and ``z2 = 0`` to ``(0, 0, 1)``.
    """
    s = _vec(s, 4)
    norm = np.sqrt(np.sum(s * s, axis=-1))
    if np.any(np.abs(norm - 1) > 1e-10):
        raise DomainError("input must lie on the unit 3-sphere")
    z1 = s[..., 0] + 1j * s[..., 1]
    z2 = s[..., 2] + 1j * s[..., 3]
    a1, a2 = np.abs(z1) ** 2, np.abs(z2) ** 2
    w = 2 * z1 * np.conj(z2) / (a1 + a2)
    return np.stack([w.real, w.imag, (a1 - a2) / (a1 + a2)], axis=-1)


def inversion(x):
    """Inversion in the unit sphere ``x' = x / |x|^2``."""
    x = _vec(x)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    if np.any(r2 == 0):
        raise SingularityError("inversion is singular at the origin")
    return x / r2


def inversion_momentum(x, p):
    """Momentum lift of the inversion: ``p' = |x|^2 p - 2 x (x . p)``."""
    x, p = _vec(x), _vec(p)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    if np.any(r2 == 0):
        raise SingularityError("inversion is singular at the origin")
    return r2 * p - 2 * x * np.sum(x * p, axis=-1, keepdims=True)


def inversion_phase_jacobian(x, p, h=1e-5):
    """Central-difference Jacobian of ``(x, p) -> (x', p')`` in R^3 x R^3.

    The momentum map is quadratic in ``x`` so its differences are exact; the
    truncation error comes from ``x / |x|^2`` and is ``O(h^2 / |x|^4)``.
    """
    z = np.concatenate([_vec(x, 3), _vec(p, 3)])

    def F(z):
        return np.concatenate([inversion(z[:3]), inversion_momentum(z[:3], z[3:])])

    J = np.empty((6, 6))
    for j in range(6):
        e = np.zeros(6)
        e[j] = h
        J[:, j] = (F(z + e) - F(z - e)) / (2 * h)
    return J


def symplectic_defect(J):
    """``max |J^T Omega J - Omega|`` for the standard symplectic form."""
    n = J.shape[0] // 2
    omega = np.block([[np.zeros((n, n)), np.eye(n)], [-np.eye(n), np.zeros((n, n))]])
    return float(np.max(np.abs(J.T @ omega @ J - omega)))


# ---------------------------------------------------------------------------
# Perlick type-I reduction

@dataclass(frozen=True)
class PerlickParams:
    """Type-I Bertrand metric parameters; ``beta`` is kept as an exact fraction."""

    beta: Fraction = Fraction(1)
    K: float = 0.0
    G: float = 0.0

    def __post_init__(self):
        b = Fraction(self.beta).limit_denominator(10**6) if isinstance(self.beta, float) else Fraction(self.beta)
        if b <= 0:
            raise DomainError("beta must be positive")
        object.__setattr__(self, "beta", b)

    @property
    def beta_pair(self):
        return self.beta.numerator, self.beta.denominator


def _rpow(x, frac):
    # x**(p/q) for x > 0 via exp/log with the exponent computed once from the fraction
    x = np.asarray(x, dtype=float)
    return np.exp((frac.numerator / frac.denominator) * np.log(x))


def perlick_radial_map(params, r):
    """Radius ``rtilde`` of the conformally flat chart and the factor ``f^2(rtilde)``.

    ``rtilde^beta = r / (1 + sqrt(1 + K r^2))`` and
    ``f^2 = (4 / rtilde^2) / (rtilde^-beta - K rtilde^beta)^2``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radius must be positive")
    disc = 1 + params.K * r * r
    if np.any(disc <= 0):
        raise DomainError("1 + K r^2 must be positive")
    t = r / (1 + np.sqrt(disc))
    rt = _rpow(t, 1 / params.beta)
    f2 = perlick_conformal_factor(params, rt)
    if rt.ndim == 0:
        return float(rt), float(f2)
    return rt, f2


def perlick_conformal_factor(params, rtilde):
    """``f^2(rtilde) = (4 / rtilde^2) (rtilde^-beta - K rtilde^beta)^-2``."""
    rt = np.asarray(rtilde, dtype=float)
    tb = _rpow(rt, params.beta)
    out = (4.0 / rt**2) / (1.0 / tb - params.K * tb) ** 2
    return float(out) if out.ndim == 0 else out


def perlick_radius(params, rtilde):
    """Inverse of the radial map: ``r = 2 t / (1 - K t^2)`` with ``t = rtilde^beta``."""
    t = _rpow(rtilde, params.beta)
    out = 2 * t / (1 - params.K * t * t)
    return float(out) if np.ndim(out) == 0 else out


def perlick_drtilde_dr(params, r):
    """``d rtilde / d r = rtilde / (beta r sqrt(1 + K r^2))``."""
    rt, _ = perlick_radial_map(params, r)
    return rt / (float(params.beta) * r * np.sqrt(1 + params.K * r * r))


# ---------------------------------------------------------------------------
# Pluecker coordinates and so(4)

@dataclass(frozen=True)
class PluckerLine:
    p01: float
    p02: float
    p03: float
    p23: float
    p31: float
    p12: float

    @property
    def relation(self):
        """``p01 p23 + p02 p31 + p03 p12`` (zero for a genuine line)."""
        return self.p01 * self.p23 + self.p02 * self.p31 + self.p03 * self.p12

    def as_tuple(self):
        return (self.p01, self.p02, self.p03, self.p23, self.p31, self.p12)


def plucker_from_points(x, y):
    """Line through points ``x`` and ``y`` of R^3 in Pluecker coordinates."""
    x1, x2, x3 = (float(v) for v in _vec(x, 3))
    y1, y2, y3 = (float(v) for v in _vec(y, 3))
    if (x1, x2, x3) == (y1, y2, y3):
        raise DomainError("the two points coincide; the line is undefined")
    return PluckerLine(
        p01=y1 - x1, p02=y2 - x2, p03=y3 - x3,
        p23=x2 * y3 - x3 * y2, p31=x3 * y1 - x1 * y3, p12=x1 * y2 - x2 * y1,
    )


def homogeneous(point):
    """``(1, x, y, z)`` in the ordering used by :func:`plucker_matrix`."""
    return np.concatenate([[1.0], _vec(point, 3)])


def plucker_matrix(line):
    """Antisymmetric 4x4 incidence matrix acting on ``(q0, q1, q2, q3)``."""
    p01, p02, p03, p23, p31, p12 = line.as_tuple()
    p13 = -p31
    return np.array([
        [0.0, p23, -p13, p12],
        [-p23, 0.0, p03, -p02],
        [p13, -p03, 0.0, p01],
        [-p12, p02, -p01, 0.0],
    ])


def plucker_incidence(line, q):
    """Residual of the incidence equation; zero iff homogeneous ``q`` lies on ``line``."""
    return plucker_matrix(line) @ _vec(q, 4)


def so4_basis():
    """The six integer generators ``(A1, A2, A3, B1, B2, B3)`` of so(4)."""
    def gen(i, j):
        m = np.zeros((4, 4), dtype=np.int64)
        m[i, j], m[j, i] = -1, 1
        return m
    A = (gen(1, 2), gen(2, 0), gen(0, 1))
    B = (gen(0, 3), gen(1, 3), gen(2, 3))
    return A + B


SO4_NAMES = ("A1", "A2", "A3", "B1", "B2", "B3")


def so4_commutator(m1, m2):
    return m1 @ m2 - m2 @ m1


def so4_coefficients(m, basis=None):
    """Expansion coefficients of an antisymmetric matrix in the so(4) basis.

    Solved exactly: the basis elements occupy disjoint upper-triangular
    entries, so each coefficient is read from one entry and the
    reconstruction is verified.
    """
    basis = so4_basis() if basis is None else basis
    coeffs = []
    for b in basis:
        (i, j), = [(i, j) for i, j in zip(*np.nonzero(b)) if i < j]
        coeffs.append(Fraction(int(m[i, j]), int(b[i, j])) if np.issubdtype(np.asarray(m).dtype, np.integer)
                      else m[i, j] / b[i, j])
    recon = sum(c * b for c, b in zip(coeffs, basis))
    if not np.array_equal(np.asarray(recon, dtype=float), np.asarray(m, dtype=float)):
        raise DomainError("matrix is not in the span of the so(4) basis")
    return tuple(coeffs)


def so4_commutator_table():
    """``{(a, b): coefficients}`` for every ordered pair of basis names."""
    basis = so4_basis()
    return {(SO4_NAMES[i], SO4_NAMES[j]): so4_coefficients(so4_commutator(basis[i], basis[j]), basis)
            for i, j in itertools.product(range(6), repeat=2)}


def levi_civita(i, j, k):
    return (i - j) * (j - k) * (k - i) // 2


# ---------------------------------------------------------------------------
# Christoffel symbols of g_ij = delta_ij / rho

def _christoffel(rho_field, x, h):
    d = x.size

    def metric(z):
        val = rho_field(z)
        if not val > 0:
            raise DomainError("conformal factor must be positive on the stencil")
        return np.eye(d) / val

    dg = np.empty((d, d, d))  # dg[l, j, k] = d_l g_jk
    for l in range(d):
        e = np.zeros(d)
        e[l] = h
        dg[l] = (metric(x + e) - metric(x - e)) / (2 * h)
    g_inv = np.linalg.inv(metric(x))
    # Gamma^i_kl = 1/2 g^ij (d_l g_jk + d_k g_jl - d_j g_kl)
    term = (np.einsum("ljk->jkl", dg) + np.einsum("kjl->jkl", dg) - dg)
    return 0.5 * np.einsum("ij,jkl->ikl", g_inv, term), g_inv


def _grad(f, x, h):
    d = x.size
    out = np.empty(d)
    for l in range(d):
        e = np.zeros(d)
        e[l] = h
        out[l] = (f(x + e) - f(x - e)) / (2 * h)
    return out


def conformal_christoffel_check(rho_field, point, d=None, h=FD_STEP):
    """``sum_i |g^kl Gamma^i_kl - (d-2)/2 d_i rho|`` for ``g_ij = delta_ij / rho``.

    Every derivative is a central difference with step ``h``.
    """
    x = _vec(point)
    if d is not None and x.size != d:
        raise DomainError(f"point has dimension {x.size}, expected {d}")
    d = x.size
    gamma, g_inv = _christoffel(rho_field, x, h)
    contracted = np.einsum("kl,ikl->i", g_inv, gamma)
    expected = 0.5 * (d - 2) * _grad(rho_field, x, h)
    return float(np.sum(np.abs(contracted - expected)))


def christoffel_trace_check(rho_field, point, h=FD_STEP):
    """``sum_k |Gamma^i_ki + (d/2) d_k rho / rho|``."""
    x = _vec(point)
    d = x.size
    gamma, _ = _christoffel(rho_field, x, h)
    trace = np.einsum("iki->k", gamma)
    expected = -0.5 * d * _grad(rho_field, x, h) / rho_field(x)
    return float(np.sum(np.abs(trace - expected)))


# ---------------------------------------------------------------------------
# invariant battery

def _fisheye_rho(x):
    return (1.0 / (1 + np.dot(x, x) / 4)) ** 2


def invariant_battery(n_points=1000, seed=20240601):
    """Run every geometric invariant on deterministic samples.

    Returns a list of ``{"name", "value", "tolerance", "passed"}`` dicts,
    ``value`` being the worst deviation found.
    """
    rng = np.random.default_rng(seed)
    out = []

    def record(name, value, tol):
        value = float(value)
        out.append({"name": name, "value": value, "tolerance": tol, "passed": bool(value <= tol)})

    x = rng.normal(size=(n_points, 3)) * 2.0
    s = stereo_r3_to_s3(x)
    record("stereo_unit_norm", np.max(np.abs(np.linalg.norm(s, axis=1) - 1)), 1e-14)
    record("stereo_round_trip_r3", np.max(np.abs(stereo_s3_to_r3(s) - x) / (1 + np.abs(x))), 1e-12)
    s4 = rng.normal(size=(n_points, 4))
    s4 /= np.linalg.norm(s4, axis=1, keepdims=True)
    s4 = s4[s4[:, 3] > -0.9]
    record("stereo_round_trip_s3", np.max(np.abs(stereo_r3_to_s3(stereo_s3_to_r3(s4)) - s4)), 1e-12)

    worst = 0.0
    for conv in ("quarter", "unit"):
        for p in x[:20]:
            g = pullback_metric(p, conv)
            worst = max(worst, np.max(np.abs(g - conformal_factor_sphere(p, conv) * np.eye(3))))
    record("conformal_pullback", worst, 1e-6)

    xi = x[np.linalg.norm(x, axis=1) > 1e-3]
    record("inversion_involution", np.max(np.abs(inversion(inversion(xi)) - xi) / (1 + np.abs(xi))), 1e-12)
    worst = 0.0
    shell = x[:20] / np.linalg.norm(x[:20], axis=1, keepdims=True) * rng.uniform(0.5, 2.0, size=(20, 1))
    for p, q in zip(shell, rng.normal(size=(20, 3))):
        worst = max(worst, symplectic_defect(inversion_phase_jacobian(p, q)))
    record("inversion_symplectic", worst, 1e-8)

    h = s4[:100]
    base = hopf_map(h)
    worst = np.max(np.abs(np.linalg.norm(base, axis=1) - 1))
    record("hopf_unit_image", worst, 1e-12)
    worst = 0.0
    for theta in rng.uniform(0, 2 * np.pi, size=8):
        z1 = (h[:, 0] + 1j * h[:, 1]) * np.exp(1j * theta)
        z2 = (h[:, 2] + 1j * h[:, 3]) * np.exp(1j * theta)
        rot = np.column_stack([z1.real, z1.imag, z2.real, z2.imag])
        worst = max(worst, np.max(np.abs(hopf_map(rot) - base)))
    record("hopf_fiber_invariance", worst, 1e-10)

    worst_rel, worst_inc = 0.0, 0.0
    for a, b in zip(x[:100], x[100:200]):
        line = plucker_from_points(a, b)
        worst_rel = max(worst_rel, abs(line.relation))
        for lam in (0.0, 0.3, 1.0, 2.5):
            q = homogeneous((1 - lam) * a + lam * b)
            worst_inc = max(worst_inc, np.max(np.abs(plucker_incidence(line, q))) / (1 + np.max(np.abs(q))) ** 2)
    record("plucker_relation", worst_rel, 1e-12)
    record("plucker_incidence", worst_inc, 1e-12)

    basis = so4_basis()
    record("so4_antisymmetry", max(np.max(np.abs(m + m.T)) for m in basis), 0)
    A, B = basis[:3], basis[3:]
    worst = 0
    for i, j in itertools.product(range(3), repeat=2):
        expect = sum(levi_civita(i, j, k) * A[k] for k in range(3))
        worst = max(worst, np.max(np.abs(so4_commutator(A[i], A[j]) - expect)))
        worst = max(worst, np.max(np.abs(so4_commutator(B[i], B[j]) - expect)))
    record("so4_structure_constants", worst, 0)
    worst = 0
    for i, j in itertools.product(range(3), repeat=2):
        jp, jm = A[i] + B[i], A[j] - B[j]  # 4 J+_i and 4 J-_j, kept integral
        worst = max(worst, np.max(np.abs(so4_commutator(jp, jm))))
    record("so4_chiral_split", worst, 0)
    table = so4_commutator_table()
    record("so4_closure", 0 if len(table) == 36 else 1, 0)

    rt = np.linspace(0.01, 0.99, 100)
    pp = PerlickParams(1, -1.0, 0.0)
    r = perlick_radius(pp, rt)
    _, f2 = perlick_radial_map(pp, r)
    record("perlick_fisheye_factor", np.max(np.abs(f2 - 4 / (1 + rt**2) ** 2)), 1e-12)

    rg = np.linspace(0.01, 5, 100)
    record("refractive_gamma1", np.max(np.abs(refractive_index(rg, 1.0) - 1 / (1 + rg**2))), 1e-14)

    for d in (2, 3, 4):
        pts = rng.uniform(-0.5, 0.5, size=(5, d))
        worst = max(conformal_christoffel_check(_fisheye_rho, p) for p in pts)
        record(f"christoffel_contraction_d{d}", worst, 1e-5)
    return out
