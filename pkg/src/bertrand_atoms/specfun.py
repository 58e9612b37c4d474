"""
Special functions on spheres.

Gegenbauer and associated Legendre polynomials, spherical harmonics on
S^2 and S^3, the momentum-space hydrogen amplitude, and the quadrature
rules the rest of the package uses to check normalizations.

Phase conventions
-----------------
No Condon-Shortley factor is used anywhere: ``P_l^m`` is positive for
0 < x < 1 and ``Y_lm`` carries a bare ``exp(i m phi)``.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import DomainError

_X_SLACK = 1e-12


@dataclass(frozen=True)
class HarmonicIndex:
    """Quantum numbers ``(n, l, m)`` of a hyperspherical harmonic."""

    n: int
    l: int
    m: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.l <= self.n - 1:
            raise DomainError(f"l must satisfy 0 <= l <= n-1, got l={self.l}, n={self.n}")
        if abs(self.m) > self.l:
            raise DomainError(f"|m| must be <= l, got m={self.m}, l={self.l}")


def hyperspherical_indices(n_max):
    """All ``HarmonicIndex`` with ``n <= n_max`` in (n, l, m) lexical order."""
    return [HarmonicIndex(n, l, m)
            for n in range(1, n_max + 1)
            for l in range(n)
            for m in range(-l, l + 1)]


@dataclass(frozen=True)
class QuadratureGrid:
    """Nodes and positive weights on an interval."""

    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape:
            raise DomainError("nodes and weights must have equal length")
        if np.any(np.diff(self.nodes) <= 0):
            raise DomainError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise DomainError("weights must be strictly positive")

    def integrate(self, values):
        """Weighted sum over the last axis of ``values``."""
        return np.asarray(values) @ self.weights


def gauss_legendre(n=64, a=-1.0, b=1.0):
    """Gauss-Legendre rule with ``n`` nodes mapped to ``[a, b]``."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureGrid(nodes=half * x + 0.5 * (a + b), weights=half * w,
                          domain=(float(a), float(b)))


def _check_order(lam):
    if not lam > -0.5 or lam == 0:
        raise DomainError(f"Gegenbauer order must be > -1/2 and nonzero, got {lam}")


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1 + _X_SLACK):
        raise DomainError("argument must lie in [-1, 1]")
    return x


def _gegenbauer_raw(k, lam, x):
    # Three-term recurrence; no domain checks so finite-difference stencils
    # may step slightly outside [-1, 1].
    x = np.asarray(x, dtype=float)
    c_prev = np.ones_like(x)
    if k == 0:
        return c_prev
    c = 2.0 * lam * x
    for j in range(2, k + 1):
        c_prev, c = c, (2.0 * x * (j + lam - 1) * c - (j + 2 * lam - 2) * c_prev) / j
    return c


def gegenbauer(k, lam, x):
    """Gegenbauer polynomial ``C_k^lam(x)`` by the three-term recurrence.

    Parameters
    ----------
    k : int
        Degree, ``k >= 0``.
    lam : float
        Order, ``lam > -1/2`` and ``lam != 0``.
    x : float or ndarray
        Argument(s) in ``[-1, 1]``.
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"degree must be a nonnegative integer, got {k}")
    _check_order(lam)
    x = _check_x(x)
    out = _gegenbauer_raw(int(k), lam, x)
    return float(out) if out.ndim == 0 else out


def gegenbauer_derivative(k, lam, x):
    """Exact derivative ``d/dx C_k^lam = 2 lam C_{k-1}^{lam+1}``."""
    _check_order(lam)
    x = _check_x(x)
    if k == 0:
        out = np.zeros_like(x)
    else:
        out = 2.0 * lam * _gegenbauer_raw(k - 1, lam + 1, x)
    return float(out) if out.ndim == 0 else out


def gegenbauer_ode_residual(k, lam, x, h=1e-4):
    """Pointwise residual of the Gegenbauer equation using central differences.

    ``(1-x^2) y'' - (2 lam + 1) x y' + k (k + 2 lam) y`` with ``y = C_k^lam``
    and derivatives from second-order central differences of step ``h``.
    """
    _check_order(lam)
    x = _check_x(x)
    y = _gegenbauer_raw(k, lam, x)
    yp = _gegenbauer_raw(k, lam, x + h)
    ym = _gegenbauer_raw(k, lam, x - h)
    d1 = (yp - ym) / (2 * h)
    d2 = (yp - 2 * y + ym) / h**2
    return (1 - x**2) * d2 - (2 * lam + 1) * x * d1 + k * (k + 2 * lam) * y


def gegenbauer_ode_residual_exact(k, lam, x):
    """Same residual as above with derivatives from the exact lowering identity."""
    _check_order(lam)
    x = _check_x(x)
    y = _gegenbauer_raw(k, lam, x)
    d1 = 2 * lam * _gegenbauer_raw(k - 1, lam + 1, x) if k >= 1 else np.zeros_like(x)
    d2 = (4 * lam * (lam + 1) * _gegenbauer_raw(k - 2, lam + 2, x)
          if k >= 2 else np.zeros_like(x))
    return (1 - x**2) * d2 - (2 * lam + 1) * x * d1 + k * (k + 2 * lam) * y


def gegenbauer_addition_check(n, alpha, beta, x):
    """``|C_n^{alpha+beta}(x) - sum_m C_m^alpha(x) C_{n-m}^beta(x)|``."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    for lam in (alpha, beta, alpha + beta):
        _check_order(lam)
    x = _check_x(x)
    lhs = _gegenbauer_raw(n, alpha + beta, x)
    rhs = sum(_gegenbauer_raw(m, alpha, x) * _gegenbauer_raw(n - m, beta, x)
              for m in range(n + 1))
    out = np.abs(lhs - rhs)
    return float(out) if out.ndim == 0 else out


def _double_factorial_odd(m):
    # (2m-1)!! with (-1)!! = 1
    return math.prod(range(1, 2 * m, 2)) if m > 0 else 1


def _check_lm(l, m):
    if l < 0 or not 0 <= m <= l:
        raise DomainError(f"need 0 <= m <= l, got l={l}, m={m}")


def assoc_legendre(l, m, x):
    """Associated Legendre function ``P_l^m(x)`` without Condon-Shortley phase.

    Evaluated by the standard upward recurrence in ``l`` starting from
    ``P_m^m = (2m-1)!! (1-x^2)^{m/2}``.
    """
    _check_lm(l, m)
    x = _check_x(x)
    s = np.sqrt(np.clip(1 - x * x, 0.0, None))
    p_mm = float(_double_factorial_odd(m)) * s**m
    if l == m:
        out = p_mm
    else:
        p_prev, p = p_mm, x * (2 * m + 1) * p_mm
        for ll in range(m + 2, l + 1):
            p_prev, p = p, (x * (2 * ll - 1) * p - (ll + m - 1) * p_prev) / (ll - m)
        out = p
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def assoc_legendre_gegenbauer(l, m, x):
    """``P_l^m`` through ``(2m-1)!! (1-x^2)^{m/2} C_{l-m}^{m+1/2}(x)``."""
    _check_lm(l, m)
    x = _check_x(x)
    s = np.sqrt(np.clip(1 - x * x, 0.0, None))
    out = float(_double_factorial_odd(m)) * s**m * _gegenbauer_raw(l - m, m + 0.5, x)
    return float(out) if np.ndim(out) == 0 else out


def assoc_legendre_ode_residual(l, m, x, h=1e-4):
    """Residual of ``(1-x^2)y'' - 2x y' + [l(l+1) - m^2/(1-x^2)] y`` by central differences."""
    _check_lm(l, m)
    x = _check_x(x)
    f = lambda z: assoc_legendre_gegenbauer(l, m, np.clip(z, -1, 1))
    y, yp, ym = f(x), f(x + h), f(x - h)
    d1 = (yp - ym) / (2 * h)
    d2 = (yp - 2 * y + ym) / h**2
    return (1 - x**2) * d2 - 2 * x * d1 + (l * (l + 1) - m * m / (1 - x**2)) * y


def spherical_harmonic(l, m, theta, phi):
    """Orthonormal ``Y_lm(theta, phi)`` on S^2 with phase ``exp(i m phi)``."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"invalid (l, m) = ({l}, {m})")
    am = abs(m)
    log_norm = 0.5 * (math.log((2 * l + 1) / (4 * math.pi))
                      + gammaln(l - am + 1) - gammaln(l + am + 1))
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    out = math.exp(log_norm) * assoc_legendre(l, am, np.cos(theta)) * np.exp(1j * m * phi)
    return complex(out) if np.ndim(out) == 0 else out


def hyperspherical_prefactor(n, l):
    """``2^{l+1} l! [n (n-l-1)! / (2 pi (n+l)!)]^{1/2}``."""
    log_c = ((l + 1) * math.log(2) + gammaln(l + 1)
             + 0.5 * (math.log(n) + gammaln(n - l) - math.log(2 * math.pi) - gammaln(n + l + 1)))
    return math.exp(log_c)


def hyperspherical_radial(n, l, alpha):
    """Angular-in-alpha factor ``c_nl sin^l(alpha) C_{n-l-1}^{l+1}(cos alpha)``."""
    alpha = np.asarray(alpha, dtype=float)
    return (hyperspherical_prefactor(n, l) * np.sin(alpha) ** l
            * _gegenbauer_raw(n - l - 1, l + 1, np.cos(alpha)))


def hyperspherical_harmonic(idx, alpha, theta, phi):
    """Hyperspherical harmonic ``Y_nlm(alpha, theta, phi)`` on the unit S^3.

    Orthonormal under the measure ``sin^2(alpha) sin(theta) dalpha dtheta dphi``.
    """
    if not isinstance(idx, HarmonicIndex):
        idx = HarmonicIndex(*idx)
    out = (hyperspherical_radial(idx.n, idx.l, alpha)
           * spherical_harmonic(idx.l, idx.m, theta, phi))
    return complex(out) if np.ndim(out) == 0 else out


def hyperspherical_gram(n_max, nodes=64):
    """Gram matrix of all ``Y_nlm`` with ``n <= n_max`` by product Gauss quadrature.

    Returns ``(indices, G)`` with ``G[i, j] = <Y_i, Y_j>``.
    """
    qa = gauss_legendre(nodes, 0.0, math.pi)
    qt = gauss_legendre(nodes, 0.0, math.pi)
    qp = gauss_legendre(nodes, 0.0, 2 * math.pi)
    A, T, P = np.meshgrid(qa.nodes, qt.nodes, qp.nodes, indexing="ij")
    W = (qa.weights[:, None, None] * np.sin(qa.nodes)[:, None, None] ** 2
         * qt.weights[None, :, None] * np.sin(qt.nodes)[None, :, None]
         * qp.weights[None, None, :]).ravel()
    indices = hyperspherical_indices(n_max)
    Y = np.array([hyperspherical_harmonic(ix, A, T, P).ravel() for ix in indices])
    G = (Y.conj() * W) @ Y.T
    return indices, G


def fock_cos_alpha(p, n_scale):
    """Fock map of a momentum magnitude to the S^3 polar angle: ``cos(alpha)``."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise DomainError("momentum must be nonnegative")
    q2 = (n_scale * p) ** 2
    out = (1 - q2) / (1 + q2)
    return float(out) if out.ndim == 0 else out


def momentum_amplitude(idx, p, n_scale=None):
    """Radial momentum-space hydrogen amplitude ``F_nl(p)``.

    ``n_scale`` multiplies ``p`` (``n p`` in atomic units); defaults to ``idx.n``.
    """
    if not isinstance(idx, HarmonicIndex):
        idx = HarmonicIndex(*idx)
    n, l = idx.n, idx.l
    ns = n if n_scale is None else n_scale
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise DomainError("momentum must be nonnegative")
    q = ns * p
    log_c = (0.5 * (math.log(2 / math.pi) + gammaln(n - l) - gammaln(n + l + 1))
             + 2 * math.log(ns) + (2 * l + 2) * math.log(2) + gammaln(l + 1))
    out = (math.exp(log_c) * q**l / (q * q + 1) ** (l + 2)
           * _gegenbauer_raw(n - l - 1, l + 1, (1 - q * q) / (1 + q * q)))
    return float(out) if out.ndim == 0 else out


def gegenbauer_norm_closed_form(l, p):
    """``pi Gamma(2p+l) / (2^{2p-1} l! (l+p) Gamma(p)^2)``."""
    return math.exp(math.log(math.pi) + gammaln(2 * p + l) - (2 * p - 1) * math.log(2)
                    - gammaln(l + 1) - math.log(l + p) - 2 * gammaln(p))


def gegenbauer_norm_integral(l, p):
    """``int_0^pi sin^{2p}(a) [C_l^p(cos a)]^2 da`` by adaptive quadrature."""
    if l < 0 or not p > 0:
        raise DomainError("need l >= 0 and p > 0")
    f = lambda a: math.sin(a) ** (2 * p) * float(_gegenbauer_raw(l, p, math.cos(a))) ** 2
    val, _ = integrate.quad(f, 0.0, math.pi, epsabs=0.0, epsrel=1e-13, limit=400)
    return val
