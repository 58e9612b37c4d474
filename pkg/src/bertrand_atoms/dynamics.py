"""
Planar orbits in Bertrand-type central fields.

Two models share one integrator:

``tietz_newtonian``
    ``H = p_r^2/2 + L^2/(2 r^2) + V(r)`` with ``V = -Z / (r (1 + r/a)^2)``.
    At zero energy the orbit obeys ``x + 1/x = (D+1) + (D-1) cos phi`` with
    ``x = r/a`` and ``D = Z a / L^2 - 1``: it closes after ``phi`` advances
    by ``4 pi`` and crosses itself once, at ``x = 1``.

``perlick_I``
    ``H = beta^2 (1 + K r^2) p_r^2 + L^2/r^2 - sqrt(r^-2 + K) + G``,
    the Kepler-Coulomb member of the Bertrand family (``beta = 1``,
    ``K = G = 0`` gives ``p_r^2 + L^2/r^2 - 1/r``).

The integrator is scipy's DOP853 with dense output; analysis works on
that dense output rather than on the raw step points.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, UnsupportedModelError, ZeroConformalFactorError
from .geometry import PerlickParams, perlick_drtilde_dr, perlick_radius

MODELS = ("tietz_newtonian", "perlick_I")
CLOSURE_TOL = 1e-6
POLYLINE_POINTS = 4096


@dataclass(frozen=True)
class OrbitParams:
    """Orbit parameters; ``delta = Z a / L^2 - 1`` is derived."""

    model: str = "tietz_newtonian"
    Z: float = 1.0
    a: float = 1.0
    L: float = 1.0
    beta: Fraction = Fraction(1)
    K: float = 0.0
    G: float = 0.0

    def __post_init__(self):
        if self.model not in MODELS:
            raise UnsupportedModelError(f"unknown orbit model {self.model!r}")
        for name in ("Z", "a", "L"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        object.__setattr__(self, "beta", PerlickParams(self.beta).beta)

    @classmethod
    def from_delta(cls, delta, Z=1.0, a=1.0):
        """Newtonian parameters with ``L = sqrt(Z a / (delta + 1))``."""
        if not delta > -1:
            raise DomainError("delta must exceed -1")
        return cls("tietz_newtonian", Z, a, math.sqrt(Z * a / (delta + 1)))

    @property
    def delta(self):
        return self.Z * self.a / self.L**2 - 1

    @property
    def perlick(self):
        return PerlickParams(self.beta, self.K, self.G)


def perihelion(params):
    """``x0 = D - sqrt(D^2 - 1)``, the inner turning point of the zero-energy orbit."""
    d = params.delta
    if d < 1 - 1e-12:
        raise DomainError(f"perihelion launch needs delta >= 1, got {d}")
    return d - math.sqrt(max(d * d - 1, 0.0))


def period_formula(params):
    """``pi (D+1)(3D-1) a^2 / L``."""
    d = params.delta
    return math.pi * (d + 1) * (3 * d - 1) * params.a**2 / params.L


def period_quadrature(params):
    """Independent period oracle: ``(a^2/L) int_0^{2 pi} (S^2 - 2) d phi``.

    Along the zero-energy orbit ``dt = a^2 x^2 / L d phi`` and the two radial
    branches with the same ``S = x + 1/x`` contribute ``x_+^2 + x_-^2 = S^2 - 2``.
    """
    d = params.delta

    def integrand(phi):
        s = d + 1 + (d - 1) * math.cos(phi)
        return s * s - 2

    val, _ = integrate.quad(integrand, 0.0, 2 * math.pi, epsabs=0, epsrel=1e-13)
    return params.a**2 / params.L * val


# ---------------------------------------------------------------------------
# Hamiltonians

def newtonian_potential(params, r):
    return -params.Z / (r * (1 + r / params.a) ** 2)


def _newtonian_rhs(params):
    Z, a, L = params.Z, params.a, params.L

    def rhs(t, y):
        r, p, _ = y
        dV = Z * (1 + 3 * r / a) / (r * r * (1 + r / a) ** 3)
        return [p, L * L / r**3 - dV, L / (r * r)]

    def energy(r, p):
        return 0.5 * p * p + 0.5 * L * L / (r * r) + newtonian_potential(params, r)

    return rhs, energy


def _perlick_rhs(params):
    b2, K, G, L = float(params.beta) ** 2, params.K, params.G, params.L

    def rhs(t, y):
        r, p, _ = y
        s = math.sqrt(r ** -2 + K)
        return [2 * b2 * (1 + K * r * r) * p,
                -2 * b2 * K * r * p * p + 2 * L * L / r**3 - 1 / (r**3 * s),
                2 * L / (r * r)]

    def energy(r, p):
        return perlick_hamiltonian(params.perlick, (r, p, L))

    return rhs, energy


def perlick_hamiltonian(params, state):
    """``beta^2 (1 + K r^2) p_r^2 + L^2/r^2 - sqrt(r^-2 + K) + G``.

    ``state = (r, p_r, L)``.  Accepts :class:`PerlickParams` or an
    :class:`OrbitParams` with ``model="perlick_I"``.
    """
    pp = params.perlick if isinstance(params, OrbitParams) else params
    r, p, L = state
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")
    disc = 1 + pp.K * r * r
    if np.any(disc <= 0):
        raise DomainError("1 + K r^2 must be positive")
    return float(pp.beta) ** 2 * disc * p * p + L * L / (r * r) - np.sqrt(r ** -2.0 + pp.K) + pp.G


def perlick_hamiltonian_flat(params, state):
    """The same Hamiltonian in the conformally flat chart.

    ``state = (rtilde, p_rtilde, L)`` and
    ``H = 1/4 rt^2 (rt^-b - K rt^b)^2 |p|^2 - 1/2 (rt^-b + K rt^b) + G``
    with ``|p|^2 = p_rtilde^2 + L^2 / rt^2``.
    """
    pp = params.perlick if isinstance(params, OrbitParams) else params
    rt, p, L = state
    b = float(pp.beta)
    tb = rt**b
    p2 = p * p + L * L / (rt * rt)
    return 0.25 * rt * rt * (1 / tb - pp.K * tb) ** 2 * p2 - 0.5 * (1 / tb + pp.K * tb) + pp.G


def flat_to_radial_state(params, state):
    """Map ``(rtilde, p_rtilde, L)`` to ``(r, p_r, L)``; ``p`` transforms as a covector."""
    pp = params.perlick if isinstance(params, OrbitParams) else params
    rt, p, L = state
    r = perlick_radius(pp, rt)
    return r, p * perlick_drtilde_dr(pp, r), L


def null_hamiltonian(params, state, alpha=0.0):
    """``r^2 (r^-b - K r^b)^2 |p|^2 + alpha`` with ``|p|^2 = p_r^2 + L^2/r^2``."""
    pp = params.perlick if isinstance(params, OrbitParams) else params
    r, p, L = state
    return kinetic_factor(pp, r) * (p * p + L * L / (r * r)) + alpha


def kinetic_factor(params, r):
    """``r^2 (r^-b - K r^b)^2``."""
    pp = params.perlick if isinstance(params, OrbitParams) else params
    r = np.asarray(r, dtype=float)
    b = pp.beta.numerator / pp.beta.denominator
    rb = np.exp(b * np.log(r))
    out = r * r * (1 / rb - pp.K * rb) ** 2
    return float(out) if out.ndim == 0 else out


def stackel_factor(params, r):
    """``U = -1/2 (r^-b + K r^b) + G``."""
    pp = params.perlick if isinstance(params, OrbitParams) else params
    b = pp.beta.numerator / pp.beta.denominator
    rb = math.exp(b * math.log(r))
    return -0.5 * (1 / rb + pp.K * rb) + pp.G


def stackel_type2(params, state, alpha=0.0):
    """Conformal Staeckel transform ``H_II = H / U`` of the null Hamiltonian.

    Raises
    ------
    ZeroConformalFactorError
        If ``U`` vanishes at ``state``.
    """
    r = state[0]
    if not r > 0:
        raise DomainError("r must be positive")
    u = stackel_factor(params, r)
    if u == 0:
        raise ZeroConformalFactorError(f"U vanishes at r={r}")
    return null_hamiltonian(params, state, alpha) / u


# ---------------------------------------------------------------------------
# integration

@dataclass(frozen=True)
class Trajectory:
    """Samples ``(t, r, phi, p_r)`` with the dense interpolant kept alongside."""

    t: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    p_r: np.ndarray = field(repr=False)
    energy0: float
    status: str = "ok"
    dense: object = field(default=None, repr=False, compare=False)
    params: object = field(default=None, repr=False)

    @property
    def samples(self):
        return list(zip(self.t.tolist(), self.r.tolist(), self.phi.tolist(), self.p_r.tolist()))

    @property
    def terminated(self):
        return self.status != "ok"

    def state(self, t):
        """Dense-output state ``(r, p_r, phi)`` at time(s) ``t``."""
        return self.dense(t)


def _system(params):
    if params.model == "tietz_newtonian":
        return _newtonian_rhs(params)
    return _perlick_rhs(params)


def integrate_orbit(params, x0=None, t_max=None, tol=1e-10, p_r0=0.0, phi0=0.0):
    """Integrate one orbit.

    Parameters
    ----------
    params : OrbitParams
    x0 : float, optional
        Launch radius in units of ``a``.  Defaults to the perihelion of the
        zero-energy orbit (``delta >= 1`` required).
    t_max : float, optional
        Defaults to 1.25 times :func:`period_formula` (Newtonian model).
    tol : float
        Energy tolerance; the integrator runs at ``tol / 100``.

    Returns
    -------
    Trajectory
        ``status`` is ``"collision"`` or ``"escape"`` if the run stopped at
        ``r < 1e-9 a`` or ``r > 1e6 a``.
    """
    if x0 is None:
        x0 = perihelion(params)
    if not x0 > 0:
        raise DomainError("x0 must be positive")
    if t_max is None:
        if params.model != "tietz_newtonian":
            raise DomainError("t_max is required for this model")
        t_max = 1.25 * period_formula(params)
    if not t_max > 0:
        raise DomainError("t_max must be positive")
    rhs, energy = _system(params)
    a = params.a

    def collision(t, y):
        return y[0] - 1e-9 * a

    def escape(t, y):
        return y[0] - 1e6 * a

    collision.terminal = escape.terminal = True
    y0 = [x0 * a, p_r0, phi0]
    rtol = max(tol / 100, 1e-13)
    sol = integrate.solve_ivp(rhs, (0.0, t_max), y0, method="DOP853", rtol=rtol, atol=rtol,
                              dense_output=True, events=(collision, escape))
    status = "ok"
    if sol.status == 1:
        status = "collision" if len(sol.t_events[0]) else "escape"
    elif sol.status < 0:
        raise RuntimeError(sol.message)
    return Trajectory(sol.t, sol.y[0], sol.y[2], sol.y[1], float(energy(x0 * a, p_r0)),
                      status, sol.sol, params)


def reverse_integrate(traj):
    """Integrate from the final state back to ``t = 0``; returns ``(r, p_r, phi)``."""
    rhs, _ = _system(traj.params)
    y_end = [traj.r[-1], traj.p_r[-1], traj.phi[-1]]
    rtol = 1e-13
    sol = integrate.solve_ivp(rhs, (traj.t[-1], 0.0), y_end, method="DOP853", rtol=rtol, atol=rtol)
    return sol.y[0, -1], sol.y[1, -1], sol.y[2, -1]


# ---------------------------------------------------------------------------
# analysis

@dataclass(frozen=True)
class OrbitAnalysis:
    closed: bool
    period: float | None
    self_intersections: int
    orbit_residual: float
    energy_drift: float
    closure_distance: float = math.nan

    def __post_init__(self):
        if self.closed != (self.period is not None):
            raise DomainError("period must be present exactly when the orbit is closed")


def _wrap(angle):
    return (angle + math.pi) % (2 * math.pi) - math.pi


def _closure_candidates(traj):
    """Upward zero crossings of ``p_r`` and full turns of ``phi``, in time order."""
    t, p, phi = traj.t, traj.p_r, traj.phi
    out = []

    def root(f, i):
        try:
            return optimize.brentq(f, t[i], t[i + 1], xtol=1e-14, rtol=1e-15)
        except ValueError:
            return None

    for i in range(len(t) - 1):
        if p[i] < 0 <= p[i + 1]:
            out.append(root(lambda s: traj.dense(s)[1], i))
    turns = (phi - phi[0]) / (2 * math.pi)
    for i in range(len(t) - 1):
        lo, hi = sorted((turns[i], turns[i + 1]))
        for m in range(math.floor(lo) + 1, math.floor(hi) + 1):
            if m != 0:
                out.append(root(lambda s, m=m: traj.dense(s)[2] - phi[0] - 2 * math.pi * m, i))
    return sorted(c for c in out if c is not None and c > 0)


def phase_distance(traj, t):
    r, p, phi = traj.dense(t)
    a = traj.params.a
    return math.sqrt(((r - traj.r[0]) / a) ** 2 + (p - traj.p_r[0]) ** 2 + _wrap(phi - traj.phi[0]) ** 2)


def count_self_intersections(x, y, closed=True):
    """Transverse crossings of the polyline through ``(x, y)``.

    Segment ``i`` joins point ``i`` to point ``i+1``, cyclically when
    ``closed``.  Adjacent segments are skipped and only strict crossings
    count, so touching at an endpoint is not a crossing.
    """
    P = np.column_stack([x, y])
    Q = np.roll(P, -1, axis=0)
    if not closed:
        P, Q = P[:-1], Q[:-1]
    n = len(P)
    total = 0

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    idx = np.arange(n)
    for start in range(0, n, 256):
        i = idx[start:start + 256, None]
        j = idx[None, :]
        mask = (j > i + 1) & ~(closed & (i == 0) & (j == n - 1))
        a1, b1 = P[i], Q[i]
        a2, b2 = P[j], Q[j]
        o1 = orient(a1, b1, a2)
        o2 = orient(a1, b1, b2)
        o3 = orient(a2, b2, a1)
        o4 = orient(a2, b2, b1)
        hit = (o1 * o2 < 0) & (o3 * o4 < 0) & mask
        total += int(np.count_nonzero(hit))
    return total


def analyze(traj, params=None):
    """Closure, period, self-intersections, orbit residual and energy drift."""
    params = traj.params if params is None else params
    _, energy = _system(params)
    ts = np.linspace(traj.t[0], traj.t[-1], 20 * POLYLINE_POINTS)
    r, p, phi = traj.dense(ts)
    drift = float(np.max(np.abs(energy(r, p) - traj.energy0)))

    period = None
    best = math.inf
    for c in _closure_candidates(traj):
        d = phase_distance(traj, c)
        best = min(best, d)
        if d <= CLOSURE_TOL:
            period = c
            break
    closed = period is not None

    span = period if closed else traj.t[-1]
    tp = np.linspace(0.0, span, POLYLINE_POINTS, endpoint=not closed)
    rp, _, php = traj.dense(tp)
    xs, ys = rp * np.cos(php), rp * np.sin(php)
    crossings = count_self_intersections(xs, ys, closed=closed)

    if params.model == "tietz_newtonian":
        d = params.delta
        x = rp / params.a
        resid = float(np.max(np.abs(x + 1 / x - (d + 1) - (d - 1) * np.cos(php - traj.phi[0]))))
    else:
        resid = math.nan
    return OrbitAnalysis(closed, period, crossings, resid, drift, best)


def orbit_polyline(traj, period=None, points=POLYLINE_POINTS):
    """``(x, y)`` samples over one period (or the whole run)."""
    span = traj.t[-1] if period is None else period
    tp = np.linspace(0.0, span, points, endpoint=period is None)
    r, _, phi = traj.dense(tp)
    return r * np.cos(phi), r * np.sin(phi)
