"""
Statistical atom.

The universal Thomas-Fermi screening function, the Tietz closed-form
approximation to it, screening lengths, and Tietz's counting formulas for
the number of electrons with a given ``l``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError

TIETZ_ALPHA = 0.53625
SCREENING_CONST = 0.8853
FERMI_GAMMA = Fraction("0.169")


@dataclass(frozen=True)
class TfSolution:
    """Screening function on ``grid`` with the fitted initial slope.

    ``dense`` evaluates ``(phi, phi')`` on ``[x_start, x_max]``.
    """

    grid: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    slope0: float
    x_max: float
    boundary: float
    dense: object = field(default=None, repr=False, compare=False)
    x_start: float = 0.0

    def __call__(self, x):
        """``phi(x)`` from the series near the origin and the dense solution beyond."""
        x = np.asarray(x, dtype=float)
        if np.any((x < 0) | (x > self.x_max)):
            raise DomainError("x outside the solved range")
        flat = np.atleast_1d(x).ravel()
        out = np.empty_like(flat)
        inner = flat < self.x_start
        out[inner] = [_series(v, self.slope0)[0] for v in flat[inner]]
        if np.any(~inner):
            out[~inner] = self.dense(flat[~inner])[0]
        return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)

    @property
    def phi_pp(self):
        """``phi'' = phi^{3/2} / sqrt(x)`` on the grid (0 at the origin by convention)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.clip(self.phi, 0, None) ** 1.5 / np.sqrt(self.grid)
        out[self.grid == 0] = 0.0
        return out


def _series(x, s):
    # phi = 1 + s x + 4/3 x^{3/2} + 2/5 s x^{5/2} + 1/3 x^3 near the origin
    rx = math.sqrt(x)
    phi = 1 + s * x + (4 / 3) * x * rx + 0.4 * s * x * x * rx + x**3 / 3
    dphi = s + 2 * rx + s * x * rx + x * x
    return phi, dphi


def _rhs(x, y):
    return [y[1], max(y[0], 0.0) ** 1.5 / math.sqrt(x)]


def _shoot(s, x_max, x_start, rtol, dense=False):
    def crossing(x, y):
        return y[0]

    def runaway(x, y):
        return y[0] - 2.0

    crossing.terminal = runaway.terminal = True
    crossing.direction = -1
    y0 = _series(x_start, s)
    return integrate.solve_ivp(_rhs, (x_start, x_max), list(y0), method="DOP853",
                               rtol=rtol, atol=rtol * 1e-2, events=(crossing, runaway),
                               dense_output=dense)


def solve_tf(x_max=50.0, tol=1e-6, rtol=1e-12, x_start=1e-4, n_grid=2001,
             window=(-2.0, -1.0)):
    """Solve ``phi'' = phi^{3/2} / sqrt(x)`` with ``phi(0) = 1`` and ``phi(x_max) = 0``.

    Bisection on ``phi'(0)``: a slope whose solution crosses zero before
    ``x_max`` is too steep, otherwise too shallow.  The returned profile is
    the shallow side of the final bracket, so it stays positive.

    Parameters
    ----------
    x_max : float
        Outer boundary, at least 10.
    tol : float
        Required ``phi(x_max)``.
    rtol : float
        Integrator tolerance (the refinement knob).
    x_start : float
        Where the series start hands over to the integrator.

    Raises
    ------
    ConvergenceError
        If the slope window does not bracket the boundary condition or the
        boundary value stays above ``tol``.
    """
    if not x_max > 10:
        raise DomainError("x_max must exceed 10")
    steep, shallow = window

    def too_steep(s):
        return len(_shoot(s, x_max, x_start, rtol).t_events[0]) > 0

    if not too_steep(steep) or too_steep(shallow):
        raise ConvergenceError(f"slope window {window} does not bracket the solution")
    for _ in range(200):
        mid = 0.5 * (steep + shallow)
        if mid in (steep, shallow):
            break
        if too_steep(mid):
            steep = mid
        else:
            shallow = mid
    sol = _shoot(shallow, x_max, x_start, rtol, dense=True)
    if sol.status != 0:
        raise ConvergenceError("final profile did not reach x_max")
    boundary = float(sol.y[0, -1])
    if boundary > tol:
        raise ConvergenceError(f"phi(x_max) = {boundary:.3e} exceeds tol={tol}")
    grid = np.linspace(0.0, x_max, n_grid)
    phi = np.empty_like(grid)
    inner = grid < x_start
    phi[inner] = [_series(x, shallow)[0] for x in grid[inner]]
    phi[~inner] = sol.sol(grid[~inner])[0]
    return TfSolution(grid, phi, shallow, x_max, boundary, sol.sol, x_start)


@dataclass(frozen=True)
class TietzModel:
    alpha: float = TIETZ_ALPHA
    a0: float = 1.0


def tietz_phi(x, model=None):
    """``1 / (1 + alpha x)^2``."""
    alpha = (model or TietzModel()).alpha
    x = np.asarray(x, dtype=float)
    out = 1.0 / (1 + alpha * x) ** 2
    return float(out) if out.ndim == 0 else out


def screening_length(Z, a0=1.0):
    """``0.8853 a0 Z^{-1/3}``."""
    if not Z > 0:
        raise DomainError("Z must be positive")
    return SCREENING_CONST * a0 / np.cbrt(Z)


def tietz_potential(r, Z, model=None, e=1.0):
    """``V(r) = -(Z e / r) phi_T(r / a)`` with ``a = screening_length(Z)``."""
    model = model or TietzModel()
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("r must be positive")
    a = screening_length(Z, model.a0)
    out = -(Z * e / r) * tietz_phi(r / a, model)
    return float(out) if np.ndim(out) == 0 else out


def energy_scale(Z, a0=1.0):
    """``Z * Z / a(Z)``, proportional to ``Z^{7/3}``."""
    return Z * Z / screening_length(Z, a0)


def n_l_count(Z, l):
    """``2(2l+1)(6Z)^{1/3} - 2(2l+1)^2``; negative means no electrons of this ``l`` yet."""
    if l < 0:
        raise DomainError("l must be nonnegative")
    k = 2 * l + 1
    return 2 * k * np.cbrt(6.0 * Z) - 2 * k * k


def n_l_threshold(l):
    """``Z`` at which :func:`n_l_count` vanishes: ``(2l+1)^3 / 6``."""
    return (2 * l + 1) ** 3 / 6.0


def first_z_raw(l):
    """Unrounded ``0.169 (2l+1)^3`` as an exact fraction."""
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a nonnegative integer, got {l}")
    return FERMI_GAMMA * (2 * int(l) + 1) ** 3


def first_z_for_l(l):
    """First ``Z`` with an ``l`` electron: round-half-up of the raw value, floored at 1."""
    return max(1, math.floor(first_z_raw(l) + Fraction(1, 2)))
