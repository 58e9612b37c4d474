"""
Radial Sturmian eigensolver.

The energy is held fixed and the coupling ``beta`` in front of a weight
function is quantized.  Two families are handled:

* fish-eye, ``u'' - l(l+1) u / r^2 + beta W(r) u = 0`` with
  ``W = 1/(1+r^2)^2`` (gamma = 1) or ``W = 1/(r (1+r)^2)`` (gamma = 1/2);
* Coulomb Sturmians, ``u'' = [l(l+1)/r^2 + k^2 - 2 beta / r] u``.

Method
------
With ``t = ln r`` and ``u = r^{1/2} w`` both become ``w'' = q(t) w`` with
``q = q0(t) - beta g(t)``.  On a uniform ``t`` mesh each classical RK4 step
is a 2x2 transfer matrix, built for all steps at once.  The outward
solution starts on the small-``r`` branch, the inward one on the decaying
branch at ``r_max``.  Eigenvalues are bracketed by counting the sign
changes of the outward solution (Sturm oscillation: the count equals the
number of eigenvalues below ``beta``) and refined by a root search on the
normalized Wronskian of the two solutions at the matching node.  Every
coupling is recomputed on a mesh with half the step, and the difference
is reported as its error estimate.
"""

from dataclasses import dataclass, field, replace
from fractions import Fraction
import math

import numpy as np
from scipy import integrate, optimize

from .errors import (ConvergenceError, DomainError, NotAnEigenvalueError,
                     SearchWindowError, UnsupportedModelError)

BETA_MAX = 1e4
MATCH_TOL = 1e-6


# ---------------------------------------------------------------------------
# problem descriptors

@dataclass(frozen=True)
class RadialProblem:
    """Zero-energy fish-eye Sturmian problem for one ``(gamma, l)``.

    ``r_max`` defaults to ``1e6``: both weights are symmetric under
    ``r -> 1/r`` and the mesh is log-uniform, so the grid is made symmetric
    about ``r = 1`` as well.
    """

    gamma: float = 1.0
    l: int = 0
    a: float = 1.0
    r_min: float = 1e-6
    r_max: float = 1e6
    mesh: int = 20000
    match_r: float = 1.0

    def __post_init__(self):
        g = Fraction(self.gamma).limit_denominator(16)
        if g not in (Fraction(1), Fraction(1, 2)) or abs(g - self.gamma) > 1e-12:
            raise UnsupportedModelError(f"gamma must be 1 or 1/2, got {self.gamma}")
        object.__setattr__(self, "gamma", float(g))
        _check_common(self.l, self.r_min, self.r_max, self.mesh, self.match_r)
        if not self.a > 0:
            raise DomainError("a must be positive")

    @property
    def family(self):
        return ("fisheye", self.gamma, self.l, self.a)

    def weight(self, r):
        """``W_gamma(r)`` in units where ``a`` scales the radius."""
        x = np.asarray(r, dtype=float) / self.a
        if self.gamma == 1.0:
            return 1.0 / (1 + x * x) ** 2 / self.a**2
        return 1.0 / (x * (1 + x) ** 2) / self.a**2

    def _coefficients(self, t):
        # q = q0 - beta g with g = r^2 W expressed through t = ln(r/a)
        x = t - math.log(self.a)
        q0 = np.full_like(t, (self.l + 0.5) ** 2)
        if self.gamma == 1.0:
            g = 0.25 / np.cosh(x) ** 2
        else:
            g = 0.25 / np.cosh(0.5 * x) ** 2
        return q0, g, g


@dataclass(frozen=True)
class CoulombProblem:
    """Coulomb Sturmian problem at energy ``-k^2/2``; weight ``1/r``.

    ``r_max`` defaults to ``(2 (l + count) + 40) / k`` once the number of
    requested levels is known, and ``match_r`` to ``1/k``.
    """

    k: float = 1.0
    l: int = 0
    r_min: float = 1e-6
    r_max: float | None = None
    mesh: int = 20000
    match_r: float | None = None

    def __post_init__(self):
        if not self.k > 0:
            raise DomainError("k must be positive")
        if self.match_r is None:
            object.__setattr__(self, "match_r", 1.0 / self.k)
        if self.r_max is not None:
            _check_common(self.l, self.r_min, self.r_max, self.mesh, self.match_r)

    @property
    def family(self):
        return ("coulomb", self.k, self.l)

    def sized_for(self, count):
        if self.r_max is not None:
            return self
        return replace(self, r_max=(2.0 * (self.l + count) + 40.0) / self.k)

    def weight(self, r):
        return 1.0 / np.asarray(r, dtype=float)

    def _coefficients(self, t):
        r = np.exp(t)
        q0 = (self.l + 0.5) ** 2 + (self.k * r) ** 2
        return q0, 2.0 * r, r


def _check_common(l, r_min, r_max, mesh, match_r):
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a nonnegative integer, got {l}")
    if not 0 < r_min < match_r < r_max:
        raise DomainError("require 0 < r_min < match_r < r_max")
    if int(mesh) != mesh or mesh < 1000:
        raise DomainError("mesh must be an integer >= 1000")


# ---------------------------------------------------------------------------
# results

@dataclass(frozen=True)
class CouplingEntry:
    k: int
    beta: float
    error: float


@dataclass(frozen=True)
class CouplingSpectrum:
    """Quantized couplings ordered by node count ``k``."""

    entries: tuple
    problem: object

    def __post_init__(self):
        betas = [e.beta for e in self.entries]
        if any(b <= 0 for b in betas) or any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise ConvergenceError("couplings must be positive and strictly increasing")

    @property
    def betas(self):
        return np.array([e.beta for e in self.entries])

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class SturmianSolution:
    """Normalized radial function on the solver mesh.

    ``u`` is normalized to ``int u^2 w(r) dr = 1`` with the problem's
    orthogonality weight (``W_gamma`` or ``1/r``).
    """

    beta: float
    r: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    node_count: int
    problem: object = field(repr=False)
    mismatch: float = 0.0

    @property
    def u_samples(self):
        return list(zip(self.r.tolist(), self.u.tolist()))


# ---------------------------------------------------------------------------
# mesh and transfer matrices

@dataclass(frozen=True)
class _Mesh:
    t: np.ndarray
    h: float
    match: int
    q0: np.ndarray       # at nodes
    q0_mid: np.ndarray   # at midpoints
    g: np.ndarray
    g_mid: np.ndarray
    omega: np.ndarray    # orthogonality weight in t at nodes


def _build_mesh(problem, mesh=None):
    n = problem.mesh if mesh is None else mesh
    t0, t1 = math.log(problem.r_min), math.log(problem.r_max)
    t = np.linspace(t0, t1, n + 1)
    h = (t1 - t0) / n
    match = int(round((math.log(problem.match_r) - t0) / h))
    match = min(max(match, 1), n - 1)
    q0, g, omega = problem._coefficients(t)
    q0m, gm, _ = problem._coefficients(t[:-1] + 0.5 * h)
    return _Mesh(t, h, match, q0, q0m, g, gm, omega)


def _rk4_matrices(qa, qb, qc, h):
    """RK4 step matrices for ``y' = [[0, 1], [q, 0]] y`` (one per step)."""
    n = qa.shape[0]

    def amat(q):
        m = np.zeros((n, 2, 2))
        m[:, 0, 1] = 1.0
        m[:, 1, 0] = q
        return m

    eye = np.broadcast_to(np.eye(2), (n, 2, 2))
    Aa, Ab, Ac = amat(qa), amat(qb), amat(qc)
    K1 = Aa
    K2 = Ab @ (eye + 0.5 * h * K1)
    K3 = Ab @ (eye + 0.5 * h * K2)
    K4 = Ac @ (eye + h * K3)
    return eye + (h / 6.0) * (K1 + 2 * K2 + 2 * K3 + K4)


def _tree_product(mats):
    """``M_{n-1} ... M_1 M_0`` by pairwise reduction."""
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            mats = np.concatenate([mats, np.eye(2)[None]], axis=0)
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def _prefix_products(mats):
    """``P_j = M_j ... M_0`` for all ``j`` (Hillis-Steele scan)."""
    p = mats.copy()
    s = 1
    while s < p.shape[0]:
        p[s:] = p[s:] @ p[:-s]
        s *= 2
    return p


class _Shooter:
    """Everything that depends on ``beta`` for a fixed mesh."""

    def __init__(self, problem, mesh=None):
        self.problem = problem
        self.m = _build_mesh(problem, mesh)

    def _q(self, beta):
        m = self.m
        return m.q0 - beta * m.g, m.q0_mid - beta * m.g_mid

    def _start(self, q, sign):
        # WKB branch e^{sign sqrt(q) t}; q > 0 at both ends for every beta used
        s = math.sqrt(max(q, 1e-300))
        return np.array([1.0, sign * s])

    def forward(self, beta, lo=0, hi=None):
        m = self.m
        hi = len(m.t) - 1 if hi is None else hi
        q, qm = self._q(beta)
        return _rk4_matrices(q[lo:hi], qm[lo:hi], q[lo + 1:hi + 1], m.h)

    def backward(self, beta, lo, hi=None):
        # steps from node hi down to node lo, in that order
        m = self.m
        hi = len(m.t) - 1 if hi is None else hi
        q, qm = self._q(beta)
        return _rk4_matrices(q[hi:lo:-1], qm[hi - 1:lo - 1 if lo else None:-1],
                             q[hi - 1:lo - 1 if lo else None:-1], -m.h)

    def outward_values(self, beta):
        """Outward solution at every node."""
        q, _ = self._q(beta)
        y0 = self._start(q[0], +1.0)
        p = _prefix_products(self.forward(beta))
        ys = np.concatenate([y0[None], p @ y0], axis=0)
        return ys

    def node_count(self, beta):
        w = self.outward_values(beta)[:, 0]
        s = np.sign(w)
        s = s[s != 0]
        return int(np.count_nonzero(s[1:] != s[:-1]))

    def mismatch(self, beta):
        """Normalized Wronskian of the outward and inward states at the match node."""
        m = self.m
        q, _ = self._q(beta)
        yo = _tree_product(self.forward(beta, 0, m.match)) @ self._start(q[0], +1.0)
        yi = _tree_product(self.backward(beta, m.match)) @ self._start(q[-1], -1.0)
        wr = yo[0] * yi[1] - yo[1] * yi[0]
        return wr / (np.hypot(*yo) * np.hypot(*yi))

    def solution(self, beta):
        """Matched, unnormalized ``w`` on all nodes."""
        m = self.m
        q, _ = self._q(beta)
        y0 = self._start(q[0], +1.0)
        po = _prefix_products(self.forward(beta, 0, m.match))
        yo = np.concatenate([y0[None], po @ y0], axis=0)
        y1 = self._start(q[-1], -1.0)
        pi = _prefix_products(self.backward(beta, m.match))
        yi = np.concatenate([y1[None], pi @ y1], axis=0)[::-1]
        # scale the inward branch onto the outward state at the match node
        c = float(yo[-1] @ yi[0]) / float(yi[0] @ yi[0])
        return np.concatenate([yo[:, 0], c * yi[1:, 0]])


# ---------------------------------------------------------------------------
# eigenvalue search

def _find_couplings(shooter, count, beta_max=BETA_MAX):
    counts = {0.0: 0}

    def n_at(beta):
        if beta not in counts:
            counts[beta] = shooter.node_count(beta)
        return counts[beta]

    # an irrational start keeps the doubling grid off exact eigenvalues such as n k
    hi = min(math.pi / 4, beta_max)
    while n_at(hi) < count:
        if hi >= beta_max:
            raise SearchWindowError(
                f"only {n_at(beta_max)} couplings below beta_max={beta_max}",
                {"beta_max": beta_max, "counts": dict(sorted(counts.items()))})
        hi = min(2.0 * hi, beta_max)
    found = []
    for k in range(count):
        # tightest known bracket with n(lo) <= k < n(hi)
        lo = max(b for b, c in counts.items() if c <= k)
        hi = min(b for b, c in counts.items() if c > k)
        while n_at(hi) - n_at(lo) > 1 or hi - lo > 1e-6 * hi:
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                raise ConvergenceError(f"node count jumps by {n_at(hi) - n_at(lo)} at beta={hi}")
            if n_at(mid) <= k:
                lo = mid
            else:
                hi = mid
        found.append(_refine(shooter, lo, hi))
    return found


def _refine(shooter, lo, hi, beta_max=BETA_MAX):
    width = hi - lo
    a, b = lo, hi
    fa, fb = shooter.mismatch(a), shooter.mismatch(b)
    for _ in range(40):
        if fa == 0:
            return a
        if fb == 0:
            return b
        if fa * fb < 0:
            return optimize.brentq(shooter.mismatch, a, b, xtol=1e-15, rtol=1e-15, maxiter=200)
        a, b = max(a - width, 0.0), min(b + width, beta_max)
        width *= 2
        fa, fb = shooter.mismatch(a), shooter.mismatch(b)
    raise ConvergenceError(f"no matching root near beta in [{lo}, {hi}]")


def _refine_near(shooter, beta):
    d = 1e-6 * beta
    return _refine(shooter, beta - d, beta + d)


def _solve(problem, count, beta_max=BETA_MAX):
    if int(count) != count or count < 1:
        raise DomainError("count must be a positive integer")
    coarse = _find_couplings(_Shooter(problem), count, beta_max)
    fine_shooter = _Shooter(problem, 2 * problem.mesh)
    entries = []
    for k, b in enumerate(coarse):
        bf = _refine_near(fine_shooter, b)
        entries.append(CouplingEntry(k, bf, abs(bf - b)))
    return CouplingSpectrum(tuple(entries), problem)


def solve_fisheye_couplings(problem, count, beta_max=BETA_MAX):
    """The ``count`` lowest quantized couplings of a fish-eye problem.

    Parameters
    ----------
    problem : RadialProblem
    count : int
    beta_max : float
        Upper end of the search window.

    Returns
    -------
    CouplingSpectrum
        Entry ``k`` has ``k`` interior nodes; ``error`` is the change under
        halving the step.
    """
    if not isinstance(problem, RadialProblem):
        raise DomainError("expected a RadialProblem")
    return _solve(problem, count, beta_max)


def solve_coulomb_sturmian(k, l, count, problem=None, beta_max=BETA_MAX):
    """Couplings ``beta_n`` of the Coulomb Sturmian problem, ``n = l+1, ..., l+count``."""
    problem = CoulombProblem(k=k, l=l) if problem is None else problem
    return _solve(problem.sized_for(count), count, beta_max)


def eigenfunction(problem, beta, tol=MATCH_TOL):
    """Matched radial function ``u(r)`` at an eigenvalue ``beta``.

    Raises
    ------
    NotAnEigenvalueError
        If the normalized Wronskian at the match node exceeds ``tol``.
    """
    if isinstance(problem, CoulombProblem) and problem.r_max is None:
        n_guess = max(int(round(beta / problem.k)) - problem.l, 1)
        problem = problem.sized_for(n_guess)
    shooter = _Shooter(problem)
    mis = float(shooter.mismatch(beta))
    if abs(mis) > tol:
        raise NotAnEigenvalueError(f"beta={beta} is not an eigenvalue (mismatch {mis:.3e})")
    w = shooter.solution(beta)
    m = shooter.m
    r = np.exp(m.t)
    norm2 = integrate.simpson(m.omega * w * w, dx=m.h)
    w = w / math.sqrt(norm2)
    u = np.sqrt(r) * w
    # fix the sign so u > 0 near the origin
    first = u[np.argmax(np.abs(u) > 1e-8 * np.max(np.abs(u)))]
    u = u * math.copysign(1.0, first)
    return SturmianSolution(beta, r, u, _sign_changes(u), problem, mis)


def _sign_changes(u):
    big = u[np.abs(u) > 1e-10 * np.max(np.abs(u))]
    s = np.sign(big)
    return int(np.count_nonzero(s[1:] != s[:-1]))


def weighted_orthogonality(sol_a, sol_b, problem=None):
    """``int u_a u_b w(r) dr`` with the problem's orthogonality weight."""
    pa, pb = sol_a.problem, sol_b.problem
    if pa.family != pb.family or sol_a.r.shape != sol_b.r.shape or not np.allclose(sol_a.r, sol_b.r, rtol=1e-14):
        raise DomainError("solutions belong to different problems or meshes")
    if problem is not None and problem.family != pa.family:
        raise DomainError("problem does not match the solutions")
    t = np.log(sol_a.r)
    omega = sol_a.r * sol_a.r * pa.weight(sol_a.r)
    # u_a u_b W dr = r^2 W w_a w_b dt with u = r^{1/2} w
    integrand = omega * sol_a.u * sol_b.u / sol_a.r
    return float(integrate.simpson(integrand, dx=t[1] - t[0]))
