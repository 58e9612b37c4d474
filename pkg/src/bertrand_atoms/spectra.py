"""
Closed-form level formulas.

Hydrogen in three and two dimensions, the deformed spectrum whose
degeneracy depends only on ``n_hat + l``, and the analytic coupling
constants of the zero-energy fish-eye Sturmian problems.

Units are Hartree-like (``hbar = m = 1``) with the charge ``e`` left
adjustable.  The deformed-spectrum constant ``w`` has no fixed value, so
only ratios, orderings and degeneracies of :func:`tietz_level` carry
meaning.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, UnsupportedModelError
from .specfun import gegenbauer

MODELS = ("hydrogen3d", "hydrogen2d", "tietz")


@dataclass(frozen=True, order=True)
class LevelIndex:
    """Radial node count ``n_r`` and orbital number ``l``."""

    n_r: int
    l: int

    def __post_init__(self):
        if int(self.n_r) != self.n_r or self.n_r < 0:
            raise DomainError(f"n_r must be a nonnegative integer, got {self.n_r}")
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a nonnegative integer, got {self.l}")

    @property
    def n_hat(self):
        return self.n_r + self.l + 1

    @classmethod
    def from_n_hat(cls, n_hat, l):
        return cls(n_hat - l - 1, l)

    @property
    def label(self):
        return f"{self.n_hat}{orbital_letter(self.l)}"


def orbital_letter(l):
    """Spectroscopic letter: s, p, d, f, then g, h, i, k, ... (j skipped)."""
    if l < 4:
        return "spdf"[l]
    letters = [c for c in "ghiklmnoqrtuvwxyz"]
    return letters[l - 4] if l - 4 < len(letters) else f"[{l}]"


@dataclass(frozen=True)
class SpectrumParams:
    Z: int = 1
    e: float = 1.0
    w: float = 1.0
    model: str = "tietz"

    def __post_init__(self):
        if int(self.Z) != self.Z or self.Z < 1:
            raise DomainError(f"Z must be an integer >= 1, got {self.Z}")
        if not self.w > 0:
            raise DomainError("w must be positive")
        if self.model not in MODELS:
            raise UnsupportedModelError(f"unknown model {self.model!r}")


def _coulomb_strength(params):
    return (params.Z * params.e**2) ** 2


def hydrogen_level_3d(params, n):
    """``-(Z e^2)^2 / (2 n^2)``; level ``n`` is ``n^2``-fold degenerate."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}")
    return -_coulomb_strength(params) / (2.0 * n * n)


def hydrogen_level_2d(params, l):
    """``-(Z e^2)^2 / (l + 1/2)^2``; level ``l`` is ``(2l+1)``-fold degenerate."""
    if int(l) != l or l < 0:
        raise DomainError(f"l must be an integer >= 0, got {l}")
    return -_coulomb_strength(params) / (l + 0.5) ** 2


def degeneracy(model, key):
    if model == "hydrogen3d":
        return key * key
    if model == "hydrogen2d":
        return 2 * key + 1
    if model == "tietz":
        # sum of 2l+1 over the sublevels with n_hat + l = key
        return sum(2 * l + 1 for l in range((key + 1) // 2) if key - l >= l + 1)
    raise UnsupportedModelError(f"unknown model {model!r}")


def tietz_level(params, idx):
    """Deformed level ``-Z^{7/3} e^4 / (w (n_hat + l)^2)``."""
    if not isinstance(idx, LevelIndex):
        raise DomainError("idx must be a LevelIndex")
    key = idx.n_hat + idx.l
    return -(params.Z ** (7.0 / 3.0)) * params.e**4 / (params.w * key * key)


def _gamma_fraction(gamma):
    g = Fraction(gamma).limit_denominator(16)
    if g not in (Fraction(1), Fraction(1, 2)) or abs(float(gamma) - float(g)) > 1e-12:
        raise UnsupportedModelError(f"gamma must be 1 or 1/2, got {gamma}")
    return g


def coupling_key(gamma, idx):
    """Degeneracy key: ``n_r + l`` for gamma = 1, ``n_r + 2l`` for gamma = 1/2."""
    g = _gamma_fraction(gamma)
    return idx.n_r + idx.l if g == 1 else idx.n_r + 2 * idx.l


def fisheye_coupling_law(gamma, idx):
    """Quantized coupling of the zero-energy fish-eye Sturmian problem.

    ``gamma = 1``: ``(2N+1)(2N+3)`` with ``N = n_r + l``.
    ``gamma = 1/2``: ``(M+1)(M+2)`` with ``M = n_r + 2l``.
    """
    key = coupling_key(gamma, idx)
    if _gamma_fraction(gamma) == 1:
        return float((2 * key + 1) * (2 * key + 3))
    return float((key + 1) * (key + 2))


def fisheye_eigenfunction(gamma, idx, r):
    """Unnormalized closed-form radial function ``u(r)`` for the coupling above.

    ``gamma = 1``: ``r^{l+1} (1+r^2)^{-(2l+1)/2} C_{n_r}^{l+1}(xi)``, ``xi = (1-r^2)/(1+r^2)``.
    ``gamma = 1/2``: ``r^{l+1} (1+r)^{-(2l+1)} C_{n_r}^{2l+3/2}(xi)``, ``xi = (1-r)/(1+r)``.
    """
    g = _gamma_fraction(gamma)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radius must be nonnegative")
    l, n_r = idx.l, idx.n_r
    if g == 1:
        s = r * r
        xi = (1 - s) / (1 + s)
        out = r ** (l + 1) * (1 + s) ** (-(2 * l + 1) / 2) * gegenbauer(n_r, l + 1, xi)
    else:
        xi = (1 - r) / (1 + r)
        out = r ** (l + 1) * (1 + r) ** (-(2 * l + 1)) * gegenbauer(n_r, 2 * l + 1.5, xi)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Level:
    index: LevelIndex
    energy: float
    group_key: int


def level_ordering(params, model=None, count=10):
    """The ``count`` lowest levels, ascending in energy.

    ``tietz`` lists every ``(n_hat, l)`` sublevel with ties broken by
    ascending ``n_hat`` and group key ``n_hat + l``.  ``hydrogen3d`` lists one
    entry per shell ``n`` (represented by ``l = 0``) with key ``n``;
    ``hydrogen2d`` one entry per ``l`` with key ``l``.
    """
    model = params.model if model is None else model
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    if model == "hydrogen3d":
        return [Level(LevelIndex(n - 1, 0), hydrogen_level_3d(params, n), n)
                for n in range(1, count + 1)]
    if model == "hydrogen2d":
        return [Level(LevelIndex(0, l), hydrogen_level_2d(params, l), l)
                for l in range(count)]
    if model != "tietz":
        raise UnsupportedModelError(f"unknown model {model!r}")
    out = []
    key = 1
    while len(out) < count:
        # sublevels of one key, n_hat descending in l means ascending n_hat
        for l in range((key - 1) // 2, -1, -1):
            idx = LevelIndex.from_n_hat(key - l, l)
            out.append(Level(idx, tietz_level(params, idx), key))
            if len(out) == count:
                break
        key += 1
    return out
