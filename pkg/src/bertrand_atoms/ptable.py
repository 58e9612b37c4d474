"""
Aufbau machine for idealized periodic tables.

Orbitals are filled in the order given by one of the rules in ``RULES``,
from Fock's n-rule up to the Madelung (n + l, n) rule.  Period lengths
follow either the left-step layout (one period per value of ``n + l``) or
the conventional one (a new period at every s orbital).
"""

from dataclasses import dataclass
import warnings

from .errors import DomainError
from .spectra import orbital_letter

RULES = ("fock_n", "nl", "madelung")
N_MAX = 12


class ExtrapolationWarning(UserWarning):
    """Result lies beyond the known elements."""


@dataclass(frozen=True, order=True)
class Orbital:
    n: int
    l: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n}")
        if int(self.l) != self.l or not 0 <= self.l <= self.n - 1:
            raise DomainError(f"l must satisfy 0 <= l <= n-1, got {self.l}")

    @property
    def capacity(self):
        return 2 * (2 * self.l + 1)

    @property
    def label(self):
        return f"{self.n}{orbital_letter(self.l)}"

    def __str__(self):
        return self.label


def _sort_key(rule):
    if rule == "madelung":
        return lambda o: (o.n + o.l, o.n)
    if rule in ("nl", "fock_n"):
        # Fock's rule fixes only n; within a shell l ascends
        return lambda o: (o.n, o.l)
    raise DomainError(f"unknown rule {rule!r}")


def _complete_orbitals(rule):
    # orbitals whose position in the order cannot change when n grows past N_MAX
    if rule == "madelung":
        return [Orbital(n, l) for n in range(1, N_MAX + 1) for l in range(n) if n + l <= N_MAX]
    _sort_key(rule)
    return [Orbital(n, l) for n in range(1, N_MAX + 1) for l in range(n)]


def filling_order(rule, count):
    """The first ``count`` orbitals in the order of ``rule``."""
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count}")
    order = sorted(_complete_orbitals(rule), key=_sort_key(rule))
    if count > len(order):
        raise DomainError(f"only {len(order)} orbitals are available with n <= {N_MAX}")
    return order[:count]


def group_key(orbital, rule):
    """``n + l`` for ``madelung``/``janet``, ``n`` otherwise."""
    if rule in ("madelung", "janet"):
        return orbital.n + orbital.l
    if rule in ("nl", "fock_n", "conventional"):
        return orbital.n
    raise DomainError(f"unknown rule {rule!r}")


@dataclass(frozen=True)
class Configuration:
    Z: int
    rule: str
    shells: tuple

    def __post_init__(self):
        if sum(occ for _, occ in self.shells) != self.Z:
            raise DomainError("occupancies must sum to Z")
        for orb, occ in self.shells:
            if not 1 <= occ <= orb.capacity:
                raise DomainError(f"occupancy {occ} invalid for {orb}")

    def __str__(self):
        return " ".join(f"{orb.label}{occ}" for orb, occ in self.shells)

    @property
    def last(self):
        return self.shells[-1]


def configuration(Z, rule="madelung"):
    """Fill orbitals in ``rule`` order until ``Z`` electrons are placed."""
    if int(Z) != Z or Z < 1:
        raise DomainError(f"Z must be an integer >= 1, got {Z}")
    shells = []
    left = int(Z)
    for orb in sorted(_complete_orbitals(rule), key=_sort_key(rule)):
        if left == 0:
            break
        occ = min(left, orb.capacity)
        shells.append((orb, occ))
        left -= occ
    if left:
        raise DomainError(f"Z={Z} exceeds the tabulated orbitals")
    return Configuration(int(Z), rule, tuple(shells))


def period_lengths(style="janet", n_periods=None):
    """Period lengths in the left-step (``janet``) or conventional layout.

    Left-step period ``N`` holds the orbitals with ``n + l = N``.  A
    conventional period starts at each s orbital of the Madelung order.
    Asking for more than the known periods (8 left-step, 7 conventional)
    extrapolates with the same grouping and emits
    :class:`ExtrapolationWarning`.
    """
    known = {"janet": 8, "conventional": 7}
    if style not in known:
        raise DomainError(f"unknown style {style!r}")
    n_periods = known[style] if n_periods is None else n_periods
    order = sorted(_complete_orbitals("madelung"), key=_sort_key("madelung"))
    if style == "janet":
        periods = {}
        for orb in order:
            periods.setdefault(orb.n + orb.l, []).append(orb)
        groups = [periods[k] for k in sorted(periods)]
    else:
        groups = []
        for orb in order:
            if orb.l == 0:
                groups.append([])
            groups[-1].append(orb)
        # the last group may be cut off by the orbital cap
        groups = groups[:-1]
    if int(n_periods) != n_periods or not 1 <= n_periods <= len(groups):
        raise DomainError(f"n_periods must be between 1 and {len(groups)}")
    if n_periods > known[style]:
        warnings.warn(f"periods beyond {known[style]} are extrapolated", ExtrapolationWarning, stacklevel=2)
    return [sum(o.capacity for o in g) for g in groups[:n_periods]]


def period_members(style="janet", n_periods=None):
    """Orbitals in each period, same grouping as :func:`period_lengths`."""
    lengths = period_lengths(style, n_periods)
    order = sorted(_complete_orbitals("madelung"), key=_sort_key("madelung"))
    out, i = [], 0
    for length in lengths:
        group, filled = [], 0
        while filled < length:
            group.append(order[i])
            filled += order[i].capacity
            i += 1
        out.append(group)
    return out
