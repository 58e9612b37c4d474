import numpy as np
import pytest
from hypothesis import given, strategies as st

from bertrand_atoms.errors import DomainError, UnsupportedModelError
from bertrand_atoms.spectra import (
    LevelIndex, SpectrumParams, coupling_key, degeneracy, fisheye_coupling_law,
    fisheye_eigenfunction, hydrogen_level_2d, hydrogen_level_3d, level_ordering,
    orbital_letter, tietz_level,
)

H = SpectrumParams(model="hydrogen3d")


def test_level_index():
    idx = LevelIndex(1, 2)
    assert idx.n_hat == 4 and idx.label == "4d"
    assert LevelIndex.from_n_hat(3, 1) == LevelIndex(1, 1)
    with pytest.raises(DomainError):
        LevelIndex(-1, 0)
    with pytest.raises(DomainError):
        LevelIndex.from_n_hat(1, 1)


def test_orbital_letters():
    assert [orbital_letter(l) for l in range(8)] == list("spdfghik")


def test_params_validation():
    with pytest.raises(DomainError):
        SpectrumParams(Z=0)
    with pytest.raises(DomainError):
        SpectrumParams(w=0)
    with pytest.raises(UnsupportedModelError):
        SpectrumParams(model="helium")


def test_hydrogen_3d_examples():
    assert hydrogen_level_3d(H, 1) == -0.5
    assert hydrogen_level_3d(H, 2) == -0.125
    assert hydrogen_level_3d(SpectrumParams(Z=2), 1) == -2.0
    assert degeneracy("hydrogen3d", 3) == 9
    with pytest.raises(DomainError):
        hydrogen_level_3d(H, 0)


def test_hydrogen_2d_examples():
    assert hydrogen_level_2d(H, 0) == -4.0
    assert hydrogen_level_2d(H, 1) == pytest.approx(-4 / 9, rel=1e-15)
    for l in range(51):
        assert (l + 0.5) ** 2 == l * (l + 1) + 0.25
    with pytest.raises(DomainError):
        hydrogen_level_2d(H, -1)


@pytest.mark.parametrize("Z", [1, 3, 7])
def test_2d_is_3d_at_half_integer(Z):
    p = SpectrumParams(Z=Z, e=1.3)
    for l in range(20):
        n = l + 0.5
        assert hydrogen_level_2d(p, l) == 2 * (-((Z * 1.3**2) ** 2) / (2 * n * n))


def test_tietz_examples():
    p = SpectrumParams()
    assert tietz_level(p, LevelIndex.from_n_hat(1, 0)) == -1.0
    e30 = tietz_level(p, LevelIndex.from_n_hat(3, 0))
    e21 = tietz_level(p, LevelIndex.from_n_hat(2, 1))
    assert e30 == e21 == pytest.approx(-1 / 9)
    ratio = tietz_level(SpectrumParams(Z=8), LevelIndex(0, 0)) / tietz_level(p, LevelIndex(0, 0))
    assert ratio == pytest.approx(128.0, rel=1e-13)
    with pytest.raises(DomainError):
        tietz_level(p, (0, 0))


def test_tietz_degeneracy_bit_identical():
    p = SpectrumParams(Z=5, w=2.5)
    by_key = {}
    for n_hat in range(1, 11):
        for l in range(n_hat):
            if n_hat + l <= 10:
                by_key.setdefault(n_hat + l, set()).add(tietz_level(p, LevelIndex.from_n_hat(n_hat, l)))
    assert all(len(v) == 1 for v in by_key.values())
    for key, energies in by_key.items():
        count = sum(2 * l + 1 for n_hat in range(1, 11) for l in range(n_hat) if n_hat + l == key)
        assert degeneracy("tietz", key) == count


@pytest.mark.parametrize("model", ["hydrogen3d", "hydrogen2d", "tietz"])
def test_monotone_toward_zero(model):
    levels = level_ordering(SpectrumParams(Z=2), model, 30)
    energies = [lv.energy for lv in levels]
    keys = [lv.group_key for lv in levels]
    assert all(e < 0 for e in energies)
    assert all(a <= b for a, b in zip(energies, energies[1:]))
    for (k1, e1), (k2, e2) in zip(zip(keys, energies), zip(keys[1:], energies[1:])):
        assert (k2 > k1 and e2 > e1) or (k2 == k1 and e2 == e1)


def test_level_ordering_examples():
    levels = level_ordering(SpectrumParams(), "tietz", 5)
    assert [lv.group_key for lv in levels] == [1, 2, 3, 3, 4]
    assert [lv.index.label for lv in levels] == ["1s", "2s", "2p", "3s", "3p"]
    h = level_ordering(H, count=4)
    assert [lv.group_key for lv in h] == [1, 2, 3, 4]
    labels = [lv.index.label for lv in level_ordering(SpectrumParams(), "tietz", 20)]
    assert labels.index("4s") < labels.index("3d")
    with pytest.raises(DomainError):
        level_ordering(H, count=0)


def test_coupling_examples():
    assert fisheye_coupling_law(1, LevelIndex(0, 0)) == 3
    assert fisheye_coupling_law(0.5, LevelIndex(0, 0)) == 2
    assert fisheye_coupling_law(0.5, LevelIndex(0, 1)) == 12
    assert fisheye_coupling_law(0.5, LevelIndex(2, 0)) == 12
    with pytest.raises(UnsupportedModelError):
        fisheye_coupling_law(2, LevelIndex(0, 0))


@pytest.mark.parametrize("gamma", [1, 0.5])
def test_coupling_depends_only_on_key(gamma):
    seen = {}
    for n_r in range(9):
        for l in range(9):
            idx = LevelIndex(n_r, l)
            key = coupling_key(gamma, idx)
            if key <= 8:
                seen.setdefault(key, set()).add(fisheye_coupling_law(gamma, idx))
    assert all(len(v) == 1 for v in seen.values())
    vals = [seen[k].pop() for k in sorted(seen)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_gamma1_alternate_form():
    for N in range(10):
        assert fisheye_coupling_law(1, LevelIndex(N, 0)) == 4 * (N + 1) ** 2 - 1


def _residual(gamma, idx, r, h=1e-4):
    # u'' + beta rho(r) u - l(l+1) u / r^2 with the fish-eye weight of each family
    u = lambda x: fisheye_eigenfunction(gamma, idx, x)
    upp = (u(r + h) - 2 * u(r) + u(r - h)) / h**2
    beta = fisheye_coupling_law(gamma, idx)
    if gamma == 1:
        rho = 1 / (1 + r * r) ** 2
    else:
        rho = 1 / (r * (1 + r) ** 2)
    return upp + beta * rho * u(r) - idx.l * (idx.l + 1) * u(r) / r**2


@given(st.sampled_from([1, 0.5]), st.integers(0, 4), st.integers(0, 3), st.floats(0.2, 3.0))
def test_closed_form_eigenfunctions_solve_the_equation(gamma, n_r, l, r):
    idx = LevelIndex(n_r, l)
    scale = max(1.0, np.max(np.abs(fisheye_eigenfunction(gamma, idx, np.linspace(0.05, 5, 50)))))
    assert abs(_residual(gamma, idx, r)) <= 1e-4 * scale * (1 + fisheye_coupling_law(gamma, idx))


def test_eigenfunction_nodes():
    r = np.linspace(1e-3, 50, 20001)
    for gamma in (1, 0.5):
        for n_r in range(4):
            u = fisheye_eigenfunction(gamma, LevelIndex(n_r, 1), r)
            assert np.count_nonzero(np.diff(np.sign(u)) != 0) == n_r
