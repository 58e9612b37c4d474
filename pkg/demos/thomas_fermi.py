"""
Thomas-Fermi screening and the Tietz curve
==========================================

The universal screening function is found by shooting on its initial
slope; the one-parameter Tietz form is then compared with it.
"""

import numpy as np

from bertrand_atoms.atomstat import screening_length, solve_tf, tietz_phi, tietz_potential

sol = solve_tf(x_max=50.0)
print(f"initial slope phi'(0) = {sol.slope0:.8f}, phi(x_max) = {sol.boundary:.1e}")

x = np.array([0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0])
print("    x     phi_TF   phi_Tietz    diff")
for xi, a, b in zip(x, sol(x), tietz_phi(x)):
    print(f"{xi:5.1f}  {a:9.5f}  {b:9.5f}  {b - a:+.4f}")

# the largest gap sits close to the nucleus, where the Tietz slope is too shallow
grid = np.linspace(0, 10, 4001)
gap = np.abs(tietz_phi(grid) - sol(grid))
print(f"sup |diff| on [0,10] = {gap.max():.4f} at x = {grid[gap.argmax()]:.3f}")

# screened potential of mercury against bare Coulomb
Z = 80
a = screening_length(Z)
for r in (0.01 * a, a, 10 * a):
    print(f"r = {r:.4f}: V / V_coulomb = {tietz_potential(r, Z) / (-Z / r):.4f}")
