"""
Sphere maps and the so(4) algebra
=================================

Stereographic projection, the Hopf fibration, inversion and the so(4)
commutator table, each checked numerically.
"""

import numpy as np

from bertrand_atoms.geometry import (SO4_NAMES, hopf_map, invariant_battery, inversion,
                                     inversion_momentum, so4_commutator_table, stereo_r3_to_s3,
                                     stereo_s3_to_r3)

x = np.array([0.3, -0.4, 1.2])
s = stereo_r3_to_s3(x)
print("x ->", s, " |s| =", np.linalg.norm(s), " back:", stereo_s3_to_r3(s))

# a whole Hopf fiber lands on one point of S^2
z1, z2 = complex(s[0], s[1]), complex(s[2], s[3])
for phase in np.linspace(0, 2 * np.pi, 4, endpoint=False):
    w1, w2 = z1 * np.exp(1j * phase), z2 * np.exp(1j * phase)
    print(f"phase {phase:5.3f} ->", hopf_map([w1.real, w1.imag, w2.real, w2.imag]).round(12))

p = np.array([0.2, 0.1, -0.3])
print("inversion:", inversion(x), "momentum:", inversion_momentum(x, p))

table = so4_commutator_table()
for a in SO4_NAMES[3:]:
    row = []
    for b in SO4_NAMES[3:]:
        coeffs = table[(a, b)]
        row.append(" ".join(f"{'+' if c > 0 else '-'}{n}" for c, n in zip(coeffs, SO4_NAMES) if c) or "0")
    print(f"[{a}, B1..B3] =", ", ".join(f"{r:>4}" for r in row))

failed = [r["name"] for r in invariant_battery() if not r["passed"]]
print("invariant battery:", "all pass" if not failed else failed)
