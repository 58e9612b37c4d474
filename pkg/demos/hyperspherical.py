"""
Hyperspherical harmonics and momentum space
===========================================

The S^3 harmonics are orthonormal, and through the Fock map they give the
hydrogen momentum wave functions.
"""

import numpy as np

from bertrand_atoms.specfun import (HarmonicIndex, gegenbauer_norm_closed_form, gegenbauer_norm_integral,
                                    hyperspherical_gram, momentum_amplitude)

indices, G = hyperspherical_gram(3)
print(f"{len(indices)} harmonics with n <= 3, max |G - I| = {np.max(np.abs(G - np.eye(len(G)))):.1e}")

for l, p in [(0, 1), (3, 2), (8, 5)]:
    print(f"norm l={l} p={p}: quadrature {gegenbauer_norm_integral(l, p):.12g}"
          f"  closed {gegenbauer_norm_closed_form(l, p):.12g}")

# momentum amplitudes of the n=2 shell, normalized with weight p^2
p = np.linspace(0, 3, 7)
for l in (0, 1):
    idx = HarmonicIndex(2, l, 0)
    print(f"n=2 l={l}:", " ".join(f"{v:9.4f}" for v in momentum_amplitude(idx, p)))
