"""
Filling rules and period lengths
================================

Three filling rules are compared; the Madelung order reproduces the left-step
period sequence, and the deformed level formula reproduces the Madelung order.
"""

from bertrand_atoms.atomstat import first_z_for_l, first_z_raw, n_l_count
from bertrand_atoms.ptable import configuration, filling_order, period_lengths
from bertrand_atoms.spectra import SpectrumParams, level_ordering

for rule in ("fock_n", "nl", "madelung"):
    print(f"{rule:9}", " ".join(o.label for o in filling_order(rule, 12)))

print()
print("K  (madelung):", configuration(19, "madelung"))
print("K  (nl)      :", configuration(19, "nl"))

print()
print("left-step periods   :", period_lengths("janet"))
print("conventional periods:", period_lengths("conventional"))

# levels of the deformed spectrum, grouped by n_hat + l
levels = level_ordering(SpectrumParams(), "tietz", 12)
print("deformed spectrum   :", " ".join(lv.index.label for lv in levels))

# where each l first appears
for l in range(5):
    print(f"l={l}: raw {float(first_z_raw(l)):7.3f} -> Z = {first_z_for_l(l):3d}"
          f"   N_l(Z=80) = {n_l_count(80, l):7.3f}")
