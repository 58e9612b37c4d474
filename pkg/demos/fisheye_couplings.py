"""
Quantized couplings of the fish-eye problems
============================================

At zero energy the fish-eye potentials only admit bound solutions for a
discrete set of couplings.  We compute them by shooting and compare with
the closed forms, then look at which indices share a coupling.
"""

from bertrand_atoms.spectra import LevelIndex, coupling_key, fisheye_coupling_law
from bertrand_atoms.sturm import RadialProblem, eigenfunction, solve_fisheye_couplings

# gamma = 1: couplings depend on n_r + l only
for l in range(3):
    spec = solve_fisheye_couplings(RadialProblem(gamma=1, l=l), 3)
    print(f"gamma=1   l={l}:", " ".join(f"{b:10.6f}" for b in spec.betas))

# gamma = 1/2: the key becomes n_r + 2l, so l=1 joins the third s level
print()
for l in range(3):
    spec = solve_fisheye_couplings(RadialProblem(gamma=0.5, l=l), 3)
    row = []
    for e in spec.entries:
        idx = LevelIndex(e.k, l)
        row.append(f"{e.beta:9.5f} [key {coupling_key(0.5, idx)}, exact {fisheye_coupling_law(0.5, idx):g}]")
    print(f"gamma=1/2 l={l}:", "  ".join(row))

# the k-th eigenfunction has k interior nodes
problem = RadialProblem(gamma=1, l=0)
for beta in (3.0, 15.0, 35.0):
    sol = eigenfunction(problem, beta)
    print(f"beta={beta:4.0f}: nodes={sol.node_count}, match mismatch={sol.mismatch:.1e}")
