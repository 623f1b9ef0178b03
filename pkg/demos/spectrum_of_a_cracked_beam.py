"""
Natural frequencies of a cracked steel beam
===========================================

A hinged steel beam, 2 m long, with two cracks of increasing depth.
"""

import numpy as np

from crackdyn import CrackSpec, PhysicalBeam, find_eigenvalues, natural_frequencies, nondimensionalize

# a 2 cm high rectangular section; the double-sided formula wants the half-height
beam = dict(length=2.0, youngs_modulus=2.1e11, area_moment=6.67e-9, cross_section_area=2e-4,
            density=7850.0, section_height=0.01)

intact, summary = nondimensionalize(PhysicalBeam(**beam))
print(f"omega0 = {summary.omega0:.3f} rad/s, r = {summary.gyration_radius * 1e3:.3f} mm")

lam0 = find_eigenvalues(intact, 4)
print("intact:", np.round(natural_frequencies(lam0, PhysicalBeam(**beam)), 3))

# deepen both cracks together and watch the spectrum drop
for depth in (0.1, 0.3, 0.5, 0.7):
    cracks = (CrackSpec(0.5, "double_sided", depth_ratio=depth),
              CrackSpec(1.3, "double_sided", depth_ratio=depth))
    pb = PhysicalBeam(**beam, cracks=cracks)
    model, _ = nondimensionalize(pb)
    lam = find_eigenvalues(model, 4)
    drop = 100 * (1 - np.array(lam) ** 2 / np.array(lam0) ** 2)
    print(f"a/H = {depth}: theta = {np.round(model.flexibilities, 4)}, "
          f"frequency drop % = {np.round(drop, 2)}")

# a single crack at midspan leaves the antisymmetric modes alone
pb = PhysicalBeam(**beam, cracks=(CrackSpec(1.0, "double_sided", depth_ratio=0.5),))
model, _ = nondimensionalize(pb)
print("midspan crack, lambda:", np.round(find_eigenvalues(model, 4), 10))
