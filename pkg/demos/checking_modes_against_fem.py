"""
Transfer matrices against a finite element oracle
=================================================

Eigenvalues from the transfer-matrix root search, compared with Hermite
cubic elements on three nested meshes and their Richardson limit.
"""

import numpy as np

from crackdyn import NondimModel, find_eigenvalues
from crackdyn.fem_oracle import extrapolated_lambdas
from crackdyn.modal_solver import evaluate, modal_basis

model = NondimModel(crack_positions=(1.0, 2.2), flexibilities=(0.5, 2.0))

tm = np.array(find_eigenvalues(model, 6))
meshes, limit = extrapolated_lambdas(model, 6, n_elements=100)

print(" k   transfer matrix   FEM 100        FEM 400        extrapolated   rel diff")
for k in range(6):
    print(f"{k + 1:2d}   {tm[k]:.12f}    {meshes[0][k]:.10f}   {meshes[2][k]:.10f}   "
          f"{limit[k]:.12f}  {abs(limit[k] - tm[k]) / tm[k]:.1e}")

# the slope of every mode jumps by theta times the curvature at each crack
basis = modal_basis(model, 6)
for phi in basis.pairs[:3]:
    for x, theta in zip(model.crack_positions, model.flexibilities):
        jump = evaluate(phi, x, 1, "right") - evaluate(phi, x, 1, "left")
        print(f"lambda = {phi.lam:.6f}  x = {x}: jump {jump:+.8f}, theta * phi'' {theta * evaluate(phi, x, 2):+.8f}")

# the slope Gram matrix couples the modes once cracks are present
np.set_printoptions(precision=3, suppress=True)
print(basis.gram)
