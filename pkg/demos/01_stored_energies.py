"""Stored-energy registry: values, stresses, and derivative cross-checks."""

import numpy as np

from elastocons import fd_elasticity_tensor, fd_stress, stored_energy_registry

np.set_printoptions(precision=6, suppress=True)
rng = np.random.default_rng(42)

# a modest deformation with positive determinant
F = np.eye(3) + 0.2 * rng.uniform(-1.0, 1.0, size=(3, 3))
print("deformation gradient F (det =", round(float(np.linalg.det(F)), 4), "):")
print(F)

for se in stored_energy_registry(lam=2.0, mu=1.0):
    print(f"\n=== {se.name} ===")
    print("sigma(F)        =", se.sigma(F))
    print("sigma(identity) =", se.sigma(np.eye(3)), " (stress-free reference)")

    S_analytic = se.analytic_stress(F)
    S_fd = fd_stress(se, F)
    print("analytic stress:")
    print(S_analytic)
    print("max |analytic - finite difference| =", np.abs(S_analytic - S_fd).max())

    # the second derivative of a scalar has major symmetry S4[ijhk] = S4[hkij]
    S4 = fd_elasticity_tensor(se, F)
    major = np.abs(S4 - S4.transpose(2, 3, 0, 1)).max()
    print("elasticity tensor major-symmetry defect =", major)
