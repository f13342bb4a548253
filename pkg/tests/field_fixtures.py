"""Shared initial-field builders for the solver and acceptance tests."""

import numpy as np

from elastocons import Field, Grid


def gradient_field_3d(n: int, amp: float = 0.02) -> Field:
    """Periodic F = 1 + grad(u) with genuinely mixed axis dependence.

    Mixed wavenumbers per axis matter: central differences scale single
    harmonics identically on both sides of each compatibility pair, which
    would make the discrete residual cancel exactly.
    """
    grid = Grid.box(n, 1.0)
    pos = grid.positions()
    w = 2.0 * np.pi
    F = np.empty(grid.cells + (3, 3))
    p = np.zeros(grid.cells + (3,))
    # u0 = amp sin(wx) sin(2wy); u1 = amp sin(wy) sin(2wz); u2 = amp sin(wz) sin(2wx)
    for idx in np.ndindex(*grid.cells):
        x, y, z = pos[idx]
        G = np.eye(3).copy()
        G[0, 0] += amp * w * np.cos(w * x) * np.sin(2 * w * y)
        G[0, 1] += 2 * amp * w * np.sin(w * x) * np.cos(2 * w * y)
        G[1, 1] += amp * w * np.cos(w * y) * np.sin(2 * w * z)
        G[1, 2] += 2 * amp * w * np.sin(w * y) * np.cos(2 * w * z)
        G[2, 2] += amp * w * np.cos(w * z) * np.sin(2 * w * x)
        G[2, 0] += 2 * amp * w * np.sin(w * z) * np.cos(2 * w * x)
        F[idx] = G
    return Field(grid=grid, F=F, p=p)
