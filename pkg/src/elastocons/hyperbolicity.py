"""Acoustic tensor and wave-structure analysis of the conservation system.

For a direction w and the elasticity tensor S4 = dS/dF, the acoustic tensor

    E(w) u = (S4[u (x) w]) w,   i.e.  E[i, h] = sum_{j,k} S4[i, j, h, k] w_j w_k

governs plane-wave propagation: positive definiteness of E(w) for every unit
w is strong ellipticity of the stress map, equivalently strict rank-one
convexity of the stored energy.  With scalar mass density rho, the 12x12
directional flux Jacobian of the system in (F, p) acts on pairs (Z, z) as

    (Z, z)  ->  (-(1/rho) z (x) w,  -(S4[Z]) w)

so its nonzero eigenvalues lam satisfy E(w) z = mu z with mu = rho lam^2,
zero is an eigenvalue of geometric multiplicity six whenever E(w) is
positive definite, and the zero-eigenvectors all have vanishing z-block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotUnit
from .tensors import eig_general, eig_sym
from .tolerances import DEFAULT

N_BASELINE_DIRECTIONS = 26


def _require_unit(w) -> np.ndarray:
    w = np.asarray(w, dtype=float).reshape(3)
    if abs(float(np.linalg.norm(w)) - 1.0) > 1e-12:
        raise NotUnit(f"|w| = {np.linalg.norm(w):.15f}, expected 1")
    return w


@dataclass
class AcousticTensor:
    """Acoustic tensor for one propagation direction, with eigensystem."""

    w: np.ndarray
    E: np.ndarray
    eigenvalues: np.ndarray   # descending
    eigenvectors: np.ndarray  # columns, matching eigenvalues


def acoustic_tensor(S4, w) -> AcousticTensor:
    """Assemble and diagonalize E(w) from the elasticity tensor."""
    w = _require_unit(w)
    S4 = np.asarray(S4, dtype=float)
    E = np.einsum("ijhk,j,k->ih", S4, w, w)
    evals, evecs = eig_sym(E)
    return AcousticTensor(w=w, E=E, eigenvalues=evals, eigenvectors=evecs)


def flux_jacobian(S4, rho: float, w) -> np.ndarray:
    """Dense 12x12 directional Jacobian of the fluxes, scalar mass density.

    Row/column layout: entries 3a..3a+2 hold the a-th column of the tensor
    block Z (a = 0, 1, 2) and entries 9..11 hold the vector block z.
    """
    if not rho > 0:
        raise ValueError("rho must be positive")
    w = _require_unit(w)
    S4 = np.asarray(S4, dtype=float)
    M = np.zeros((12, 12))
    for a in range(3):
        M[3 * a:3 * a + 3, 9:12] = -(w[a] / rho) * np.eye(3)
    # K[i, h, a] = -sum_j S4[i, j, h, a] w_j, mapping Z[h, a] to the z-rate
    K = -np.einsum("ijha,j->iha", S4, w)
    M[9:12, 0:9] = K.transpose(0, 2, 1).reshape(3, 9)
    return M


@dataclass
class EigenStructure:
    """Classified spectrum of a 12x12 flux Jacobian."""

    zero_multiplicity: int          # 12 - rank, by singular-value threshold
    eigenvalues: np.ndarray         # all 12, complex
    nonzero_pairs: list             # (eigenvalue, eigenvector) above the zero band
    independent_count: int          # rank of the stacked nonzero eigenvectors
    independence_sv: float          # smallest singular value of that stack
    spectral_scale: float           # largest singular value of the matrix


def eigenstructure(M, zero_band: float | None = None,
                   indep_tol: float | None = None) -> EigenStructure:
    """Zero multiplicity (geometric, via rank) and nonzero eigenpairs."""
    M = np.asarray(M, dtype=float)
    zero_band = DEFAULT.zero_band if zero_band is None else zero_band
    indep_tol = DEFAULT.indep_sv_tol if indep_tol is None else indep_tol

    svals = np.linalg.svd(M, compute_uv=False)
    smax = float(svals[0]) if svals.size else 0.0
    threshold = zero_band * smax
    rank = int(np.sum(svals > threshold))
    zero_multiplicity = M.shape[0] - rank

    evals, evecs = eig_general(M)
    nonzero = [(evals[i], evecs[:, i]) for i in range(len(evals))
               if abs(evals[i]) > threshold]

    if nonzero:
        stack = np.column_stack([vec / np.linalg.norm(vec) for _, vec in nonzero])
        sv = np.linalg.svd(stack, compute_uv=False)
        independence_sv = float(sv[-1])
        independent_count = int(np.sum(sv > indep_tol))
    else:
        independence_sv = 0.0
        independent_count = 0

    return EigenStructure(
        zero_multiplicity=zero_multiplicity,
        eigenvalues=evals,
        nonzero_pairs=nonzero,
        independent_count=independent_count,
        independence_sv=independence_sv,
        spectral_scale=smax,
    )


# ---------------------------------------------------------------------------
# Direction sets
# ---------------------------------------------------------------------------

def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic quasi-uniform unit directions, shape (n, 3)."""
    if n < 1:
        raise ValueError("n_dirs must be >= 1")
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    dirs = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def baseline_directions() -> np.ndarray:
    """The 26 axis, face-diagonal and corner directions of the unit cube."""
    out = []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            for dz in (-1, 0, 1):
                if dx == dy == dz == 0:
                    continue
                v = np.array([dx, dy, dz], dtype=float)
                out.append(v / np.linalg.norm(v))
    return np.array(out)


# ---------------------------------------------------------------------------
# Direction scan
# ---------------------------------------------------------------------------

@dataclass
class DirectionRecord:
    w: np.ndarray
    acoustic_eigenvalues: np.ndarray  # descending
    min_eigenvalue: float
    wave_speeds: np.ndarray           # sqrt(mu / rho), NaN where mu < 0
    zero_multiplicity: int
    independent_count: int


@dataclass
class HyperbolicityReport:
    records: list
    rho: float
    strongly_elliptic: bool
    min_eigenvalue: float
    worst_direction: np.ndarray

    def rows(self):
        """CSV rows: direction, acoustic eigenvalues, speeds, multiplicities."""
        for r in self.records:
            yield (*r.w, *r.acoustic_eigenvalues, *r.wave_speeds,
                   r.zero_multiplicity, r.independent_count)


def scan_directions(S4_at, F, rho: float, n_dirs: int = 256,
                    include_baseline: bool = True,
                    se_tol: float | None = None) -> HyperbolicityReport:
    """Scan acoustic eigenvalues and Jacobian eigenstructure over directions.

    ``S4_at`` maps a deformation gradient to the elasticity tensor; the scan
    evaluates it once at F.  The verdict ``strongly_elliptic`` certifies
    positivity of every sampled acoustic tensor, i.e. strict rank-one
    convexity of the stored energy at F, at scan resolution.
    """
    se_tol = DEFAULT.se_tol if se_tol is None else se_tol
    S4 = np.asarray(S4_at(np.asarray(F, dtype=float)), dtype=float)
    dirs = fibonacci_sphere(n_dirs)
    if include_baseline:
        dirs = np.vstack([dirs, baseline_directions()])

    records = []
    global_min = np.inf
    worst = dirs[0]
    for w in dirs:
        ac = acoustic_tensor(S4, w)
        mn = float(ac.eigenvalues[-1])
        if mn < global_min:
            global_min = mn
            worst = w
        speeds = np.where(ac.eigenvalues >= 0.0,
                          np.sqrt(np.clip(ac.eigenvalues, 0.0, None) / rho),
                          np.nan)
        es = eigenstructure(flux_jacobian(S4, rho, w))
        records.append(DirectionRecord(
            w=w.copy(),
            acoustic_eigenvalues=ac.eigenvalues.copy(),
            min_eigenvalue=mn,
            wave_speeds=speeds,
            zero_multiplicity=es.zero_multiplicity,
            independent_count=es.independent_count,
        ))

    return HyperbolicityReport(
        records=records,
        rho=rho,
        strongly_elliptic=bool(global_min > se_tol),
        min_eigenvalue=float(global_min),
        worst_direction=np.asarray(worst, dtype=float),
    )


def min_acoustic_eigenvalue(S4, dirs) -> float:
    """Smallest acoustic eigenvalue over a direction set."""
    S4 = np.asarray(S4, dtype=float)
    worst = np.inf
    for w in dirs:
        worst = min(worst, float(acoustic_tensor(S4, w).eigenvalues[-1]))
    return worst


def ellipticity_loss_bisection(S4_at, s_lo: float, s_hi: float,
                               n_dirs: int = 64, iters: int = 50) -> float:
    """Locate the uniform-stretch level where strong ellipticity is lost.

    Scans F = s * identity; requires the minimum acoustic eigenvalue to have
    opposite signs at the bracket ends, then bisects the sign change.
    """
    dirs = np.vstack([fibonacci_sphere(n_dirs), baseline_directions()])

    def g(s):
        return min_acoustic_eigenvalue(S4_at(s * np.eye(3)), dirs)

    g_lo, g_hi = g(s_lo), g(s_hi)
    if g_lo * g_hi > 0:
        raise ValueError(
            f"no sign change on [{s_lo}, {s_hi}]: g = ({g_lo:.3e}, {g_hi:.3e})")
    for _ in range(iters):
        mid = 0.5 * (s_lo + s_hi)
        if g_lo * g(mid) <= 0:
            s_hi = mid
        else:
            s_lo = mid
            g_lo = g(s_lo)
    return 0.5 * (s_lo + s_hi)
