"""Dense tensor algebra in three dimensions.

Vectors are numpy arrays of shape (3,), second-order tensors (3, 3), and
fourth-order tensors (3, 3, 3, 3).  Everything here is a pure function of its
inputs; nothing is mutated.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceFailure, NonFinite, NotSymmetric
from .tolerances import DEFAULT

EYE3 = np.eye(3)

#: Orthonormal basis vectors e_0, e_1, e_2.
BASIS = tuple(np.eye(3)[i] for i in range(3))


def outer(a, b) -> np.ndarray:
    """Dyad of two vectors: result[i, j] = a[i] * b[j]."""
    return np.multiply.outer(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def apply4(S4, Z) -> np.ndarray:
    """Contract a fourth-order tensor with a second-order one.

    result[i, j] = sum_{h, k} S4[i, j, h, k] * Z[h, k]
    """
    return np.einsum("ijhk,hk->ij", np.asarray(S4, dtype=float), np.asarray(Z, dtype=float))


def identity4() -> np.ndarray:
    """Fourth-order identity: apply4(identity4(), Z) == Z."""
    return np.einsum("ih,jk->ijhk", EYE3, EYE3)


def check_finite(arr, what="tensor"):
    arr = np.asarray(arr, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"{what} has non-finite entries")
    return arr


def sym_part(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    return 0.5 * (M + M.T)


def asymmetry(M) -> float:
    """Relative deviation of M from its own transpose."""
    M = np.asarray(M, dtype=float)
    scale = max(1.0, float(np.abs(M).max()))
    return float(np.abs(M - M.T).max()) / scale


def eig_sym(M, sym_tol: float | None = None):
    """Eigendecomposition of a symmetric 3x3 tensor.

    Parameters
    ----------
    M : (3, 3) array
        Must be symmetric to within ``sym_tol`` (relative).

    Returns
    -------
    (evals, evecs)
        ``evals`` sorted in descending order; ``evecs[:, i]`` is the unit
        eigenvector for ``evals[i]``.

    Raises
    ------
    NotSymmetric
        If the relative asymmetry of M exceeds the tolerance.
    """
    M = check_finite(M, "eig_sym input")
    tol = DEFAULT.sym_tol if sym_tol is None else sym_tol
    if asymmetry(M) > tol:
        raise NotSymmetric(f"asymmetry {asymmetry(M):.3e} exceeds {tol:.3e}")
    evals, evecs = np.linalg.eigh(sym_part(M))
    return evals[::-1].copy(), evecs[:, ::-1].copy()


def eig_general(M):
    """Eigenvalues and right eigenvectors of a small dense real matrix.

    Intended for the 12x12 directional flux Jacobian; accepts any square
    matrix up to 16x16.  Returns complex eigenvalues and the matrix of right
    eigenvectors (one per column).
    """
    M = check_finite(M, "eig_general input")
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] > 16:
        raise ValueError(f"matrix of order {M.shape[0]} exceeds the supported 16")
    try:
        evals, evecs = np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise ConvergenceFailure(str(exc)) from exc
    return evals, evecs
