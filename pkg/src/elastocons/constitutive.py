"""Constitutive mappings for elasticity in first-order conservation form.

The state of a material point is the pair (F, p) of deformation gradient and
momentum density.  A :class:`ConstitutiveModel` bundles the three response
maps

    energy   (F, p) -> tau        total energy per unit reference volume
    velocity (F, p) -> v          boundary flux of F
    stress   (F, p) -> S          Piola stress, boundary flux of p

together with an optional analytic elasticity tensor dS/dF.  Builders are
provided for the two standard representations

    classical:  v = p / rho,   tau = |p|^2 / (2 rho) + sigma(F)
    tensor:     v = V p,       tau = p . V p / 2   + sigma(F)

with V a symmetric invertible velocity-coefficient tensor (the inverse of the
mass-density tensor), plus a registry of stored-energy functions sigma(F) and
negative-control models that each break exactly one admissibility property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import DomainError, NewtonDivergence, NonFinite, NotSymmetric, Singular
from .tensors import EYE3, asymmetry, check_finite, outer, sym_part
from .tolerances import DEFAULT, fd_step


@dataclass(frozen=True)
class State:
    """Per-point state: deformation gradient F (3x3) and momentum p (3,).

    F is not required to be a gradient of any motion and det F may have any
    sign; individual stored energies may reject states outside their domain.
    """

    F: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "F", np.asarray(self.F, dtype=float).reshape(3, 3))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).reshape(3))

    def physical(self) -> bool:
        """True when F is orientation-preserving."""
        return float(np.linalg.det(self.F)) > 0.0


@dataclass(frozen=True)
class StoredEnergy:
    """Stored energy sigma(F) with optional analytic derivatives."""

    name: str
    sigma: Callable[[np.ndarray], float]
    analytic_stress: Optional[Callable[[np.ndarray], np.ndarray]] = None
    analytic_elasticity: Optional[Callable[[np.ndarray], np.ndarray]] = None
    parameters: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ConstitutiveModel:
    """Black-box triple (energy, velocity, stress) on states (F, p)."""

    name: str
    energy: Callable[[State], float]
    velocity: Callable[[State], np.ndarray]
    stress: Callable[[State], np.ndarray]
    analytic_S4: Optional[Callable[[np.ndarray], np.ndarray]] = None


@dataclass(frozen=True)
class MassDensityTensor:
    """Symmetric mass-density tensor M and its inverse V (p = M v)."""

    M: np.ndarray
    V: np.ndarray

    @classmethod
    def from_V(cls, V) -> "MassDensityTensor":
        V = check_finite(V, "V").reshape(3, 3)
        if asymmetry(V) > DEFAULT.sym_tol:
            raise NotSymmetric("velocity coefficient tensor V is not symmetric")
        if abs(float(np.linalg.det(V))) <= 1e-12:
            raise Singular("velocity coefficient tensor V is singular")
        M = np.linalg.inv(V)
        return cls(M=sym_part(M), V=V.copy())

    @classmethod
    def from_rho(cls, rho: float) -> "MassDensityTensor":
        if not rho > 0:
            raise ValueError("rho must be positive")
        return cls(M=rho * np.eye(3), V=np.eye(3) / rho)

    def classical(self, tol: float = 1e-10) -> bool:
        """True when M = rho * identity with rho > 0."""
        rho = self.M[0, 0]
        return rho > 0 and float(np.abs(self.M - rho * np.eye(3)).max()) <= tol * max(1.0, rho)


# ---------------------------------------------------------------------------
# Stored-energy registry
# ---------------------------------------------------------------------------

def linear_isotropic(lam: float = 2.0, mu: float = 1.0) -> StoredEnergy:
    """Quadratic isotropic energy in the symmetric displacement gradient.

    sigma(F) = lam/2 * tr(eps)^2 + mu * eps:eps,   eps = sym(F) - 1
    """

    def sigma(F):
        eps = sym_part(F) - EYE3
        tr = float(np.trace(eps))
        return 0.5 * lam * tr * tr + mu * float(np.sum(eps * eps))

    def stress(F):
        eps = sym_part(F) - EYE3
        return lam * np.trace(eps) * EYE3 + 2.0 * mu * eps

    S4 = (lam * np.einsum("ij,hk->ijhk", EYE3, EYE3)
          + mu * (np.einsum("ih,jk->ijhk", EYE3, EYE3)
                  + np.einsum("ik,jh->ijhk", EYE3, EYE3)))
    S4.setflags(write=False)

    return StoredEnergy(
        name="linear_isotropic",
        sigma=sigma,
        analytic_stress=stress,
        analytic_elasticity=lambda F: S4,
        parameters={"lambda": lam, "mu": mu},
    )


def st_venant_kirchhoff(lam: float = 2.0, mu: float = 1.0) -> StoredEnergy:
    """Quadratic energy in the Green strain E = (F^T F - 1)/2."""

    def green(F):
        return 0.5 * (F.T @ F - EYE3)

    def sigma(F):
        F = np.asarray(F, dtype=float)
        E = green(F)
        tr = float(np.trace(E))
        return 0.5 * lam * tr * tr + mu * float(np.sum(E * E))

    def stress(F):
        F = np.asarray(F, dtype=float)
        E = green(F)
        return F @ (lam * np.trace(E) * EYE3 + 2.0 * mu * E)

    def elasticity(F):
        F = np.asarray(F, dtype=float)
        E = green(F)
        C2 = lam * np.trace(E) * EYE3 + 2.0 * mu * E
        FFt = F @ F.T
        S4 = np.einsum("ih,kj->ijhk", EYE3, C2)
        S4 += lam * np.einsum("ij,hk->ijhk", F, F)
        S4 += mu * np.einsum("ik,hj->ijhk", F, F)
        S4 += mu * np.einsum("ih,jk->ijhk", FFt, EYE3)
        return S4

    return StoredEnergy(
        name="stvk",
        sigma=sigma,
        analytic_stress=stress,
        analytic_elasticity=elasticity,
        parameters={"lambda": lam, "mu": mu},
    )


def neo_hookean(lam: float = 2.0, mu: float = 1.0) -> StoredEnergy:
    """Compressible neo-Hookean energy; defined only for det F > 0.

    sigma(F) = mu/2 (F:F - 3) - mu ln J + lam/2 (ln J)^2,   J = det F
    """

    def _logdet(F):
        J = float(np.linalg.det(F))
        if J <= 0.0:
            raise DomainError(f"neo-Hookean energy requires det F > 0, got {J:.3e}")
        return np.log(J)

    def sigma(F):
        F = np.asarray(F, dtype=float)
        lnJ = _logdet(F)
        return 0.5 * mu * (float(np.sum(F * F)) - 3.0) - mu * lnJ + 0.5 * lam * lnJ * lnJ

    def stress(F):
        F = np.asarray(F, dtype=float)
        lnJ = _logdet(F)
        FinvT = np.linalg.inv(F).T
        return mu * F + (lam * lnJ - mu) * FinvT

    def elasticity(F):
        F = np.asarray(F, dtype=float)
        lnJ = _logdet(F)
        Finv = np.linalg.inv(F)
        FinvT = Finv.T
        S4 = mu * np.einsum("ih,jk->ijhk", EYE3, EYE3)
        S4 += lam * np.einsum("ij,hk->ijhk", FinvT, FinvT)
        S4 -= (lam * lnJ - mu) * np.einsum("jh,ki->ijhk", Finv, Finv)
        return S4

    return StoredEnergy(
        name="neo_hookean",
        sigma=sigma,
        analytic_stress=stress,
        analytic_elasticity=elasticity,
        parameters={"lambda": lam, "mu": mu},
    )


def zero_energy() -> StoredEnergy:
    """Degenerate sigma = 0 (stress-free for every F)."""
    return StoredEnergy(
        name="zero",
        sigma=lambda F: 0.0,
        analytic_stress=lambda F: np.zeros((3, 3)),
        analytic_elasticity=lambda F: np.zeros((3, 3, 3, 3)),
    )


def stored_energy_registry(lam: float = 2.0, mu: float = 1.0) -> list[StoredEnergy]:
    """The stored energies shipped with the package."""
    return [linear_isotropic(lam, mu), st_venant_kirchhoff(lam, mu), neo_hookean(lam, mu)]


def stored_energy_by_name(name: str, lam: float = 2.0, mu: float = 1.0) -> StoredEnergy:
    for se in stored_energy_registry(lam, mu):
        if se.name == name:
            return se
    raise KeyError(f"unknown stored energy {name!r}")


# ---------------------------------------------------------------------------
# Finite-difference derivatives
# ---------------------------------------------------------------------------

def fd_stress(se: StoredEnergy, F, step: float | None = None) -> np.ndarray:
    """Central finite difference of sigma: S[i, j] = d sigma / d F[i, j]."""
    F = np.asarray(F, dtype=float)
    h = fd_step(F) if step is None else step
    S = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            dF = np.zeros((3, 3))
            dF[i, j] = h
            S[i, j] = (se.sigma(F + dF) - se.sigma(F - dF)) / (2.0 * h)
    return check_finite(S, "finite-difference stress")


def fd_jacobian_wrt_tensor(fn: Callable[[np.ndarray], np.ndarray], F,
                           step: float | None = None) -> np.ndarray:
    """Central finite difference of a (3,3)-valued map of a (3,3) argument.

    result[i, j, h, k] = d fn(F)[i, j] / d F[h, k]
    """
    F = np.asarray(F, dtype=float)
    h = fd_step(F) if step is None else step
    out = np.empty((3, 3, 3, 3))
    for a in range(3):
        for b in range(3):
            dF = np.zeros((3, 3))
            dF[a, b] = h
            out[:, :, a, b] = (np.asarray(fn(F + dF)) - np.asarray(fn(F - dF))) / (2.0 * h)
    return check_finite(out, "finite-difference tensor jacobian")


def fd_elasticity_tensor(se: StoredEnergy, F, step: float | None = None) -> np.ndarray:
    """Second derivative of sigma by differencing the stress map.

    Uses the analytic stress when available, otherwise the finite-difference
    stress; the result has major symmetry S4[i,j,h,k] = S4[h,k,i,j] up to the
    finite-difference noise floor.
    """
    stress = se.analytic_stress if se.analytic_stress is not None else (
        lambda G: fd_stress(se, G))
    return fd_jacobian_wrt_tensor(stress, F, step=step)


def elasticity_map(model_or_se) -> Callable[[np.ndarray], np.ndarray]:
    """F -> dS/dF for a model or stored energy, analytic when possible."""
    if isinstance(model_or_se, ConstitutiveModel):
        if model_or_se.analytic_S4 is not None:
            return model_or_se.analytic_S4
        return lambda F, m=model_or_se: fd_jacobian_wrt_tensor(
            lambda G: m.stress(State(G, np.zeros(3))), F)
    se = model_or_se
    if se.analytic_elasticity is not None:
        return se.analytic_elasticity
    return lambda F: fd_elasticity_tensor(se, F)


def fd_velocity_jacobian(model: ConstitutiveModel, F, p, step: float | None = None) -> np.ndarray:
    """N[i, h] = d velocity_i / d p_h by central differences."""
    F = np.asarray(F, dtype=float)
    p = np.asarray(p, dtype=float)
    h = fd_step(p) if step is None else step
    N = np.empty((3, 3))
    for k in range(3):
        dp = np.zeros(3)
        dp[k] = h
        N[:, k] = (model.velocity(State(F, p + dp)) - model.velocity(State(F, p - dp))) / (2.0 * h)
    return check_finite(N, "velocity jacobian")


# ---------------------------------------------------------------------------
# Model builders
# ---------------------------------------------------------------------------

def _stress_from(se: StoredEnergy) -> Callable[[np.ndarray], np.ndarray]:
    if se.analytic_stress is not None:
        return se.analytic_stress
    return lambda F: fd_stress(se, F)


def classical_model(rho: float, se: StoredEnergy) -> ConstitutiveModel:
    """Scalar mass density: v = p / rho, tau = |p|^2 / (2 rho) + sigma(F)."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    stress = _stress_from(se)
    return ConstitutiveModel(
        name=f"classical(rho={rho:g},{se.name})",
        energy=lambda s: float(s.p @ s.p) / (2.0 * rho) + se.sigma(s.F),
        velocity=lambda s: s.p / rho,
        stress=lambda s: stress(s.F),
        analytic_S4=se.analytic_elasticity,
    )


def tensor_mass_model(V, se: StoredEnergy) -> ConstitutiveModel:
    """Tensorial mass density: v = V p, tau = p . V p / 2 + sigma(F).

    V must be symmetric (to the central symmetry tolerance) and invertible.
    """
    mdt = MassDensityTensor.from_V(V)  # raises NotSymmetric / Singular
    Vm = mdt.V
    stress = _stress_from(se)
    return ConstitutiveModel(
        name=f"tensor_mass({se.name})",
        energy=lambda s: 0.5 * float(s.p @ (Vm @ s.p)) + se.sigma(s.F),
        velocity=lambda s: Vm @ s.p,
        stress=lambda s: stress(s.F),
        analytic_S4=se.analytic_elasticity,
    )


def momentum_from_velocity(model: ConstitutiveModel, F, v,
                           p0=None,
                           tol: float | None = None,
                           max_iter: int | None = None) -> np.ndarray:
    """Invert the velocity map at fixed F by damped Newton iteration.

    Solves velocity(F, p) = v for p.  The Jacobian is the finite-difference
    N matrix; steps are halved while they increase the residual.  The default
    seed p0 = v is exact for unit mass density and harmless otherwise.

    Raises
    ------
    NewtonDivergence
        If the velocity residual is not reduced below tolerance within the
        iteration budget.
    """
    F = np.asarray(F, dtype=float)
    v = np.asarray(v, dtype=float)
    tol = DEFAULT.newton_tol if tol is None else tol
    max_iter = DEFAULT.newton_max_iter if max_iter is None else max_iter

    p = v.copy() if p0 is None else np.asarray(p0, dtype=float).copy()
    r = model.velocity(State(F, p)) - v
    rn = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if rn <= tol:
            return p
        N = fd_velocity_jacobian(model, F, p)
        try:
            step = np.linalg.solve(N, -r)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(N, -r, rcond=None)
        t = 1.0
        while True:
            cand = p + t * step
            r_new = model.velocity(State(F, cand)) - v
            rn_new = float(np.linalg.norm(r_new))
            if rn_new < rn or t < 1e-4:
                break
            t *= 0.5
        if rn_new >= rn:
            raise NewtonDivergence(
                f"residual stalled at {rn:.3e} (tol {tol:.1e}) for model {model.name}")
        p, r, rn = cand, r_new, rn_new
    if rn <= tol:
        return p
    raise NewtonDivergence(
        f"residual {rn:.3e} above tol {tol:.1e} after {max_iter} iterations")


# ---------------------------------------------------------------------------
# Negative controls: each breaks one admissibility property on purpose
# ---------------------------------------------------------------------------

CORRUPTION_KINDS = ("normality", "ellipticity", "thermo", "maxwell", "galilean", "parity")


def corrupted_model(kind: str, lam: float = 2.0, mu: float = 1.0,
                    rho: float = 1.0) -> ConstitutiveModel:
    """A model that violates exactly the targeted admissibility property.

    Some violations mathematically force others (see the admissibility
    module's expectation table): a Maxwell violation implies a thermodynamic
    one, and the cubic velocity used to break normality also breaks the
    translational-invariance defect.
    """
    se = linear_isotropic(lam, mu)
    stress = se.analytic_stress

    if kind == "normality":
        # velocity = |p|^2 p has a singular momentum jacobian at p = 0
        return ConstitutiveModel(
            name="control_normality",
            energy=lambda s: 0.25 * float(s.p @ s.p) ** 2 + se.sigma(s.F),
            velocity=lambda s: float(s.p @ s.p) * s.p,
            stress=lambda s: stress(s.F),
            analytic_S4=se.analytic_elasticity,
        )
    if kind == "ellipticity":
        return classical_model(rho, zero_energy())
    if kind == "thermo":
        base = classical_model(rho, se)
        return ConstitutiveModel(
            name="control_thermo",
            energy=base.energy,
            velocity=base.velocity,
            stress=lambda s: 1.1 * stress(s.F),
            analytic_S4=None,
        )
    if kind == "maxwell":
        base = classical_model(rho, se)
        spike = outer(np.array([1.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]))
        return ConstitutiveModel(
            name="control_maxwell",
            energy=base.energy,
            velocity=base.velocity,
            stress=lambda s: stress(s.F) + s.p[0] * spike,
            analytic_S4=None,
        )
    if kind == "galilean":
        # state-dependent effective density rho(F) = 1 + |F - 1|^2; energy,
        # velocity and stress stay mutually consistent so only the invariance
        # defect varies across states
        def rho_of(F):
            D = F - EYE3
            return 1.0 + float(np.sum(D * D))

        return ConstitutiveModel(
            name="control_galilean",
            energy=lambda s: 0.5 * float(s.p @ s.p) / rho_of(s.F) + se.sigma(s.F),
            velocity=lambda s: s.p / rho_of(s.F),
            stress=lambda s: stress(s.F)
            - float(s.p @ s.p) * (s.F - EYE3) / rho_of(s.F) ** 2,
            analytic_S4=None,
        )
    if kind == "parity":
        base = classical_model(rho, se)
        e1 = np.array([1.0, 0.0, 0.0])
        return ConstitutiveModel(
            name="control_parity",
            energy=lambda s: base.energy(s) + float(s.p @ e1),
            velocity=lambda s: s.p / rho + e1,
            stress=base.stress,
            analytic_S4=se.analytic_elasticity,
        )
    raise KeyError(f"unknown corruption kind {kind!r}; expected one of {CORRUPTION_KINDS}")
