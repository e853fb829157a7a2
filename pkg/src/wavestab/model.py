"""Kinetics and linear structure of the two-component Wolbachia invasion model.

The model tracks a *Wolbachia*-infected mosquito density u and an uninfected
density v, nondimensionalised by carrying capacity.  With total density
S = u + v and infection fraction A = u/S, the kinetic right-hand sides are

    du/dt = u (1 - S) - alpha mu u
    dv/dt = F v (1 - S) (1 - s_h A) - mu v

Cytoplasmic incompatibility (CI) kills a fraction s_h of uninfected embryos
sired by infected males, infection costs its carriers fecundity (1/F < 1
relative to residents) and lifespan (mortality scaled by alpha >= 1).  When
CI is strong enough, F alpha (1 - s_h) < 1, both single-strain states

    e_minus = (1 - alpha mu, 0)      infected-only
    e_plus  = (0, 1 - mu / F)        uninfected-only

are kinetically stable and an invasion front connecting them travels at a
unique speed.  In the co-moving frame z = x - (c + rho) t, perturbations
(p, q) e^{lambda t} of the front satisfy a first-order system

    y' = A(z, lambda) y,    y = (p, q, p_z, q_z),

where A is 4x4 with shift rows (0,0,1,0), (0,0,0,1) on top and the kinetic
Jacobian (shifted by lambda, with -c on the diagonal) below.  As z -> -+inf
the matrix converges to constant limits whose eigenstructure is closed-form:
each end decouples into two scalar quadratics eta^2 + c eta - d = 0, so the
spatial rates are eta = (-c +- sqrt(c^2 + 4 d)) / 2.

This module provides the validated containers and every closed-form piece the
rest of the package builds on:

- ``ModelParams`` / ``KineticState``: parameters and kinetic states
- ``reaction`` / ``equilibria``: kinetics and all nonnegative rest states
- ``linearisation_at`` / ``asymptotic_matrix``: A(z, lambda) and its limits
- ``branch_coefficients`` / ``spatial_eigen``: the decoupled quadratics and
  the growing/decaying eigenpairs with an analytic-in-lambda normalisation
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "ModelParamError",
    "DomainError",
    "SingularPointError",
    "DegenerateSplittingError",
    "ModelParams",
    "KineticState",
    "AsymptoticEigen",
    "DEFAULT_PARAMS",
    "reaction",
    "equilibria",
    "linearisation_at",
    "asymptotic_matrix",
    "branch_coefficients",
    "spatial_eigen",
]


class ModelParamError(ValueError):
    """Parameter set violates the biological validity constraints."""


class DomainError(ValueError):
    """Kinetic state outside the physical domain (negative density)."""


class SingularPointError(ValueError):
    """Linearisation requested at S = 0 where the CI term 1/S^2 blows up."""


class DegenerateSplittingError(ValueError):
    """Spatial eigenvalues collide (c^2 + 4d = 0): lambda sits at a branch
    point of the eigensplitting, on the real axis the absolute-spectrum edge."""


# ═══════════════════════════════════════════════════════════════════════════
# Parameters and states
# ═══════════════════════════════════════════════════════════════════════════


@dataclass(frozen=True)
class ModelParams:
    """Kinetic parameters plus the co-moving wavespeed.

    F:     fecundity of uninfected relative to infected females (> 1)
    mu:    mortality rate (> 0)
    s_h:   probability of embryo death from cytoplasmic incompatibility (0, 1)
    alpha: lifespan-reduction factor of infection (>= 1), scales mu
    rho:   advection rate; recorded, but absorbed by the frame change
           z = x - (c + rho) t and therefore unused in co-moving analyses
    c:     co-moving wavespeed; None until a wave solve or the caller fixes it

    Validity requires both single-strain states to carry positive density
    (1 - alpha mu > 0, 1 - mu/F > 0) and CI strong enough for bistability
    (F alpha (1 - s_h) < 1); without bistability no invasion front connects
    the single-strain states and the spectral machinery downstream does not
    apply.
    """

    F: float
    mu: float
    s_h: float
    alpha: float
    rho: float = 0.0
    c: float | None = None

    def __post_init__(self):
        for name in ("F", "mu", "s_h", "alpha", "rho"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ModelParamError(f"{name} must be a finite number, got {value!r}")
        if self.c is not None and not (
            isinstance(self.c, (int, float)) and math.isfinite(self.c)
        ):
            raise ModelParamError(f"c must be a finite number or None, got {self.c!r}")
        if not self.F > 1:
            raise ModelParamError(f"need relative fecundity F > 1, got F={self.F}")
        if not self.mu > 0:
            raise ModelParamError(f"need mortality mu > 0, got mu={self.mu}")
        if not 0 < self.s_h < 1:
            raise ModelParamError(f"need CI intensity 0 < s_h < 1, got s_h={self.s_h}")
        if not self.alpha >= 1:
            raise ModelParamError(
                f"need lifespan factor alpha >= 1, got alpha={self.alpha}"
            )
        if not 1 - self.alpha * self.mu > 0:
            raise ModelParamError(
                "infected-only state needs positive density: 1 - alpha*mu = "
                f"{1 - self.alpha * self.mu} <= 0"
            )
        if not 1 - self.mu / self.F > 0:
            raise ModelParamError(
                "uninfected-only state needs positive density: 1 - mu/F = "
                f"{1 - self.mu / self.F} <= 0"
            )
        if not self.F * self.alpha * (1 - self.s_h) < 1:
            raise ModelParamError(
                "need bistability F*alpha*(1 - s_h) < 1 (CI strong enough that "
                "the infected-only state resists reinvasion), got "
                f"{self.F * self.alpha * (1 - self.s_h)}"
            )

    def with_c(self, c: float) -> "ModelParams":
        """Copy of this parameter set with the wavespeed fixed to ``c``."""
        return replace(self, c=c)

    def require_c(self) -> float:
        """The wavespeed, raising if it has not been set."""
        if self.c is None:
            raise ModelParamError("operation needs the wavespeed c; none was set")
        return self.c

    def as_dict(self) -> dict:
        """Flat dict with keys F, mu, s_h, alpha, rho, c."""
        return {
            "F": self.F,
            "mu": self.mu,
            "s_h": self.s_h,
            "alpha": self.alpha,
            "rho": self.rho,
            "c": self.c,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        """Build from a flat mapping; unknown keys are rejected."""
        allowed = {"F", "mu", "s_h", "alpha", "rho", "c"}
        unknown = set(data) - allowed
        if unknown:
            raise ModelParamError(f"unknown parameter keys: {sorted(unknown)}")
        missing = {"F", "mu", "s_h", "alpha"} - set(data)
        if missing:
            raise ModelParamError(f"missing parameter keys: {sorted(missing)}")
        return cls(
            F=data["F"],
            mu=data["mu"],
            s_h=data["s_h"],
            alpha=data["alpha"],
            rho=data.get("rho", 0.0),
            c=data.get("c"),
        )

    # Derived equilibrium densities, used all over the package.

    @property
    def u_minus(self) -> float:
        """Infected density of the infected-only state e_minus."""
        return 1.0 - self.alpha * self.mu

    @property
    def v_plus(self) -> float:
        """Uninfected density of the uninfected-only state e_plus."""
        return 1.0 - self.mu / self.F


#: wMel-type infection of Aedes aegypti around 30 degrees C: ~5% fecundity
#: cost, ~10% lifespan cost, CI killing 45% of incompatible embryos.
DEFAULT_PARAMS = ModelParams(F=1.0526, mu=0.0162, s_h=0.45, alpha=1.1, rho=0.0)


@dataclass(frozen=True)
class KineticState:
    """Point (u, v) of the kinetic phase plane, both densities >= 0."""

    u: float
    v: float

    @property
    def S(self) -> float:
        """Total density u + v."""
        return self.u + self.v

    @property
    def infection_fraction(self) -> float:
        """u / S, taken as 0 at the extinction state S = 0."""
        return self.u / self.S if self.S > 0 else 0.0


# ═══════════════════════════════════════════════════════════════════════════
# Kinetics
# ═══════════════════════════════════════════════════════════════════════════


def _kinetics(u, v, params: ModelParams):
    """Kinetic right-hand sides for scalar or array densities, unvalidated.

    The CI factor 1 - s_h u/S is continued by u/S := 0 where S = 0, which
    makes the extinction state a regular equilibrium of the kinetics.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    S = u + v
    A_frac = np.divide(u, S, out=np.zeros_like(S), where=S > 0)
    du = u * (1.0 - S) - params.alpha * params.mu * u
    dv = params.F * v * (1.0 - S) * (1.0 - params.s_h * A_frac) - params.mu * v
    return du, dv


def _kinetic_jacobian(u: float, v: float, params: ModelParams):
    """Closed-form Jacobian of the kinetics at (u, v); needs S = u + v > 0.

    Returns ((f_u, f_v), (g_u, g_v)) where f, g are the u- and v-equations.
    """
    S = u + v
    if S <= 0:
        raise SingularPointError(
            f"kinetic Jacobian undefined at S = {S} (CI term differentiates 1/S)"
        )
    F, mu, s_h, alpha = params.F, params.mu, params.s_h, params.alpha
    f_u = (1.0 - S) - u - alpha * mu
    f_v = -u
    g_u = F * v * (s_h * (S * S - v) / (S * S) - 1.0)
    g_v = (
        F * ((1.0 - S - v) * (1.0 - s_h * u / S) + s_h * u * v * (1.0 - S) / (S * S))
        - mu
    )
    return (f_u, f_v), (g_u, g_v)


def reaction(state: KineticState, params: ModelParams) -> tuple[float, float]:
    """Kinetic rates (du/dt, dv/dt) at a state, spatial terms excluded.

    Args:
        state: nonnegative densities; negative input raises ``DomainError``.
        params: model parameters (wavespeed not needed).

    Returns:
        The pair (du/dt, dv/dt).
    """
    if state.u < 0 or state.v < 0:
        raise DomainError(f"negative density in state ({state.u}, {state.v})")
    du, dv = _kinetics(state.u, state.v, params)
    return float(du), float(dv)


def equilibria(params: ModelParams) -> list[KineticState]:
    """All nonnegative kinetic equilibria, sorted by (u, v).

    The extinction state, both single-strain states and any coexistence
    state.  The single-strain states are written down analytically; anything
    else is found by damped Newton iteration from a fixed 10x10 seed grid on
    (0,1)^2 (deterministic, so repeated calls agree exactly), with duplicates
    merged at distance 1e-8.  Every returned state satisfies reaction = 0 to
    1e-12 per component.
    """
    found = [
        (0.0, 0.0),
        (params.u_minus, 0.0),
        (0.0, params.v_plus),
    ]

    def already_known(u, v):
        return any(math.hypot(u - u0, v - v0) < 1e-8 for u0, v0 in found)

    n_seed = 10
    for i in range(n_seed):
        for j in range(n_seed):
            u, v = (i + 0.5) / n_seed, (j + 0.5) / n_seed
            root = _damped_newton(u, v, params)
            if root is None:
                continue
            u, v = root
            if abs(u) < 1e-12:
                u = 0.0
            if abs(v) < 1e-12:
                v = 0.0
            if u < 0 or v < 0 or already_known(u, v):
                continue
            du, dv = _kinetics(u, v, params)
            if max(abs(du), abs(dv)) <= 1e-12:
                found.append((u, v))

    found.sort()
    return [KineticState(u, v) for u, v in found]


def _damped_newton(u: float, v: float, params: ModelParams, max_iter: int = 100):
    """Newton iteration on the kinetics with step halving; None on failure."""
    du, dv = (float(x) for x in _kinetics(u, v, params))
    res = math.hypot(du, dv)
    for _ in range(max_iter):
        if res <= 1e-14:
            return u, v
        try:
            (f_u, f_v), (g_u, g_v) = _kinetic_jacobian(u, v, params)
        except SingularPointError:
            return None
        det = f_u * g_v - f_v * g_u
        if abs(det) < 1e-300:
            return None
        step_u = (g_v * du - f_v * dv) / det
        step_v = (f_u * dv - g_u * du) / det
        # Backtrack until the residual actually drops.
        scale = 1.0
        for _ in range(30):
            u_new, v_new = u - scale * step_u, v - scale * step_v
            du_new, dv_new = (float(x) for x in _kinetics(u_new, v_new, params))
            res_new = math.hypot(du_new, dv_new)
            if res_new < res:
                break
            scale *= 0.5
        else:
            return None
        u, v, du, dv, res = u_new, v_new, du_new, dv_new, res_new
        if not (math.isfinite(u) and math.isfinite(v)) or max(abs(u), abs(v)) > 10:
            return None
    return (u, v) if res <= 1e-14 else None


# ═══════════════════════════════════════════════════════════════════════════
# Linearisation about the wave and its asymptotic limits
# ═══════════════════════════════════════════════════════════════════════════


def _check_end(end: str) -> str:
    if end not in ("-", "+"):
        raise ValueError(f"end must be '-' or '+', got {end!r}")
    return end


def linearisation_at(uv, params: ModelParams, lam: complex) -> np.ndarray:
    """The 4x4 first-order matrix A(z, lambda) at profile values (u_hat, v_hat).

    State ordering is (p, q, p_z, q_z): rows one and two are the shift rows,
    rows three and four carry lambda minus the kinetic Jacobian and -c on the
    diagonal.

    Args:
        uv: pair (u_hat, v_hat) of nonnegative profile values with u+v > 0.
        params: model parameters with the wavespeed c set.
        lam: spectral parameter.

    Returns:
        Complex 4x4 array.
    """
    u, v = float(uv[0]), float(uv[1])
    if u < 0 or v < 0:
        raise DomainError(f"negative profile value ({u}, {v})")
    if u + v <= 0:
        raise SingularPointError(
            "linearisation undefined at S = 0 (CI terms carry 1/S^2)"
        )
    c = params.require_c()
    (f_u, f_v), (g_u, g_v) = _kinetic_jacobian(u, v, params)
    A = np.zeros((4, 4), dtype=complex)
    A[0, 2] = 1.0
    A[1, 3] = 1.0
    A[2, 0] = lam - f_u
    A[2, 1] = -f_v
    A[2, 2] = -c
    A[3, 0] = -g_u
    A[3, 1] = lam - g_v
    A[3, 3] = -c
    return A


def asymptotic_matrix(end: str, params: ModelParams, lam: complex) -> np.ndarray:
    """Constant limit of the linearisation matrix at z -> -inf ('-') or +inf ('+').

    Written from the closed-form entries rather than by evaluating
    ``linearisation_at`` at the equilibria, so the two agree only up to
    rounding -- a consistency check the tests exploit.
    """
    _check_end(end)
    c = params.require_c()
    F, mu, s_h, alpha = params.F, params.mu, params.s_h, params.alpha
    A = np.zeros((4, 4), dtype=complex)
    A[0, 2] = 1.0
    A[1, 3] = 1.0
    A[2, 2] = -c
    A[3, 3] = -c
    if end == "-":
        A[2, 0] = 1.0 - alpha * mu + lam
        A[2, 1] = 1.0 - alpha * mu
        A[3, 0] = 0.0
        A[3, 1] = mu + lam - F * alpha * mu * (1.0 - s_h)
    else:
        A[2, 0] = lam + mu * (alpha - 1.0 / F)
        A[2, 1] = 0.0
        A[3, 0] = F - mu + mu * s_h
        A[3, 1] = F - mu + lam
    return A


def branch_coefficients(end: str, params: ModelParams, lam: complex):
    """Constants d1, d2 of the decoupled tail quadratics eta^2 + c eta - d = 0.

    At each end the asymptotic matrix is triangular in the (p, q) blocks, so
    its four eigenvalues split into two quadratics.  d1 belongs to the fast
    branch (d1 - d2 is a positive lambda-independent constant), d2 to the
    slow branch whose z -> +inf collision at c^2 + 4 d2 = 0 marks the
    absolute-spectrum edge.
    """
    _check_end(end)
    F, mu, s_h, alpha = params.F, params.mu, params.s_h, params.alpha
    if end == "-":
        d1 = 1.0 - alpha * mu + lam
        d2 = lam + mu * (1.0 - F * alpha * (1.0 - s_h))
    else:
        d1 = F - mu + lam
        d2 = lam + mu * (alpha - 1.0 / F)
    return d1, d2


@dataclass(frozen=True, eq=False)
class AsymptoticEigen:
    """Selected eigenpairs of an asymptotic matrix.

    At the minus end the two growing rates (positive real part right of the
    essential spectrum), at the plus end the two decaying ones; eta1 is the
    fast rate, eta2 the slow one.  Eigenvectors have the companion structure
    zeta = (p, q, eta p, eta q) and are normalised so the first nonzero of
    (p, q) equals 1, with (p, q) independent of lambda -- an analytic choice,
    so Evans-function values built from them inherit analyticity and the
    conjugate symmetry D(conj lambda) = conj(D(lambda)).
    """

    end: str
    lam: complex
    eta1: complex
    eta2: complex
    zeta1: np.ndarray
    zeta2: np.ndarray


def spatial_eigen(end: str, params: ModelParams, lam: complex) -> AsymptoticEigen:
    """Closed-form spatial eigenpairs of the asymptotic matrix at one end.

    Solves the two decoupled quadratics with the principal square root,
    taking the + root at the minus end (growing pair) and the - root at the
    plus end (decaying pair).  For real lambda right of the absolute-spectrum
    edge all four rates are real with eta1- > eta2- > 0 and eta1+ < eta2+ < 0.

    Raises:
        DegenerateSplittingError: some c^2 + 4 d vanishes, i.e. lambda sits
            at a branch point of the splitting (on the real axis, the
            absolute-spectrum edge gamma_A).
    """
    _check_end(end)
    c = params.require_c()
    F, mu, s_h, alpha = params.F, params.mu, params.s_h, params.alpha
    d1, d2 = branch_coefficients(end, params, lam)
    r1 = c * c + 4.0 * d1
    r2 = c * c + 4.0 * d2
    scale = max(c * c, abs(4.0 * d1), abs(4.0 * d2), 1e-12)
    if abs(r1) < 1e-13 * scale or abs(r2) < 1e-13 * scale:
        gamma_A = mu * (1.0 / F - alpha) - c * c / 4.0
        raise DegenerateSplittingError(
            f"spatial eigenvalues collide at lambda = {lam}; on the real axis "
            f"this happens at the absolute-spectrum edge gamma_A = {gamma_A:.10g}"
        )
    sign = 1.0 if end == "-" else -1.0
    eta1 = 0.5 * (-c + sign * np.sqrt(complex(r1)))
    eta2 = 0.5 * (-c + sign * np.sqrt(complex(r2)))

    if end == "-":
        # Fast branch lives purely in (p, p_z); slow branch couples back into
        # p through the off-diagonal entry 1 - alpha mu.
        w = (mu * (1.0 - F * alpha * (1.0 - s_h)) - (1.0 - alpha * mu)) / (
            1.0 - alpha * mu
        )
        zeta1 = np.array([1.0, 0.0, eta1, 0.0], dtype=complex)
        zeta2 = np.array([1.0, w, eta2, eta2 * w], dtype=complex)
    else:
        # Fast branch lives purely in (q, q_z); slow branch couples into q
        # through the CI entry F - mu + mu s_h.
        w = (F - mu + mu * s_h) / (mu * (alpha - 1.0 / F) - (F - mu))
        zeta1 = np.array([0.0, 1.0, 0.0, eta1], dtype=complex)
        zeta2 = np.array([1.0, w, eta2, eta2 * w], dtype=complex)
    return AsymptoticEigen(end=end, lam=complex(lam), eta1=eta1, eta2=eta2,
                           zeta1=zeta1, zeta2=zeta2)
