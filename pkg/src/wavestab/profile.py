"""The invasion front: a heteroclinic profile and its unique wavespeed.

In the co-moving frame the steady wave (u_hat, v_hat)(z) solves

    u'' + c u' + f(u, v) = 0,      (u, v)(-inf) = e_minus,
    v'' + c v' + g(u, v) = 0,      (u, v)(+inf) = e_plus,

with f, g the kinetics.  Both tail states are saddles of the 4-dimensional
first-order system with 2-dimensional unstable/stable manifolds, so a
connection is a codimension-one event: it selects the wavespeed c*.

The solver truncates to [-L, L] and closes the system with the tail
eigenstructure at lambda = 0.  Each end contributes the exact projection
boundary conditions: the deviation from the tail state must be orthogonal to
the left eigenvectors of the modes that grow *away* from that end -- two
kill conditions at -L (no stable content) and two at +L (no unstable
content), all closed-form in c and re-evaluated as c moves.  In components,
with eta1/eta2 the fast/slow rates and beta, gamma the branch-coupling
weights of the left eigenvectors,

    (u' - eta1- (u-(1-alpha mu))) + beta (v' - eta1- v) = 0   at -L
    v' = eta2-(c) v                                           at -L
    v(-L) = exp(-eta2-(c) L)                                  translation
    gamma (u' - eta1+ u) + (v' - eta1+ (v-(1-mu/F))) = 0      at +L
    u' = eta2+(c) u                                           at +L

-- the middle amplitude condition pins the translate (slow-tail coefficient
1 at z = 0), and five conditions balance the four ODE orders plus the
unknown c.  Imposing a second amplitude (for the u-tail at +L) instead of a
kill condition over-determines the translate: the solved front has u-tail
coefficient ~0.82, not 1, so the two amplitudes disagree by a z-shift of
about 3 and Newton has nothing to converge to.  With the projection set a
plain tanh initial guess converges at tol 1e-10 in under a second.

``miss_distance_scan`` exposes the codimension-one geometry that selects c*:
freeze c, keep both kill conditions and the anchor at -L (the solution *is*
the anchored unstable-manifold orbit of e_minus, computed stably -- literal
forward shooting is hopeless here, since fast-mode contamination grows by
e^{2L} ~ e^{400} across the domain), carry the orbit to a measuring station
past the front, kill only the fast growing mode there, and read off the one
mode nothing constrains: the slow growing content, which measures exactly
how the orbit misses the stable manifold of e_plus.  Its coefficient changes
sign once, at c*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.integrate import solve_bvp
from scipy.interpolate import CubicHermiteSpline

from .model import ModelParams, _kinetics

__all__ = [
    "ProfileSolveError",
    "WavespeedBracketError",
    "InsufficientTailError",
    "WaveProfile",
    "MissDistance",
    "DecayRates",
    "solve_profile",
    "decay_rates",
    "miss_distance_scan",
    "interpolate",
]


class ProfileSolveError(RuntimeError):
    """The collocation solve did not converge; carries the last residual."""


class WavespeedBracketError(ProfileSolveError):
    """The solve converged but the wavespeed left the admissible (0, 1)."""


class InsufficientTailError(ValueError):
    """A tail window holds too few nodes for a trustworthy rate fit."""


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """A solved front on [-L, L] plus everything needed to evaluate it.

    grid is strictly increasing (the solver's final, possibly refined mesh);
    u_hat, v_hat carry the densities and du_hat, dv_hat their z-derivatives
    at the nodes.  residual_norm is the largest collocation residual the
    solver reports; params stores the model parameters with c = c_star, so
    downstream spectral code can consume the profile directly.
    """

    grid: np.ndarray
    u_hat: np.ndarray
    v_hat: np.ndarray
    du_hat: np.ndarray
    dv_hat: np.ndarray
    c_star: float
    L: float
    residual_norm: float
    params: ModelParams

    @property
    def n_nodes(self) -> int:
        return int(self.grid.size)

    @cached_property
    def _splines(self) -> tuple[CubicHermiteSpline, CubicHermiteSpline]:
        return (
            CubicHermiteSpline(self.grid, self.u_hat, self.du_hat),
            CubicHermiteSpline(self.grid, self.v_hat, self.dv_hat),
        )


@dataclass(frozen=True)
class MissDistance:
    """Signed connection mismatch at one frozen trial wavespeed.

    distance is the slow-growing-mode coefficient carried by the anchored
    unstable-manifold orbit of e_minus, read off past the front and rescaled
    to its z = 0 amplitude; it vanishes at c* and is continuous in c wherever
    the solve converges.  converged = False records a failed solve (distance
    is NaN there).
    """

    c: float
    distance: float
    converged: bool


@dataclass(frozen=True)
class DecayRates:
    """Fitted exponential tail rates, all reported positive."""

    u_minus: float
    v_minus: float
    u_plus: float
    v_plus: float


@dataclass(frozen=True)
class _TailStructure:
    """Closed-form lambda = 0 tail data entering the boundary conditions.

    d1m/d2m and d1p/d2p are the fast/slow branch constants at -inf and +inf;
    beta and gamma weight the v- and u-parts of the fast-mode left
    eigenvectors (the slow-mode left eigenvectors are pure, so the slow kill
    conditions are plain Robin conditions on one component).
    """

    d1m: float
    d2m: float
    d1p: float
    d2p: float
    beta: float
    gamma: float

    @classmethod
    def of(cls, params: ModelParams) -> "_TailStructure":
        F, mu, s_h, alpha = params.F, params.mu, params.s_h, params.alpha
        d1m = 1.0 - alpha * mu
        d2m = mu * (1.0 - F * alpha * (1.0 - s_h))
        d1p = F - mu
        d2p = mu * (alpha - 1.0 / F)
        return cls(
            d1m=d1m,
            d2m=d2m,
            d1p=d1p,
            d2p=d2p,
            beta=(1.0 - alpha * mu) / (d1m - d2m),
            gamma=(F - mu + mu * s_h) / (d1p - d2p),
        )

    def rates(self, c: float) -> tuple[float, float, float, float]:
        """(fast, slow) growing rates at -inf and (fast, slow) decaying at +inf."""
        return (
            0.5 * (-c + math.sqrt(c * c + 4.0 * self.d1m)),
            0.5 * (-c + math.sqrt(c * c + 4.0 * self.d2m)),
            0.5 * (-c - math.sqrt(c * c + 4.0 * self.d1p)),
            0.5 * (-c - math.sqrt(c * c + 4.0 * self.d2p)),
        )

    def eta2_up_plus(self, c: float) -> float:
        """Slow *growing* rate at +inf (the one mode the scan leaves free)."""
        return 0.5 * (-c + math.sqrt(c * c + 4.0 * self.d2p))


def _eta2_minus(params: ModelParams, c: float) -> float:
    """Slow growing rate at z -> -inf for lambda = 0 (positive)."""
    d2 = params.mu * (1.0 - params.F * params.alpha * (1.0 - params.s_h))
    return 0.5 * (-c + math.sqrt(c * c + 4.0 * d2))


def _eta2_plus(params: ModelParams, c: float) -> float:
    """Slow decaying rate at z -> +inf for lambda = 0 (negative)."""
    d2 = params.mu * (params.alpha - 1.0 / params.F)
    return 0.5 * (-c - math.sqrt(c * c + 4.0 * d2))


def _steady_rhs(params: ModelParams):
    """First-order right-hand side of the steady-wave system, c a parameter.

    Intermediate Newton iterates may wander far outside the unit box, where
    the quadratic kinetics overflow harmlessly before the step is rejected,
    so floating-point warnings are silenced inside the closure.
    """

    def fun(z, y, p):
        c = p[0]
        with np.errstate(over="ignore", invalid="ignore"):
            du, dv = _kinetics(y[0], y[1], params)
        return np.vstack([y[2], y[3], -c * y[2] - du, -c * y[3] - dv])

    return fun


def _fixed_c_rhs(params: ModelParams, c: float):
    def fun(z, y):
        with np.errstate(over="ignore", invalid="ignore"):
            du, dv = _kinetics(y[0], y[1], params)
        return np.vstack([y[2], y[3], -c * y[2] - du, -c * y[3] - dv])

    return fun


def _tanh_guess(params: ModelParams, mesh: np.ndarray, width: float = 20.0):
    """Front-shaped seed: e_minus on the left rolling over to e_plus."""
    s = np.tanh(mesh / width)
    ds = (1.0 - s * s) / width
    y = np.empty((4, mesh.size))
    y[0] = params.u_minus * 0.5 * (1.0 - s)
    y[1] = params.v_plus * 0.5 * (1.0 + s)
    y[2] = -params.u_minus * 0.5 * ds
    y[3] = params.v_plus * 0.5 * ds
    return y


def solve_profile(
    params: ModelParams,
    L: float = 200.0,
    n_nodes: int = 4001,
    initial_guess: WaveProfile | None = None,
) -> WaveProfile:
    """Solve for the front profile and its wavespeed simultaneously.

    Args:
        params: model parameters; any stored c is ignored (c* is solved for).
        L: numerical-infinity half-width, at least 50.
        n_nodes: initial collocation mesh size, at least 401 (the solver may
            refine the mesh; the returned grid is the final one).
        initial_guess: optional previously solved profile to seed from
            (evaluated onto the new mesh); defaults to a tanh front of width
            20 with c = 0.05.

    Returns:
        The solved ``WaveProfile``.

    Raises:
        ValueError: L or n_nodes below the supported range.
        ProfileSolveError: collocation Newton iteration failed to converge.
        WavespeedBracketError: converged, but c* escaped (0, 1).
    """
    if L < 50:
        raise ValueError(f"need L >= 50 to contain the tails, got {L}")
    if n_nodes < 401:
        raise ValueError(f"need n_nodes >= 401, got {n_nodes}")

    u_eq, v_eq = params.u_minus, params.v_plus
    tail = _TailStructure.of(params)

    def attempt(mesh, y0, c0, tol):
        half = -mesh[0]  # anchor the translate relative to the active domain

        def bc(ya, yb, p):
            e1m, e2m, e1p, e2p = tail.rates(p[0])
            return np.array(
                [
                    (ya[2] - e1m * (ya[0] - u_eq))
                    + tail.beta * (ya[3] - e1m * ya[1]),
                    ya[3] - e2m * ya[1],
                    ya[1] - math.exp(-e2m * half),
                    tail.gamma * (yb[2] - e1p * yb[0])
                    + (yb[3] - e1p * (yb[1] - v_eq)),
                    yb[2] - e2p * yb[0],
                ]
            )

        return solve_bvp(
            _steady_rhs(params),
            bc,
            mesh,
            y0,
            p=np.array([c0]),
            tol=tol,
            max_nodes=200_000,
            verbose=0,
        )

    mesh = np.linspace(-L, L, n_nodes)
    if initial_guess is not None:
        u0, v0, du0, dv0 = interpolate(initial_guess, mesh)
        sol = attempt(mesh, np.vstack([u0, v0, du0, dv0]), initial_guess.c_star, 1e-10)
    else:
        # Newton from the tanh seed is basin-sensitive: on domains much wider
        # than the front it wanders off to a spurious reversed branch
        # (c ~ -0.63).  So locate the front first on a capped, coarse domain,
        # then continue the slow tails out to the requested one and refine.
        L0 = min(L, 200.0)
        coarse_mesh = np.linspace(-L0, L0, min(n_nodes, 1001))
        coarse = attempt(coarse_mesh, _tanh_guess(params, coarse_mesh), 0.05, 1e-8)
        if coarse.status != 0:
            raise ProfileSolveError(
                f"front solve failed on the coarse mesh ({coarse.message.strip()}); "
                f"last max collocation residual {np.max(coarse.rms_residuals):.3e}"
            )
        c0 = float(coarse.p[0])
        y0 = np.vstack([np.interp(mesh, coarse.x, coarse.y[i]) for i in range(4)])
        _, e2m, _, e2p = tail.rates(c0)
        left, right = mesh < -L0, mesh > L0
        for rows, eq, side, rate, ref in (
            ((0, 2), u_eq, left, e2m, -L0),
            ((1, 3), 0.0, left, e2m, -L0),
            ((0, 2), 0.0, right, e2p, L0),
            ((1, 3), v_eq, right, e2p, L0),
        ):
            if np.any(side):
                val, der = rows
                dev = np.interp(ref, coarse.x, coarse.y[val]) - eq
                y0[val, side] = eq + dev * np.exp(rate * (mesh[side] - ref))
                y0[der, side] = rate * dev * np.exp(rate * (mesh[side] - ref))
        sol = attempt(mesh, y0, c0, 1e-10)

    if sol.status != 0:
        raise ProfileSolveError(
            f"front solve failed ({sol.message.strip()}); "
            f"last max collocation residual {np.max(sol.rms_residuals):.3e}"
        )
    c_star = float(sol.p[0])
    if not 0.0 < c_star < 1.0:
        raise WavespeedBracketError(
            f"wavespeed left the admissible bracket (0, 1): c = {c_star}"
        )
    return WaveProfile(
        grid=sol.x.copy(),
        u_hat=sol.y[0].copy(),
        v_hat=sol.y[1].copy(),
        du_hat=sol.y[2].copy(),
        dv_hat=sol.y[3].copy(),
        c_star=c_star,
        L=float(L),
        residual_norm=float(np.max(sol.rms_residuals)),
        params=params.with_c(c_star),
    )


def decay_rates(
    profile: WaveProfile,
    window: tuple[float, float] = (1e-12, 1e-3),
    min_nodes: int = 20,
) -> DecayRates:
    """Exponential rates of the four tails, fitted from the profile itself.

    For each component and end, selects the nodes whose deviation from the
    limiting state falls inside ``window`` (on the correct half of the
    domain) and fits log-deviation against z by least squares.  Rates are
    returned positive regardless of end.

    Raises:
        InsufficientTailError: fewer than ``min_nodes`` usable nodes in some
            tail window.
    """
    z = profile.grid
    p = profile.params
    lo, hi = window

    def fit(deviation: np.ndarray, side: str, label: str) -> float:
        half = z < 0 if side == "-" else z > 0
        mask = half & (deviation > lo) & (deviation < hi)
        if int(np.sum(mask)) < min_nodes:
            raise InsufficientTailError(
                f"only {int(np.sum(mask))} nodes in the {label} tail window; "
                f"need {min_nodes} (is L large enough?)"
            )
        slope = np.polyfit(z[mask], np.log(deviation[mask]), 1)[0]
        return float(abs(slope))

    return DecayRates(
        u_minus=fit(np.abs(profile.u_hat - p.u_minus), "-", "u @ -inf"),
        v_minus=fit(np.abs(profile.v_hat), "-", "v @ -inf"),
        u_plus=fit(np.abs(profile.u_hat), "+", "u @ +inf"),
        v_plus=fit(np.abs(profile.v_hat - p.v_plus), "+", "v @ +inf"),
    )


def miss_distance_scan(
    params: ModelParams,
    c_values,
    L: float = 200.0,
    n_nodes: int = 2001,
    station: float = 75.0,
) -> list[MissDistance]:
    """Connection mismatch as a function of a frozen trial wavespeed.

    For each c the boundary-value problem is solved on [-L, station] with c
    frozen and four conditions: both kill conditions and the translation
    anchor at -L (which pin the solution to the unstable-manifold orbit of
    e_minus, at a fixed translate) and the fast-mode kill at the station.
    Nothing constrains the slow growing mode there, so its content,

        distance = (u' - eta2+ u)|_station * exp(-eta2_up+ station),

    rescaled back to its z = 0 amplitude, measures exactly how the orbit
    misses the stable manifold of e_plus; it is continuous in c and crosses
    zero once, at c*.  The station sits past the front but well short of L:
    off c* the anchored orbit leaves the unit box and grows at the slow
    unstable rate, so carrying it all the way to +L overflows for every c
    except c* itself, while measuring too close to the front pollutes the
    linear reading with quadratic tail corrections (at the default the
    contamination is ~1e-7 of the leading coefficient).  Trial speeds where
    the solve diverges are recorded with converged = False rather than
    raising, and successive solves reuse the previous converged solution as
    the seed (plain continuation).

    Args:
        params: model parameters; stored c ignored.
        c_values: iterable of trial speeds, each in (0, 1).
        L, n_nodes: left truncation and initial mesh, as in ``solve_profile``.
        station: right end of the solve domain and measuring point.
    """
    c_values = [float(c) for c in c_values]
    for c in c_values:
        if not 0.0 < c < 1.0:
            raise ValueError(f"trial wavespeed outside (0, 1): {c}")
    if not -L < station <= L:
        raise ValueError(f"station must lie in (-L, L], got {station}")

    mesh = np.linspace(-L, station, n_nodes)
    u_eq, v_eq = params.u_minus, params.v_plus
    tail = _TailStructure.of(params)
    results: list[MissDistance] = []
    seed = None
    for c in c_values:
        e1m, e2m, e1p, e2p = tail.rates(c)

        def bc(ya, yb, _r=(e1m, e2m, e1p)):
            f_m, s_m, f_p = _r
            return np.array(
                [
                    (ya[2] - f_m * (ya[0] - u_eq))
                    + tail.beta * (ya[3] - f_m * ya[1]),
                    ya[3] - s_m * ya[1],
                    ya[1] - math.exp(-s_m * L),
                    tail.gamma * (yb[2] - f_p * yb[0])
                    + (yb[3] - f_p * (yb[1] - v_eq)),
                ]
            )

        y0 = seed if seed is not None else _tanh_guess(params, mesh)
        sol = solve_bvp(
            _fixed_c_rhs(params, c), bc, mesh, y0, tol=1e-10,
            max_nodes=200_000, verbose=0,
        )
        if sol.status != 0:
            results.append(MissDistance(c=c, distance=float("nan"), converged=False))
            continue
        residual = float(sol.y[2, -1] - e2p * sol.y[0, -1])
        distance = residual * math.exp(-tail.eta2_up_plus(c) * station)
        results.append(MissDistance(c=c, distance=distance, converged=True))
        seed = np.vstack([np.interp(mesh, sol.x, sol.y[i]) for i in range(4)])
    return results


def interpolate(profile: WaveProfile, z):
    """Profile values and derivatives anywhere on the line.

    Cubic Hermite interpolation through the stored nodes and derivatives for
    |z| <= L; beyond the truncation the profile is clamped to the tail states
    with zero derivatives (z < -L gives e_minus, z > +L gives e_plus).

    Args:
        profile: a solved front.
        z: scalar or array of positions.

    Returns:
        Tuple (u, v, du, dv), scalars for scalar input.
    """
    su, sv = profile._splines
    z_arr = np.asarray(z, dtype=float)
    zc = np.clip(z_arr, profile.grid[0], profile.grid[-1])
    u = np.asarray(su(zc))
    v = np.asarray(sv(zc))
    du = np.asarray(su(zc, 1))
    dv = np.asarray(sv(zc, 1))
    p = profile.params
    below = z_arr < profile.grid[0]
    above = z_arr > profile.grid[-1]
    if np.any(below) or np.any(above):
        u = np.where(below, p.u_minus, np.where(above, 0.0, u))
        v = np.where(below, 0.0, np.where(above, p.v_plus, v))
        du = np.where(below | above, 0.0, du)
        dv = np.where(below | above, 0.0, dv)
    if z_arr.ndim == 0:
        return float(u), float(v), float(du), float(dv)
    return u, v, du, dv
