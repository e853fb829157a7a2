"""The Evans function: an analytic detector for point spectrum.

An eigenvalue lambda right of the essential spectrum is a value where the
two-dimensional subspace of perturbations decaying to the left meets the
two-dimensional subspace decaying to the right.  Tracking individual basis
solutions fails numerically -- the fast mode swamps the slow one at any
tolerance -- so the flow is lifted to second-compound (wedge) coordinates,
where a two-plane is a single 6-vector psi and the stiffness disappears:
the plane spanned by both decaying solutions is itself the dominant mode of
the induced flow psi' = compound(A(z, lambda)) psi.

Each side is seeded at +-L with the wedge of the two relevant asymptotic
eigenvectors, rescaled by exp(-(eta1 + eta2) z) so the carried mode is
neutral (the shift is subtracted inside the flow, keeping norms near 1),
and integrated to the matching point z = 0.  The Evans value

    d = psi1- psi6+ - psi2- psi5+ + psi3- psi4+
      + psi4- psi3+ - psi5- psi2+ + psi6- psi1+

is the coefficient of the full volume form in psi- ^ psi+: it vanishes
exactly when the two planes intersect, i.e. at point spectrum.  Every
ingredient (eigenvector normalisation, branch of the rates, the flow) is
analytic in lambda and real for real lambda, so d is analytic with
d(conj lambda) = conj(d(lambda)); its zeros and sign changes are meaningful
while its overall scale is a normalisation artefact.

By default evaluation demands lambda strictly right of the essential
spectrum (off the absolute-spectrum ray); real lambda between the
absolute-spectrum edge and the essential boundary can be permitted
explicitly (``inside_essential``), where the analytic continuation along
the principal eta branches stays valid -- that is how the root at the
branch-point side is probed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import ModelParams, spatial_eigen
from .profile import WaveProfile
from .spectrum import (
    ABSOLUTE_BRANCH_CUT,
    ESSENTIAL,
    RESOLVENT_SIDE,
    absolute_edge,
    classify,
    rightmost_essential,
)

__all__ = [
    "SpectralRegionError",
    "StiffnessError",
    "CompoundState",
    "EvansValue",
    "compound_matrix",
    "wedge_coordinates",
    "evans",
    "evans_scan",
]

#: status tokens carried by EvansValue (and the scan CSV written by the CLI).
STATUS_OK = "ok"
STATUS_STIFF = "stiffness"
STATUS_REGION = "spectral-region"


class SpectralRegionError(ValueError):
    """lambda lies where the Evans construction is not defined."""


class StiffnessError(RuntimeError):
    """The rescaled flow lost normalisation (overflow/underflow) mid-run."""

    def __init__(self, message: str, z: float):
        super().__init__(message)
        self.z = z


@dataclass(frozen=True, eq=False)
class CompoundState:
    """One side's wedge coordinates carried to the matching point.

    psi are the six components in the basis (e1^e2, e1^e3, e1^e4, e2^e3,
    e2^e4, e3^e4); end records which side ('-' or '+') and z where the
    integration stopped (0 unless it failed).  plucker_residual is the
    largest relative decomposability defect |psi1 psi6 - psi2 psi5 +
    psi3 psi4| / ||psi||^2 seen along the trajectory, and norm_min/norm_max
    bracket the rescaled norm (both are integration-quality diagnostics).
    """

    psi: np.ndarray
    end: str
    z: float
    plucker_residual: float
    norm_min: float
    norm_max: float
    n_steps: int


@dataclass(frozen=True, eq=False)
class EvansValue:
    """d(lambda) plus the diagnostics of the two half-line integrations.

    rescale_exponents records the (eta1 + eta2) sums subtracted from each
    half's flow -- together with the fixed eigenvector normalisation they
    pin down the (analytic, nonvanishing) factor relating this d to any
    other normalisation of the Evans function.  status is 'ok' for values
    computed by ``evans``; ``evans_scan`` records per-point failures as
    'stiffness' or 'spectral-region' with d = nan.
    """

    lam: complex
    d: complex
    rescale_exponents: tuple[complex, complex]
    status: str
    plucker_residual: float
    norm_min: float
    norm_max: float


def compound_matrix(A: np.ndarray) -> np.ndarray:
    """Second additive compound of a 4x4 matrix.

    The 6x6 matrix governing the induced flow of wedges: if w1' = A w1 and
    w2' = A w2 then (w1 ^ w2)' = compound_matrix(A) (w1 ^ w2) in the basis
    (e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4).  Its eigenvalues are the six
    pairwise sums of eigenvalues of A.
    """
    A = np.asarray(A)
    if A.shape != (4, 4):
        raise ValueError(f"need a 4x4 matrix, got shape {A.shape}")
    out = np.empty((6, 6), dtype=complex)
    out[0] = (A[0, 0] + A[1, 1], A[1, 2], A[1, 3], -A[0, 2], -A[0, 3], 0.0)
    out[1] = (A[2, 1], A[0, 0] + A[2, 2], A[2, 3], A[0, 1], 0.0, -A[0, 3])
    out[2] = (A[3, 1], A[3, 2], A[0, 0] + A[3, 3], 0.0, A[0, 1], A[0, 2])
    out[3] = (-A[2, 0], A[1, 0], 0.0, A[1, 1] + A[2, 2], A[2, 3], -A[1, 3])
    out[4] = (-A[3, 0], 0.0, A[1, 0], A[3, 2], A[1, 1] + A[3, 3], A[1, 2])
    out[5] = (0.0, -A[3, 0], A[2, 0], -A[3, 1], A[2, 1], A[2, 2] + A[3, 3])
    return out


def wedge_coordinates(w1: np.ndarray, w2: np.ndarray) -> np.ndarray:
    """The six 2x2 minors of the 4x2 matrix [w1 w2], in basis order."""
    w1 = np.asarray(w1, dtype=complex).reshape(4)
    w2 = np.asarray(w2, dtype=complex).reshape(4)
    return np.array(
        [
            w1[0] * w2[1] - w1[1] * w2[0],
            w1[0] * w2[2] - w1[2] * w2[0],
            w1[0] * w2[3] - w1[3] * w2[0],
            w1[1] * w2[2] - w1[2] * w2[1],
            w1[1] * w2[3] - w1[3] * w2[1],
            w1[2] * w2[3] - w1[3] * w2[2],
        ]
    )


def _resolve(profile: WaveProfile, params: ModelParams | None,
             half_width: float | None) -> tuple[ModelParams, float, float]:
    """Fill in defaults: parameters from the profile, full truncation width."""
    if params is None:
        params = profile.params
    c = params.c if params.c is not None else profile.c_star
    params = params if params.c is not None else params.with_c(c)
    hw = profile.L if half_width is None else float(half_width)
    if not 0.0 < hw <= profile.L:
        raise ValueError(
            f"half_width must lie in (0, {profile.L}] (the profile's domain), "
            f"got {hw}"
        )
    return params, c, hw


def _region_verdict(params: ModelParams, c: float, lam: complex,
                    inside_essential: bool) -> str | None:
    """None if lambda is admissible, else a human-readable refusal."""
    cls = classify(params, c, lam)
    if cls.verdict == RESOLVENT_SIDE:
        return None
    if cls.verdict == ESSENTIAL and inside_essential:
        lam = complex(lam)
        if lam.imag == 0.0 and (
            absolute_edge(params, c) < lam.real < rightmost_essential(params, c)
        ):
            return None
        return (
            f"lambda = {lam} is in the essential spectrum; only real lambda "
            "between the absolute edge and the essential boundary is "
            "continuable"
        )
    if cls.verdict == ABSOLUTE_BRANCH_CUT:
        return (
            f"lambda = {lam} lies on the absolute-spectrum ray, where the "
            "eta branches collide"
        )
    return (
        f"lambda = {lam} is in the essential spectrum "
        f"(Morse indices {cls.i_minus}/{cls.i_plus}); pass "
        "inside_essential=True to continue along the real gap"
    )


def _seeds(params: ModelParams, lam: complex):
    """Rescale exponents and initial wedges for both half-line flows."""
    minus = spatial_eigen("-", params, lam)
    plus = spatial_eigen("+", params, lam)
    return (
        complex(minus.eta1 + minus.eta2),
        complex(plus.eta1 + plus.eta2),
        wedge_coordinates(minus.zeta1, minus.zeta2),
        wedge_coordinates(plus.zeta1, plus.zeta2),
    )


def _profile_arrays(profile: WaveProfile):
    return tuple(
        np.ascontiguousarray(a, dtype=np.float64)
        for a in (profile.grid, profile.u_hat, profile.v_hat,
                  profile.du_hat, profile.dv_hat)
    )


def _propagate(end: str, lam: complex, shift: complex, psi0: np.ndarray,
               profile: WaveProfile, params: ModelParams, hw: float,
               rtol: float, atol: float) -> CompoundState:
    grid, u, v, du, dv = _profile_arrays(profile)
    z0 = -hw if end == "-" else hw
    psi, status, fail_z, plucker, lo, hi, steps = _kernels._flow_to_zero(
        np.ascontiguousarray(psi0, dtype=np.complex128), z0, complex(lam),
        shift, params.require_c(), params.F, params.mu, params.s_h,
        params.alpha, grid, u, v, du, dv, rtol, atol,
    )
    state = CompoundState(
        psi=psi, end=end, z=0.0 if status == _kernels.OK else float(fail_z),
        plucker_residual=float(plucker), norm_min=float(lo),
        norm_max=float(hi), n_steps=int(steps),
    )
    if status != _kernels.OK:
        raise StiffnessError(
            f"rescaled flow from z = {z0:g} lost normalisation near "
            f"z = {state.z:g} (lambda = {lam})",
            z=state.z,
        )
    return state


def evans(
    lam: complex,
    profile: WaveProfile,
    params: ModelParams | None = None,
    *,
    inside_essential: bool = False,
    half_width: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> EvansValue:
    """Evaluate the Evans function at one spectral point.

    Args:
        lam: spectral parameter, strictly right of the essential spectrum
            (or real in the continuable gap with ``inside_essential``).
        profile: the solved front the linearisation rides on.
        params: optional parameter override; defaults to the profile's own
            (with c = c*).
        inside_essential: permit real lambda between the absolute-spectrum
            edge and the essential boundary, for probing the branch point.
        half_width: start the half-line integrations at -+this coordinate
            instead of the profile's +-L (used for truncation studies).
        rtol, atol: integration tolerances.

    Raises:
        SpectralRegionError: lambda outside the admissible region.
        StiffnessError: the rescaled flow lost normalisation.
    """
    params, c, hw = _resolve(profile, params, half_width)
    refusal = _region_verdict(params, c, lam, inside_essential)
    if refusal is not None:
        raise SpectralRegionError(refusal)
    shift_m, shift_p, psi0_m, psi0_p = _seeds(params, lam)
    minus = _propagate("-", lam, shift_m, psi0_m, profile, params, hw,
                       rtol, atol)
    plus = _propagate("+", lam, shift_p, psi0_p, profile, params, hw,
                      rtol, atol)
    d = complex(_kernels._match(minus.psi, plus.psi))
    return EvansValue(
        lam=complex(lam),
        d=d,
        rescale_exponents=(shift_m, shift_p),
        status=STATUS_OK,
        plucker_residual=max(minus.plucker_residual, plus.plucker_residual),
        norm_min=min(minus.norm_min, plus.norm_min),
        norm_max=max(minus.norm_max, plus.norm_max),
    )


def evans_scan(
    lambdas,
    profile: WaveProfile,
    params: ModelParams | None = None,
    *,
    inside_essential: bool = False,
    half_width: float | None = None,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> list[EvansValue]:
    """Evaluate the Evans function over many points, in parallel.

    Each point is independent (the profile is shared read-only), so the
    batch runs across threads.  Unlike ``evans``, failures do not raise:
    inadmissible points are recorded with status 'spectral-region' and
    failed integrations with 'stiffness', both carrying d = nan, so a scan
    over a partially admissible grid still returns one value per input in
    input order.
    """
    lams = [complex(l) for l in lambdas]
    params, c, hw = _resolve(profile, params, half_width)

    statuses: list[str | None] = []
    shifts_m = np.zeros(len(lams), dtype=np.complex128)
    shifts_p = np.zeros(len(lams), dtype=np.complex128)
    psi0_m = np.zeros((len(lams), 6), dtype=np.complex128)
    psi0_p = np.zeros((len(lams), 6), dtype=np.complex128)
    run = []
    for j, lam in enumerate(lams):
        if _region_verdict(params, c, lam, inside_essential) is not None:
            statuses.append(STATUS_REGION)
            continue
        shifts_m[j], shifts_p[j], psi0_m[j], psi0_p[j] = _seeds(params, lam)
        statuses.append(None)
        run.append(j)

    out: list[EvansValue | None] = [None] * len(lams)
    if run:
        idx = np.array(run, dtype=np.intp)
        grid, u, v, du, dv = _profile_arrays(profile)
        d, status, _fail_z, plucker, lo, hi = _kernels._evans_batch(
            np.array(lams, dtype=np.complex128)[idx], shifts_m[idx],
            shifts_p[idx], psi0_m[idx], psi0_p[idx], hw,
            params.require_c(), params.F, params.mu, params.s_h,
            params.alpha, grid, u, v, du, dv, rtol, atol,
        )
        for k, j in enumerate(run):
            out[j] = EvansValue(
                lam=lams[j],
                d=complex(d[k]),
                rescale_exponents=(complex(shifts_m[j]), complex(shifts_p[j])),
                status=STATUS_OK if status[k] == _kernels.OK else STATUS_STIFF,
                plucker_residual=float(plucker[k]),
                norm_min=float(lo[k]),
                norm_max=float(hi[k]),
            )
    for j, lam in enumerate(lams):
        if out[j] is None:
            out[j] = EvansValue(
                lam=lam, d=complex("nan+nanj"),
                rescale_exponents=(0j, 0j), status=statuses[j] or STATUS_REGION,
                plucker_residual=float("nan"), norm_min=float("nan"),
                norm_max=float("nan"),
            )
    return out  # type: ignore[return-value]
