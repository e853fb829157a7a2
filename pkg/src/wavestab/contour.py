"""Root counting in the right half-plane by the argument principle.

The boundary is a closed semicircular contour: a large arc of radius r_b
through the positive real axis, segments along the imaginary axis, and a
small arc of radius r_s indenting into the right half-plane around the
origin -- the indentation is what keeps the translational root at lambda =
0 *outside* the counted region.  The whole curve stays in the resolvent
set (the essential spectrum lives strictly left of the imaginary axis), is
positively oriented, and the number of Evans-function roots it encloses is
the winding number of d around 0 along it.

The winding number is accumulated as discrete principal-branch argument
increments -- never by differentiating d.  That is exact as long as no
single step moves the argument by pi or more; steps of at least pi/2 are
treated as suspect and bisected (on the curve, by arc length) for up to
four rounds before giving up, which concentrates samples automatically
where |d| is small and the phase turns fast, e.g. approaching the small
arc with r_s far below the scale on which d varies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evans import STATUS_OK, StiffnessError, evans_scan
from .model import ModelParams
from .profile import WaveProfile

__all__ = [
    "ZeroSampleError",
    "AliasingError",
    "Contour",
    "WindingNumber",
    "ContourResult",
    "build_contour",
    "winding_number",
    "count_roots",
]

#: bisect any step whose argument jump reaches this (safety margin under pi)
REFINE_THRESHOLD = math.pi / 2
#: a jump this close to pi is numerically indistinguishable from aliasing
ALIAS_THRESHOLD = math.pi - 1e-6
MAX_REFINE_ROUNDS = 4
#: every geometric piece keeps at least this many samples, however short
MIN_PIECE_SAMPLES = 16


class ZeroSampleError(ValueError):
    """A contour sample hit a root exactly; the argument is undefined there."""


class AliasingError(RuntimeError):
    """Argument increments too coarse to trust, even after refinement."""


@dataclass(frozen=True, eq=False)
class Contour:
    """A closed right-half-plane curve with its generating radii.

    points traces the curve once, positively oriented, with the closing
    duplicate included (points[0] == points[-1] to 1e-12); n_points counts
    the unique samples; s holds the matching arc-length fractions.  ``at``
    maps arc-length fractions in [0, 1] to exact on-curve points, which is
    how refinement inserts midpoints.
    """

    points: np.ndarray
    s: np.ndarray
    r_s: float
    r_b: float
    n_points: int

    def at(self, s):
        """Point(s) on the curve at arc-length fraction s in [0, 1]."""
        s = np.asarray(s, dtype=float)
        r_s, r_b = self.r_s, self.r_b
        big, seg, small = math.pi * r_b, r_b - r_s, math.pi * r_s
        total = big + 2.0 * seg + small
        ell = s * total
        out = np.empty(s.shape, dtype=complex)
        m1 = ell <= big
        m2 = ~m1 & (ell <= big + seg)
        m3 = ~m1 & ~m2 & (ell <= big + seg + small)
        m4 = ~(m1 | m2 | m3)
        out[m1] = r_b * np.exp(1j * (-math.pi / 2 + ell[m1] / r_b))
        out[m2] = 1j * (r_b - (ell[m2] - big))
        out[m3] = r_s * np.exp(1j * (math.pi / 2 - (ell[m3] - big - seg) / r_s))
        out[m4] = -1j * (r_s + (ell[m4] - big - seg - small))
        return out


@dataclass(frozen=True, eq=False)
class WindingNumber:
    """Integer winding plus the diagnostics that justify trusting it."""

    winding: int
    total_arg_change: float
    residual: float  # total_arg_change / 2 pi minus the integer
    max_step_arg: float


@dataclass(frozen=True, eq=False)
class ContourResult:
    """d along the (possibly refined) contour and the root count it implies.

    points and d_values are closed (last entry repeats the first) so the
    cumulative argument cum_arg ends at total_arg_change = 2 pi * winding
    + residual; n_points_final counts unique samples after refinement.
    """

    points: np.ndarray
    d_values: np.ndarray
    cum_arg: np.ndarray
    total_arg_change: float
    winding: int
    max_step_arg: float
    n_points_final: int


def build_contour(r_s: float, r_b: float, n_points: int) -> Contour:
    """Sample the standard right-half-plane contour.

    Samples are distributed proportionally to arc length, except that each
    of the four pieces (big arc, two segments, small arc) keeps a minimum
    so a tiny indentation is never skipped outright; the adaptive
    refinement in ``count_roots`` handles the rest.

    Args:
        r_s: indentation radius around the origin, 0 < r_s < r_b.
        r_b: outer radius.
        n_points: unique samples on the curve, at least 256.
    """
    if not 0.0 < r_s < r_b:
        raise ValueError(f"need 0 < r_s < r_b, got r_s = {r_s}, r_b = {r_b}")
    if n_points < 256:
        raise ValueError(f"need n_points >= 256, got {n_points}")
    lengths = np.array(
        [math.pi * r_b, r_b - r_s, math.pi * r_s, r_b - r_s], dtype=float
    )
    counts = np.maximum(
        MIN_PIECE_SAMPLES,
        np.round(n_points * lengths / lengths.sum()).astype(int),
    )
    counts[0] += n_points - int(counts.sum())  # big arc absorbs the rounding

    fractions = np.cumsum(lengths) / lengths.sum()
    starts = np.concatenate(([0.0], fractions[:-1]))
    s = np.concatenate(
        [
            np.linspace(a, b, k, endpoint=False)
            for a, b, k in zip(starts, fractions, counts)
        ]
        + [[1.0]]
    )
    contour = Contour(points=np.empty(0), s=s, r_s=float(r_s),
                      r_b=float(r_b), n_points=int(n_points))
    object.__setattr__(contour, "points", contour.at(s))
    return contour


def _increments(values: np.ndarray) -> np.ndarray:
    """Principal-branch argument steps between consecutive closed samples."""
    if np.any(values == 0) or not np.all(np.isfinite(values)):
        k = int(np.flatnonzero((values == 0) | ~np.isfinite(values))[0])
        raise ZeroSampleError(
            f"sample {k} is {values[k]}; the argument is undefined on a root"
        )
    return np.angle(values[1:] / values[:-1])


def winding_number(values) -> WindingNumber:
    """Winding of a closed sample sequence around the origin.

    Args:
        values: ordered nonzero complex samples tracing a closed curve
            (first and last should coincide; if they do not, the closing
            step is implied).

    Raises:
        ZeroSampleError: a sample is exactly zero (or not finite).
        AliasingError: some step jumps by essentially pi, so the winding
            cannot be trusted at this resolution.
    """
    values = np.asarray(values, dtype=complex)
    if values[0] != values[-1]:
        values = np.concatenate([values, values[:1]])
    steps = _increments(values)
    worst = float(np.max(np.abs(steps)))
    if worst >= ALIAS_THRESHOLD:
        k = int(np.argmax(np.abs(steps)))
        raise AliasingError(
            f"argument jump of {worst:.6f} rad at step {k} is "
            "indistinguishable from aliasing; refine the sampling"
        )
    total = float(np.sum(steps))
    winding = round(total / (2.0 * math.pi))
    return WindingNumber(
        winding=int(winding),
        total_arg_change=total,
        residual=total / (2.0 * math.pi) - winding,
        max_step_arg=worst,
    )


def _count_roots_of(f, contour: Contour, auto_refine: bool = True
                    ) -> ContourResult:
    """Winding of an arbitrary vectorised function along a contour.

    f maps an array of complex points to an array of complex values; the
    Evans function is the intended payload, but the pipeline (sampling,
    refinement, accumulation) is generic and oracle-testable with any
    analytic function of known roots.
    """
    # evaluate unique points only; the closing value repeats the first
    s_open = contour.s[:-1]
    points = contour.points[:-1]
    values = f(points)

    rounds = 0
    while True:
        closed = np.concatenate([values, values[:1]])
        steps = _increments(closed)
        flagged = np.flatnonzero(np.abs(steps) >= REFINE_THRESHOLD)
        if flagged.size == 0 or not auto_refine:
            break
        if rounds >= MAX_REFINE_ROUNDS:
            k = int(np.argmax(np.abs(steps)))
            a = points[k]
            b = points[(k + 1) % points.size]
            raise AliasingError(
                f"refinement exhausted after {MAX_REFINE_ROUNDS} rounds: "
                f"argument still jumps {float(np.max(np.abs(steps))):.4f} rad "
                f"between {a:.6g} and {b:.6g}"
            )
        s_closed = np.concatenate([s_open, [1.0]])
        mids = 0.5 * (s_closed[flagged] + s_closed[flagged + 1])
        new_points = contour.at(mids)
        new_values = f(new_points)
        order = np.argsort(np.concatenate([s_open, mids]))
        s_open = np.concatenate([s_open, mids])[order]
        points = np.concatenate([points, new_points])[order]
        values = np.concatenate([values, new_values])[order]
        rounds += 1

    result = winding_number(np.concatenate([values, values[:1]]))
    closed_points = np.concatenate([points, points[:1]])
    closed_values = np.concatenate([values, values[:1]])
    cum = np.concatenate(([0.0], np.cumsum(_increments(closed_values))))
    return ContourResult(
        points=closed_points,
        d_values=closed_values,
        cum_arg=cum,
        total_arg_change=result.total_arg_change,
        winding=result.winding,
        max_step_arg=result.max_step_arg,
        n_points_final=int(points.size),
    )


def count_roots(
    profile: WaveProfile,
    params: ModelParams | None = None,
    r_s: float = 0.1,
    r_b: float = 10.0,
    n_points: int = 1024,
    auto_refine: bool = True,
) -> ContourResult:
    """Count Evans-function roots strictly inside the standard contour.

    Evaluates d along ``build_contour(r_s, r_b, n_points)`` (in parallel
    across points), bisects steps whose argument jump reaches pi/2 for up
    to four rounds, and returns the winding number -- the number of point
    eigenvalues enclosed.  The origin itself is excluded by construction.

    Raises:
        ValueError: bad radii or sample count.
        StiffnessError: an Evans evaluation failed on the contour.
        ZeroSampleError: a sample landed on a root exactly.
        AliasingError: jumps of ~pi survived refinement (or it exhausted).
    """
    contour = build_contour(r_s, r_b, n_points)

    def f(zs: np.ndarray) -> np.ndarray:
        out = evans_scan(zs, profile, params)
        for v in out:
            if v.status != STATUS_OK:
                raise StiffnessError(
                    f"Evans evaluation failed on the contour at "
                    f"lambda = {v.lam:.6g} ({v.status})",
                    z=float("nan"),
                )
        return np.array([v.d for v in out], dtype=complex)

    return _count_roots_of(f, contour, auto_refine=auto_refine)
