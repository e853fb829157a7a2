"""Essential and absolute spectrum of the asymptotic operators.

Because the tails of the front are constant states, Fourier modes e^{ikz}
diagonalise the linearisation there: each of the four decoupled branches
(two per end, see ``branch_coefficients``) contributes a dispersion parabola

    lambda(k) = vertex - k^2 + i c k,

and the essential spectrum is trapped between matching parabolas.  Away from
the curves an end is hyperbolic and carries a Morse index: the dimension of
the unstable subspace of the asymptotic matrix.  The essential spectrum is
exactly where the two ends disagree (the operator loses Fredholm index zero)
or where some spatial eigenvalue sits on the imaginary axis.  Left of

    gamma_A = mu (1/F - alpha) - c^2 / 4

the slow spatial rates at z -> +inf form a complex-conjugate pair with equal
real part: the real ray (-inf, gamma_A] is the absolute spectrum, which no
exponential weight can push aside and which caps how far any Evans-function
root hunt can reach.

Everything here works on the asymptotic matrices with a general-purpose
eigensolver -- deliberately not reusing the closed-form rates of
``spatial_eigen``, so the two routes check each other in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .model import ModelParams, asymptotic_matrix, branch_coefficients

__all__ = [
    "NonHyperbolicError",
    "DispersionCurves",
    "SpectralClassification",
    "dispersion",
    "dispersion_curves",
    "morse_index",
    "classify",
    "rightmost_essential",
    "absolute_edge",
]

#: Spatial eigenvalues closer to the imaginary axis than this count as
#: centers: the matrix is treated as non-hyperbolic rather than guessing.
CENTER_TOL = 1e-12

#: Verdicts of ``classify``.
RESOLVENT_SIDE = "resolvent-side"
ESSENTIAL = "essential"
ABSOLUTE_BRANCH_CUT = "absolute-branch-cut"


class NonHyperbolicError(ValueError):
    """A spatial eigenvalue sits on (or within tolerance of) the imaginary
    axis, so the unstable dimension is not well defined."""


def _vertices(params: ModelParams) -> tuple[float, float, float, float]:
    """k = 0 tips of the four dispersion parabolas, in branch order
    (fast -, slow -, fast +, slow +).

    Each branch quadratic has d = lambda - vertex, so the vertex is -d(0).
    """
    d1m, d2m = branch_coefficients("-", params, 0.0)
    d1p, d2p = branch_coefficients("+", params, 0.0)
    return (-d1m.real, -d2m.real, -d1p.real, -d2p.real)


@dataclass(frozen=True)
class DispersionCurves:
    """The four dispersion parabolas as callables of the real wavenumber k.

    Curve order is (fast -, slow -, fast +, slow +), matching the branch
    order of ``branch_coefficients``.  Every curve satisfies
    Re lambda(k) = vertex - k^2 and Im lambda(k) = c k exactly.
    """

    c: float
    vertices: tuple[float, float, float, float]
    curves: tuple[Callable[[float], complex], ...]

    def __call__(self, k: float) -> tuple[complex, complex, complex, complex]:
        return tuple(curve(k) for curve in self.curves)  # type: ignore[return-value]


def dispersion_curves(params: ModelParams, c: float) -> DispersionCurves:
    """Dispersion parabolas of the linearisation about the tail states."""
    vertices = _vertices(params)

    def make(vertex: float) -> Callable[[float], complex]:
        return lambda k: complex(vertex - k * k, c * k)

    return DispersionCurves(
        c=c, vertices=vertices, curves=tuple(make(v) for v in vertices)
    )


def dispersion(
    params: ModelParams, c: float, k: float
) -> tuple[complex, complex, complex, complex]:
    """The four dispersion values lambda(k) at one real wavenumber.

    Returns:
        (fast -, slow -, fast +, slow +) curve values vertex - k^2 + i c k.
    """
    return dispersion_curves(params, c)(k)


def morse_index(M: np.ndarray) -> int:
    """Dimension of the unstable subspace of a constant matrix.

    Args:
        M: square complex matrix, expected hyperbolic.

    Returns:
        Number of eigenvalues with Re > 0.

    Raises:
        NonHyperbolicError: some eigenvalue has |Re| < 1e-12, so counting
            would silently depend on rounding.
    """
    eigs = np.linalg.eigvals(np.asarray(M, dtype=complex))
    re = eigs.real
    if np.any(np.abs(re) < CENTER_TOL):
        raise NonHyperbolicError(
            "matrix has a center eigenvalue (|Re| < 1e-12); "
            "Morse index undefined"
        )
    return int(np.sum(re > 0))


@dataclass(frozen=True)
class SpectralClassification:
    """Where one spectral parameter sits relative to the front's spectrum.

    i_minus / i_plus count strictly unstable spatial eigenvalues (Re > 1e-12)
    of the two asymptotic matrices, so they stay well defined even when a
    center eigenvalue is present and the corresponding has_center flag is set.
    verdict is ``essential`` exactly when the indices differ or either end has
    a center; ``absolute-branch-cut`` when lambda sits on the real ray
    (-inf, gamma_A] within 1e-10; otherwise ``resolvent-side`` (which includes
    possible point spectrum -- Evans-function territory, not decided here).
    """

    lam: complex
    i_minus: int
    i_plus: int
    has_center_minus: bool
    has_center_plus: bool
    verdict: str


def _end_index(params: ModelParams, lam: complex, end: str) -> tuple[int, bool]:
    eigs = np.linalg.eigvals(asymptotic_matrix(end, params, lam))
    re = eigs.real
    has_center = bool(np.any(np.abs(re) < CENTER_TOL))
    return int(np.sum(re > CENTER_TOL)), has_center


def classify(params: ModelParams, c: float, lam: complex) -> SpectralClassification:
    """Classify a spectral parameter against essential and absolute spectrum.

    Args:
        params: model parameters (any stored c is overridden by ``c``).
        c: co-moving wavespeed.
        lam: spectral parameter.

    Returns:
        A ``SpectralClassification``; see its docstring for the verdict rules.
    """
    p = params.with_c(c)
    lam = complex(lam)
    i_minus, center_minus = _end_index(p, lam, "-")
    i_plus, center_plus = _end_index(p, lam, "+")
    if center_minus or center_plus or i_minus != i_plus:
        verdict = ESSENTIAL
    else:
        gamma_A = absolute_edge(params, c)
        ray_distance = float(np.hypot(lam.imag, max(0.0, lam.real - gamma_A)))
        verdict = ABSOLUTE_BRANCH_CUT if ray_distance <= 1e-10 else RESOLVENT_SIDE
    return SpectralClassification(
        lam=lam,
        i_minus=i_minus,
        i_plus=i_plus,
        has_center_minus=center_minus,
        has_center_plus=center_plus,
        verdict=verdict,
    )


def rightmost_essential(params: ModelParams, c: float) -> float:
    """Largest real part attained by the essential spectrum.

    The dispersion parabolas open leftward, so the supremum is the largest
    k = 0 vertex; for the parameter ranges admitted by ``ModelParams`` every
    vertex is negative, which is the spectral half of the front-stability
    story.  Independent of c: the i c k tilt moves curves only vertically.
    """
    del c  # kept for signature symmetry with the other classifiers
    return max(_vertices(params))


def absolute_edge(params: ModelParams, c: float) -> float:
    """Right edge gamma_A of the absolute spectrum (-inf, gamma_A].

    The slow branch at z -> +inf has rates eta = (-c +- sqrt(c^2 + 4 d))/2
    with d = lambda + mu (alpha - 1/F); their real parts collide exactly for
    real lambda <= mu (1/F - alpha) - c^2/4.  This edge caps every contour
    the point-spectrum search can use.
    """
    return params.mu * (1.0 / params.F - params.alpha) - c * c / 4.0
