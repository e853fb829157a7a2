"""wavestab: travelling-wave profiles and spectral stability for a
two-component Wolbachia invasion model.

The package is organised as a pipeline:

- ``model``:    kinetics, linearisation A(z, lambda), asymptotic eigenstructure
- ``profile``:  the heteroclinic front (u_hat, v_hat) and its wavespeed c*
- ``spectrum``: dispersion curves, Morse indices, essential/absolute spectrum
- ``evans``:    the Evans function D(lambda) via the second-compound flow
- ``contour``:  argument-principle root counting on right-half-plane contours
- ``simulate``: direct time integration cross-checks (front speed, decay)
- ``cli``:      command-line front end writing CSV/JSON artifacts
"""

from .contour import (
    AliasingError,
    Contour,
    ContourResult,
    WindingNumber,
    ZeroSampleError,
    build_contour,
    count_roots,
    winding_number,
)
from .model import (
    DEFAULT_PARAMS,
    AsymptoticEigen,
    DegenerateSplittingError,
    DomainError,
    KineticState,
    ModelParamError,
    ModelParams,
    SingularPointError,
    asymptotic_matrix,
    branch_coefficients,
    equilibria,
    linearisation_at,
    reaction,
    spatial_eigen,
)
from .evans import (
    CompoundState,
    EvansValue,
    SpectralRegionError,
    StiffnessError,
    compound_matrix,
    evans,
    evans_scan,
    wedge_coordinates,
)
from .simulate import (
    DecayTrace,
    FrontTrack,
    InstabilityError,
    SimulationConfig,
    SimulationResult,
    Snapshot,
    perturbation_decay,
    run,
)
from .profile import (
    DecayRates,
    InsufficientTailError,
    MissDistance,
    ProfileSolveError,
    WaveProfile,
    WavespeedBracketError,
    decay_rates,
    interpolate,
    miss_distance_scan,
    solve_profile,
)
from .spectrum import (
    DispersionCurves,
    NonHyperbolicError,
    SpectralClassification,
    absolute_edge,
    classify,
    dispersion,
    dispersion_curves,
    morse_index,
    rightmost_essential,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PARAMS",
    "AliasingError",
    "AsymptoticEigen",
    "CompoundState",
    "Contour",
    "ContourResult",
    "DecayRates",
    "DecayTrace",
    "DegenerateSplittingError",
    "DispersionCurves",
    "DomainError",
    "EvansValue",
    "FrontTrack",
    "InstabilityError",
    "InsufficientTailError",
    "KineticState",
    "MissDistance",
    "ModelParamError",
    "ModelParams",
    "NonHyperbolicError",
    "ProfileSolveError",
    "SimulationConfig",
    "SimulationResult",
    "SingularPointError",
    "Snapshot",
    "SpectralClassification",
    "SpectralRegionError",
    "StiffnessError",
    "WaveProfile",
    "WavespeedBracketError",
    "WindingNumber",
    "ZeroSampleError",
    "absolute_edge",
    "asymptotic_matrix",
    "branch_coefficients",
    "build_contour",
    "classify",
    "compound_matrix",
    "count_roots",
    "decay_rates",
    "dispersion",
    "dispersion_curves",
    "equilibria",
    "evans",
    "evans_scan",
    "interpolate",
    "linearisation_at",
    "miss_distance_scan",
    "morse_index",
    "perturbation_decay",
    "reaction",
    "rightmost_essential",
    "run",
    "solve_profile",
    "spatial_eigen",
    "wedge_coordinates",
    "winding_number",
    "__version__",
]
