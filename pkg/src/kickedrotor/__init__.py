"""Quantum kicked-ring revival toolkit.

A particle on a ring receives periodic momentum kicks; at special driving
periods the free flight between kicks rephases exactly and the dynamics
admit closed forms. This package propagates the exact quantum map,
evaluates the matching analytic results, and measures how the revival
features narrow as the kick number grows.
"""
from .analytics import (
    CorrectionField,
    PerturbativeDensity,
    TruncationError,
    bessel_j,
    bessel_j_ladder,
    bessel_j_row,
    correction_term,
    perturbative_density,
    resonant_state,
)
from .observables import (
    UNIFORM_SIGMA_X,
    DegenerateDensityError,
    Density,
    NoCrossingError,
    Profile,
    fwhm,
    l1_distance,
    mean_energy,
    momentum_density,
    position_density,
    sigma_x,
)
from .propagator import (
    FreePhaseSpec,
    KickOperator,
    LeakageError,
    apply_free,
    apply_kick,
    evolve,
    evolve_dense,
    fidelity_protocol,
    kick_matrix,
    propagate,
)
from .scanner import (
    EpsilonScan,
    FitRefusalError,
    ModeComparison,
    RangeCapError,
    WidthScaling,
    auto_range,
    compare_modes,
    fit_widths,
    power_law_fit,
    scan_epsilon,
    scan_width,
    width_scaling,
)
from .wavepacket import (
    GridTooSmallError,
    MomentumWavefunction,
    PositionWavefunction,
    SimConfig,
    SpatialGrid,
    default_half_width,
    default_n_points,
    init_momentum_eigenstate,
    to_momentum,
    to_position,
)

__version__ = "0.1.0"

__all__ = [
    "CorrectionField",
    "DegenerateDensityError",
    "Density",
    "EpsilonScan",
    "FitRefusalError",
    "FreePhaseSpec",
    "GridTooSmallError",
    "KickOperator",
    "LeakageError",
    "ModeComparison",
    "MomentumWavefunction",
    "NoCrossingError",
    "PerturbativeDensity",
    "PositionWavefunction",
    "Profile",
    "RangeCapError",
    "SimConfig",
    "SpatialGrid",
    "TruncationError",
    "UNIFORM_SIGMA_X",
    "WidthScaling",
    "apply_free",
    "apply_kick",
    "auto_range",
    "bessel_j",
    "bessel_j_ladder",
    "bessel_j_row",
    "compare_modes",
    "correction_term",
    "default_half_width",
    "default_n_points",
    "evolve",
    "evolve_dense",
    "fidelity_protocol",
    "fit_widths",
    "fwhm",
    "init_momentum_eigenstate",
    "kick_matrix",
    "l1_distance",
    "mean_energy",
    "momentum_density",
    "perturbative_density",
    "position_density",
    "power_law_fit",
    "propagate",
    "resonant_state",
    "scan_epsilon",
    "scan_width",
    "sigma_x",
    "to_momentum",
    "to_position",
    "width_scaling",
]
