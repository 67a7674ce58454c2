"""States of a periodically kicked particle on a ring.

A zero-quasi-momentum initial state confines the dynamics to the integer
momentum ladder m in [-M, M]; the state is a vector of complex amplitudes
psi(m). Position space is a uniform grid X_j = 2*pi*j/n on [0, 2*pi).
The two pictures are linked by the discrete Fourier pair

    Psi(X_j) = (2*pi)**-0.5 * sum_m psi(m) exp(i m X_j)
    psi(m)   = (2*pi)**-0.5 * (2*pi/n) * sum_j Psi(X_j) exp(-i m X_j)

which is exact (not approximate) as long as the grid oversamples the
ladder, n >= 2*(2M+1). FFTs are used internally; the contract is the sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi
ROOT_TWO_PI = math.sqrt(TWO_PI)

#: one unitary application may not change the norm by more than this
NORM_TOL = 1e-12
#: combined occupancy allowed in the two outermost ladder sites
EDGE_LEAK_BOUND = 1e-14
#: upper bound of the small-detuning regime the first-order formulas target
EPSILON_VALIDITY = 1e-2


class GridTooSmallError(ValueError):
    """Spatial grid cannot resolve the momentum ladder (Nyquist margin)."""


def _as_int(name: str, value) -> int:
    if not float(value).is_integer():
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return int(value)


def default_half_width(kicks: int, phi_d: float) -> int:
    """Ladder truncation that keeps edge occupancy below EDGE_LEAK_BOUND.

    Amplitudes decay super-exponentially beyond |m| ~ N*phi_d, so a fixed
    additive margin suffices.
    """
    return int(math.ceil(kicks * phi_d)) + 32


def default_n_points(half_width: int) -> int:
    """Smallest power of two at or above 4*(M+1)."""
    return 1 << max(3, int(math.ceil(math.log2(4 * (half_width + 1)))))


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid X_j = 2*pi*j/n_points, j = 0..n_points-1."""

    n_points: int

    def __post_init__(self):
        n = _as_int("n_points", self.n_points)
        if n < 2:
            raise ValueError("n_points must be at least 2")
        object.__setattr__(self, "n_points", n)

    @property
    def nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n_points) / self.n_points

    @property
    def spacing(self) -> float:
        return TWO_PI / self.n_points

    def fits_ladder(self, half_width: int) -> bool:
        return self.n_points >= 2 * (2 * half_width + 1)


@dataclass(frozen=True)
class MomentumWavefunction:
    """Complex amplitudes on the integer ladder m in [-M, M].

    amps[i] is the amplitude of m = i - M. Momentum itself (m times the
    effective Planck constant) is derived where needed, never stored.
    """

    half_width: int
    amps: np.ndarray

    def __post_init__(self):
        M = _as_int("half_width", self.half_width)
        if M < 1:
            raise ValueError("half_width must be >= 1")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (2 * M + 1,):
            raise ValueError(
                f"amps must have shape ({2 * M + 1},), got {amps.shape}"
            )
        amps = amps.copy()
        amps.setflags(write=False)
        object.__setattr__(self, "half_width", M)
        object.__setattr__(self, "amps", amps)

    @property
    def m_values(self) -> np.ndarray:
        M = self.half_width
        return np.arange(-M, M + 1)

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def edge_occupancy(self) -> float:
        return float(abs(self.amps[0]) ** 2 + abs(self.amps[-1]) ** 2)

    def overlap(self, other: "MomentumWavefunction") -> complex:
        if other.half_width != self.half_width:
            raise ValueError("ladder size mismatch")
        return complex(np.vdot(self.amps, other.amps))


@dataclass(frozen=True)
class PositionWavefunction:
    """Samples Psi(X_j) on a SpatialGrid; (2*pi/n) * sum |Psi|^2 = 1."""

    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.grid.n_points,):
            raise ValueError("values length must match grid")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def norm_sq(self) -> float:
        return float(self.grid.spacing * np.sum(np.abs(self.values) ** 2))


@dataclass(frozen=True)
class SimConfig:
    """Single source of run parameters.

    phi_d is the effective kick strength (kick amplitude over the effective
    Planck constant), epsilon the dimensionless detuning of the kick period
    from the primary revival period (period = (1 + epsilon) times revival),
    l the resonance order, kicks the number of periods. half_width and
    n_points are filled from the sizing rules when not given. epsilon is
    restricted to the small-detuning window |epsilon| < 1e-2 in which the
    first-order analytics hold.
    """

    phi_d: float = 0.485
    epsilon: float = 0.0
    l: int = 1
    kicks: int = 0
    half_width: int | None = None
    n_points: int | None = None

    def __post_init__(self):
        if not (self.phi_d > 0):
            raise ValueError("phi_d must be positive")
        if not abs(self.epsilon) < EPSILON_VALIDITY:
            raise ValueError(
                f"|epsilon| must be below {EPSILON_VALIDITY} "
                f"(got {self.epsilon!r})"
            )
        l = _as_int("l", self.l)
        if l < 1:
            raise ValueError("l must be a positive integer")
        kicks = _as_int("kicks", self.kicks)
        if kicks < 0:
            raise ValueError("kicks must be non-negative")
        auto_sized = self.half_width is None
        M = (
            default_half_width(kicks, self.phi_d)
            if auto_sized
            else _as_int("half_width", self.half_width)
        )
        if M < 1:
            raise ValueError("half_width must be >= 1")
        n = (
            default_n_points(M)
            if self.n_points is None
            else _as_int("n_points", self.n_points)
        )
        if n < 2 * (2 * M + 1):
            raise GridTooSmallError(
                f"n_points={n} cannot resolve a ladder of half width {M}; "
                f"need at least {2 * (2 * M + 1)}"
            )
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "kicks", kicks)
        object.__setattr__(self, "half_width", M)
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "_auto_sized", auto_sized)

    @property
    def auto_sized(self) -> bool:
        return self._auto_sized

    @property
    def hbar_s(self) -> float:
        """Effective Planck constant at the detuned period, 4*pi*l*(1+eps)."""
        return 2 * TWO_PI * self.l * (1.0 + self.epsilon)

    def grid(self) -> SpatialGrid:
        return SpatialGrid(self.n_points)

    def resized(self, half_width: int) -> "SimConfig":
        return SimConfig(
            phi_d=self.phi_d,
            epsilon=self.epsilon,
            l=self.l,
            kicks=self.kicks,
            half_width=half_width,
            n_points=None,
        )


def init_momentum_eigenstate(half_width: int) -> MomentumWavefunction:
    """The m = 0 ladder eigenstate, psi(m) = delta_{m,0}."""
    M = _as_int("half_width", half_width)
    if M < 1:
        raise ValueError("half_width must be >= 1")
    amps = np.zeros(2 * M + 1, dtype=complex)
    amps[M] = 1.0
    return MomentumWavefunction(M, amps)


def to_position(
    wf: MomentumWavefunction, grid: SpatialGrid
) -> PositionWavefunction:
    """Exact synthesis Psi(X_j) = (2*pi)**-0.5 sum_m psi(m) e^{i m X_j}."""
    if not grid.fits_ladder(wf.half_width):
        raise GridTooSmallError(
            f"grid of {grid.n_points} points cannot resolve half_width "
            f"{wf.half_width}"
        )
    n = grid.n_points
    spectrum = np.zeros(n, dtype=complex)
    spectrum[wf.m_values % n] = wf.amps
    values = n * np.fft.ifft(spectrum) / ROOT_TWO_PI
    return PositionWavefunction(grid, values)


def to_momentum(
    pwf: PositionWavefunction, half_width: int
) -> MomentumWavefunction:
    """Exact analysis psi(m) = (2*pi)**-0.5 (2*pi/n) sum_j Psi(X_j) e^{-imX_j}."""
    M = _as_int("half_width", half_width)
    if not pwf.grid.fits_ladder(M):
        raise GridTooSmallError(
            f"half_width {M} violates the Nyquist margin of a "
            f"{pwf.grid.n_points}-point grid"
        )
    n = pwf.grid.n_points
    spectrum = np.fft.fft(pwf.values) * ROOT_TWO_PI / n
    m = np.arange(-M, M + 1)
    return MomentumWavefunction(M, spectrum[m % n])
