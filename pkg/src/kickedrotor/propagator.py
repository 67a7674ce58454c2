"""One-period Floquet evolution: kick, free flight, and the reversed pulse.

Each period applies the kick factor exp(-i phi_d cos X) followed by the
free-flight factor exp(-i hbar_s m^2 / 2). At the primary revivals
(hbar_s = 4 pi l) the free factor is the identity on the integer ladder,
so everything interesting near a revival is carried by the detuning phase
theta_m = 2 pi l m^2 epsilon. That phase is always computed directly from
epsilon: forming it as a difference of two large phases loses about ten
significant digits at epsilon = 1e-8, m = 40.

Two independent evolution routes are kept deliberately separate: the
spectral route (FFT kick application) and a dense-matrix route whose kick
matrix is built from Bessel coefficients. They share no transform code and
cross-validate each other to 1e-9.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .analytics import MINUS_I_POW, bessel_j_row
from .wavepacket import (
    EDGE_LEAK_BOUND,
    ROOT_TWO_PI,
    TWO_PI,
    MomentumWavefunction,
    SimConfig,
    SpatialGrid,
    default_half_width,
    default_n_points,
    init_momentum_eigenstate,
    to_momentum,
    to_position,
)

#: dense route is an oracle, not a workhorse; keep the cost bounded
DENSE_HALF_WIDTH_CAP = 512
#: auto-grow gives up past this ladder size
_GROW_CAP = 1 << 14


class LeakageError(RuntimeError):
    """Probability reached the ladder edge; the truncation is too tight."""

    def __init__(self, occupancy: float, period: int | None = None):
        self.occupancy = occupancy
        self.period = period
        where = f" during period {period}" if period is not None else ""
        super().__init__(
            f"edge occupancy {occupancy:.3e} exceeds {EDGE_LEAK_BOUND:.0e}"
            f"{where}; enlarge half_width"
        )

    def at_period(self, period: int) -> "LeakageError":
        return LeakageError(self.occupancy, period)


@dataclass(frozen=True)
class KickOperator:
    """Position-space phase factor exp(-i sign phi cos X).

    sign = +1 is the driving pulse, sign = -1 the reversed pulse used by
    the echo protocol.
    """

    phi: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class FreePhaseSpec:
    """Free-flight phases on the ladder.

    revival_relative mode keeps only the detuning part of the phase,
    theta_m = 2 pi l m^2 epsilon; the exactly periodic part is the identity
    and is dropped. general mode applies theta_m = (hbar_s/2) m^2 reduced
    mod 2 pi through the integer-exact split u = hbar_s/(4 pi),
    theta_m = 2 pi frac(u m^2), so that rational u (the recurrence points)
    produces bit-exact phases.
    """

    mode: str
    l: int = 1
    epsilon: float = 0.0
    hbar_s: float = 0.0

    def __post_init__(self):
        if self.mode not in ("revival_relative", "general"):
            raise ValueError(f"unknown free-phase mode {self.mode!r}")
        if self.mode == "revival_relative" and self.l < 1:
            raise ValueError("l must be a positive integer")

    @classmethod
    def revival_relative(cls, l: int, epsilon: float) -> "FreePhaseSpec":
        return cls(mode="revival_relative", l=int(l), epsilon=float(epsilon))

    @classmethod
    def general(cls, hbar_s: float) -> "FreePhaseSpec":
        return cls(mode="general", hbar_s=float(hbar_s))

    def phases(self, m: np.ndarray) -> np.ndarray:
        m2 = m.astype(float) ** 2
        if self.mode == "revival_relative":
            return TWO_PI * self.l * self.epsilon * m2
        u = self.hbar_s / (2.0 * TWO_PI)
        return TWO_PI * np.mod(u * m2, 1.0)

    def factors(self, m: np.ndarray) -> np.ndarray:
        return np.exp(-1j * self.phases(m))


def _kick_factor_on_grid(n: int, phi: float, sign: int) -> np.ndarray:
    X = TWO_PI * np.arange(n) / n
    return np.exp(-1j * sign * phi * np.cos(X))


def _apply_kick_amps(
    amps: np.ndarray, half_width: int, n: int, phi: float, sign: int
) -> np.ndarray:
    """Kick in position space via the exact transform pair."""
    m = np.arange(-half_width, half_width + 1)
    spectrum = np.zeros(n, dtype=complex)
    spectrum[m % n] = amps
    pos = n * np.fft.ifft(spectrum) / ROOT_TWO_PI
    pos *= _kick_factor_on_grid(n, phi, sign)
    back = np.fft.fft(pos) * ROOT_TWO_PI / n
    return back[m % n]


def apply_kick(
    wf: MomentumWavefunction,
    op: KickOperator,
    grid: SpatialGrid | None = None,
) -> MomentumWavefunction:
    """Apply one kick. Norm is preserved; position density is untouched.

    Raises LeakageError when the kick pushes measurable probability into
    the outermost ladder sites.
    """
    n = grid.n_points if grid is not None else default_n_points(wf.half_width)
    if n < 2 * (2 * wf.half_width + 1):
        raise ValueError("grid too small for this ladder")
    out = _apply_kick_amps(wf.amps, wf.half_width, n, op.phi, op.sign)
    result = MomentumWavefunction(wf.half_width, out)
    occ = result.edge_occupancy()
    if occ > EDGE_LEAK_BOUND:
        raise LeakageError(occ)
    return result


def apply_free(
    wf: MomentumWavefunction, spec: FreePhaseSpec
) -> MomentumWavefunction:
    """Multiply the free-flight phase factors; norm preserved exactly."""
    return MomentumWavefunction(wf.half_width, wf.amps * spec.factors(wf.m_values))


def _evolve_amps(
    kicks: int,
    phi_d: float,
    spec: FreePhaseSpec,
    half_width: int,
    n_points: int,
) -> np.ndarray:
    """Shared inner loop of the spectral route (kick then free, N times)."""
    M = half_width
    amps = np.zeros(2 * M + 1, dtype=complex)
    amps[M] = 1.0
    factors = spec.factors(np.arange(-M, M + 1))
    for period in range(1, kicks + 1):
        amps = _apply_kick_amps(amps, M, n_points, phi_d, 1)
        occ = float(abs(amps[0]) ** 2 + abs(amps[-1]) ** 2)
        if occ > EDGE_LEAK_BOUND:
            raise LeakageError(occ, period)
        amps = amps * factors
    return amps


def propagate(
    kicks: int,
    phi_d: float,
    free: FreePhaseSpec,
    half_width: int | None = None,
    n_points: int | None = None,
    auto_grow: bool = True,
) -> MomentumWavefunction:
    """Parameter-level evolution of delta_{m,0} through N periods.

    Exact at any detuning (the unitary propagation has no small-epsilon
    restriction; only the first-order analytics do). A tripped edge-leakage
    bound restarts the run with a doubled ladder when auto_grow is set.
    """
    M = default_half_width(kicks, phi_d) if half_width is None else int(half_width)
    n = default_n_points(M) if n_points is None else int(n_points)
    while True:
        try:
            amps = _evolve_amps(kicks, phi_d, free, M, n)
            return MomentumWavefunction(M, amps)
        except LeakageError:
            if not auto_grow or 2 * M > _GROW_CAP:
                raise
            M = 2 * M
            n = default_n_points(M)


def evolve(
    config: SimConfig,
    free: FreePhaseSpec | None = None,
    auto_grow: bool | None = None,
) -> MomentumWavefunction:
    """Propagate delta_{m,0} through config.kicks periods.

    Each period is kick(phi_d) then free flight; the returned state is the
    one after the final free flight. When the config was auto-sized, a
    tripped edge-leakage bound restarts the run with a doubled ladder.
    """
    spec = free or FreePhaseSpec.revival_relative(config.l, config.epsilon)
    grow = config.auto_sized if auto_grow is None else auto_grow
    return propagate(
        config.kicks,
        config.phi_d,
        spec,
        half_width=config.half_width,
        n_points=config.n_points,
        auto_grow=grow,
    )


def kick_matrix(phi: float, half_width: int) -> np.ndarray:
    """Dense kick operator on the ladder, entries (-i)^(n-m) J_{n-m}(phi).

    Independent of the spectral route: the matrix is assembled from Bessel
    coefficients. Order differences are wrapped onto [-M, M]; a plain
    truncation would leave every edge column short of its coefficient tail
    by (1 - J_0^2)/2 regardless of M, while the wrapped form is the kick
    phase expanded on the finite ladder and stays unitary. Wrap and
    truncation agree to better than 1e-12 once half_width >= phi + 32;
    a warning is emitted when unitarity still degrades past 1e-8.
    """
    M = int(half_width)
    if M < 1:
        raise ValueError("half_width must be >= 1")
    row = bessel_j_row(abs(phi), M)
    m = np.arange(-M, M + 1)
    diff = np.subtract.outer(m, m)
    # signed representative of n - m modulo the ladder size
    diff = (diff + M) % (2 * M + 1) - M
    vals = row[np.abs(diff)]
    # J_{-d} = (-1)^d J_d, and J_d(-x) = (-1)^d J_d(x)
    neg = diff < 0
    vals = np.where(neg & (np.abs(diff) % 2 == 1), -vals, vals)
    if phi < 0:
        vals = np.where(np.abs(diff) % 2 == 1, -vals, vals)
    U = MINUS_I_POW[np.mod(diff, 4)] * vals
    gram_err = float(
        np.max(np.abs(U.conj().T @ U - np.eye(2 * M + 1)))
    )
    if gram_err > 1e-8:
        warnings.warn(
            f"kick matrix unitarity error {gram_err:.2e} at half_width {M}; "
            "truncation too tight",
            RuntimeWarning,
            stacklevel=2,
        )
    return U


def evolve_dense(
    config: SimConfig, free: FreePhaseSpec | None = None
) -> MomentumWavefunction:
    """Brute-force twin of evolve using matrix-vector products.

    Same contract as evolve; exists purely as an independent check of the
    spectral route. Capped at half_width 512 because the dense cost grows
    quadratically.
    """
    M = config.half_width
    if M > DENSE_HALF_WIDTH_CAP:
        raise ValueError(
            f"dense route capped at half_width {DENSE_HALF_WIDTH_CAP}, got {M}"
        )
    spec = free or FreePhaseSpec.revival_relative(config.l, config.epsilon)
    U = kick_matrix(config.phi_d, M)
    factors = spec.factors(np.arange(-M, M + 1))
    amps = np.zeros(2 * M + 1, dtype=complex)
    amps[M] = 1.0
    for _ in range(config.kicks):
        amps = U @ amps
        amps = factors * amps
    return MomentumWavefunction(M, amps)


def fidelity_protocol(
    kicks: int, phi_d: float, epsilon: float, l: int = 1
) -> float:
    """Echo overlap after N driven periods and one reversed pulse.

    Applies N periods (kick phi_d, free flight), then a single reversed
    kick of amplitude N*phi_d with no trailing free flight, and returns
    F = |<delta_0 | psi>|^2. At epsilon = 0 the free flights are identities
    and the reversed pulse cancels the accumulated kick exactly, so F = 1.

    epsilon is not restricted here: the propagation is exact at any
    detuning, and resonance profiles need the far tails.
    """
    N = int(kicks)
    if N < 1:
        raise ValueError("kicks must be >= 1")
    if phi_d <= 0:
        raise ValueError("phi_d must be positive")
    # the reversed pulse of amplitude N*phi_d can double the momentum reach
    M = default_half_width(2 * N, phi_d)
    n = default_n_points(M)
    spec = FreePhaseSpec.revival_relative(l, epsilon)
    while True:
        try:
            amps = _evolve_amps(N, phi_d, spec, M, n)
            amps = _apply_kick_amps(amps, M, n, N * phi_d, -1)
            occ = float(abs(amps[0]) ** 2 + abs(amps[-1]) ** 2)
            if occ > EDGE_LEAK_BOUND:
                raise LeakageError(occ, N + 1)
            return float(abs(amps[M]) ** 2)
        except LeakageError:
            if 2 * M > _GROW_CAP:
                raise
            M = 2 * M
            n = default_n_points(M)
