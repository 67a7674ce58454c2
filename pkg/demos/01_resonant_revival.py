"""
Kicking on resonance: Bessel ladders and quadratic energy growth
================================================================

A particle on a ring is kicked once per period. When the free flight
between kicks rephases every ladder site exactly, the kicks compound as
if the flight were not there, and the whole evolution has a closed form.
"""

import math

import numpy as np

from kickedrotor import (
    FreePhaseSpec,
    SpatialGrid,
    default_n_points,
    mean_energy,
    position_density,
    propagate,
    resonant_state,
    to_position,
)

PHI_D = 0.485

# Evolve the m = 0 eigenstate through 10 kick/flight periods at zero
# detuning, then compare against the closed form psi(m) = (-i)^m J_m(N*phi).
state = propagate(10, PHI_D, FreePhaseSpec.revival_relative(1, 0.0))
exact = resonant_state(10, PHI_D, state.half_width)
gap = np.max(np.abs(state.amps - exact.amps))
print(f"closed-form deviation after 10 kicks: {gap:.3e}")

# The momentum distribution spreads, but the position density stays
# pinned at the uniform value 1/2pi: each kick is a pure phase in
# position space and each resonant flight is the identity.
grid = SpatialGrid(default_n_points(state.half_width))
dens = position_density(to_position(state, grid))
flat = np.max(np.abs(dens.values - 1.0 / (2.0 * math.pi)))
print(f"position density off uniform by:       {flat:.3e}")

# Kinetic energy grows with the square of the kick count because the
# momentum transfers add coherently. Exact law: E = hbar^2 (N phi)^2 / 4.
hbar = 4.0 * math.pi
print("\n  N    <E> numeric      hbar^2 (N phi)^2 / 4")
for kicks in (1, 2, 5, 10, 20, 40):
    st = propagate(kicks, PHI_D, FreePhaseSpec.revival_relative(1, 0.0))
    expected = hbar**2 * (kicks * PHI_D) ** 2 / 4.0
    print(f"{kicks:>4} {mean_energy(st, hbar):>15.6f} {expected:>15.6f}")

# The opposite extreme: at half the resonant flight time every state
# returns to itself after two kicks, no matter how hard the kicks are.
anti = FreePhaseSpec.general(2.0 * math.pi)
for k in (1, 5, 10):
    st = propagate(2 * k, PHI_D, anti, half_width=40)
    back = abs(st.amps[st.half_width]) ** 2
    print(f"return probability after {2 * k:>2} kicks between resonances: "
          f"{back:.12f}")
