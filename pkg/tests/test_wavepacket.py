import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from hypothesis.extra.numpy import arrays

from kickedrotor import (
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

TWO_PI = 2 * math.pi


@st.composite
def momentum_states(draw, max_m: int = 10, half_width: int | None = None):
    M = half_width if half_width is not None else draw(st.integers(1, max_m))
    size = 2 * M + 1
    finite = st.floats(-1, 1, allow_nan=False, allow_infinity=False)
    re = draw(arrays(float, size, elements=finite))
    im = draw(arrays(float, size, elements=finite))
    vec = re + 1j * im
    norm = np.linalg.norm(vec)
    assume(norm > 1e-3)
    return MomentumWavefunction(M, vec / norm)


@st.composite
def momentum_state_pairs(draw, max_m: int = 6):
    M = draw(st.integers(1, max_m))
    a = draw(momentum_states(half_width=M))
    b = draw(momentum_states(half_width=M))
    return a, b


class TestSizing:
    def test_half_width_margin(self):
        assert default_half_width(10, 0.485) == 37
        assert default_half_width(0, 0.485) == 32

    def test_n_points_power_of_two_and_fits(self):
        for M in (1, 5, 37, 64, 100):
            n = default_n_points(M)
            assert n & (n - 1) == 0
            assert SpatialGrid(n).fits_ladder(M)

    def test_nyquist_margin_is_exactly_twice_the_ladder(self):
        g = SpatialGrid(2 * (2 * 7 + 1))
        assert g.fits_ladder(7)
        assert not SpatialGrid(2 * (2 * 7 + 1) - 1).fits_ladder(7)


class TestSpatialGrid:
    def test_nodes(self):
        g = SpatialGrid(8)
        assert g.nodes[0] == 0.0
        assert g.spacing == pytest.approx(TWO_PI / 8, abs=0)
        assert np.allclose(np.diff(g.nodes), g.spacing)
        assert g.nodes[-1] < TWO_PI

    def test_rejects_tiny(self):
        with pytest.raises(ValueError):
            SpatialGrid(1)


class TestSimConfig:
    def test_defaults_resolve(self):
        cfg = SimConfig(kicks=10)
        assert cfg.phi_d == 0.485
        assert cfg.half_width == 37
        assert cfg.n_points == default_n_points(37)
        assert cfg.auto_sized

    def test_explicit_sizes_kept(self):
        cfg = SimConfig(kicks=2, half_width=64, n_points=512)
        assert (cfg.half_width, cfg.n_points) == (64, 512)
        assert not cfg.auto_sized

    def test_hbar_s_tracks_detuning(self):
        assert SimConfig().hbar_s == pytest.approx(4 * math.pi, abs=0)
        cfg = SimConfig(epsilon=1e-3, l=2)
        assert cfg.hbar_s == pytest.approx(8 * math.pi * (1 + 1e-3), rel=1e-15)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"phi_d": 0.0},
            {"phi_d": -0.5},
            {"epsilon": 1e-2},
            {"epsilon": -0.5},
            {"l": 0},
            {"l": 1.5},
            {"kicks": -1},
            {"half_width": 0},
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ValueError):
            SimConfig(**kwargs)

    def test_grid_too_small_for_ladder(self):
        with pytest.raises(GridTooSmallError):
            SimConfig(kicks=0, half_width=32, n_points=64)

    def test_resized(self):
        cfg = SimConfig(kicks=5).resized(99)
        assert cfg.half_width == 99
        assert cfg.kicks == 5
        assert not cfg.auto_sized


class TestStates:
    def test_initial_state_is_delta(self):
        wf = init_momentum_eigenstate(6)
        assert wf.amps[6] == 1.0
        assert wf.norm_sq() == 1.0
        assert wf.edge_occupancy() == 0.0

    def test_amps_are_frozen(self):
        wf = init_momentum_eigenstate(3)
        with pytest.raises(ValueError):
            wf.amps[0] = 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            MomentumWavefunction(3, np.zeros(5, dtype=complex))

    def test_overlap_requires_same_ladder(self):
        with pytest.raises(ValueError):
            init_momentum_eigenstate(3).overlap(init_momentum_eigenstate(4))


class TestTransforms:
    def test_delta_maps_to_flat_wave(self):
        wf = init_momentum_eigenstate(4)
        pwf = to_position(wf, SpatialGrid(32))
        assert np.allclose(pwf.values, 1 / math.sqrt(TWO_PI), atol=1e-14)
        assert pwf.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_nyquist_guard_both_directions(self):
        wf = init_momentum_eigenstate(8)
        with pytest.raises(GridTooSmallError):
            to_position(wf, SpatialGrid(16))
        pwf = to_position(init_momentum_eigenstate(2), SpatialGrid(16))
        with pytest.raises(GridTooSmallError):
            to_momentum(pwf, 8)

    @given(momentum_states())
    def test_round_trip_recovers_amplitudes(self, wf):
        grid = SpatialGrid(default_n_points(wf.half_width))
        back = to_momentum(to_position(wf, grid), wf.half_width)
        assert np.max(np.abs(back.amps - wf.amps)) < 1e-12

    @given(momentum_states())
    def test_norm_preserved(self, wf):
        grid = SpatialGrid(default_n_points(wf.half_width))
        pwf = to_position(wf, grid)
        assert pwf.norm_sq() == pytest.approx(wf.norm_sq(), abs=1e-12)

    @given(momentum_state_pairs())
    def test_linearity(self, pair):
        a, b = pair
        grid = SpatialGrid(default_n_points(a.half_width))
        mixed = MomentumWavefunction(
            a.half_width, 0.3 * a.amps + (0.2 - 0.7j) * b.amps
        )
        lhs = to_position(mixed, grid).values
        rhs = (
            0.3 * to_position(a, grid).values
            + (0.2 - 0.7j) * to_position(b, grid).values
        )
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    @given(momentum_states(max_m=6), st.integers(-40, 40))
    def test_ladder_phase_rolls_position_samples(self, wf, shift):
        # multiplying psi(m) by exp(-i m j dX) translates Psi by j grid steps
        grid = SpatialGrid(default_n_points(wf.half_width))
        dx = grid.spacing
        phased = MomentumWavefunction(
            wf.half_width, wf.amps * np.exp(-1j * wf.m_values * shift * dx)
        )
        rolled = np.roll(to_position(wf, grid).values, shift)
        assert np.max(np.abs(to_position(phased, grid).values - rolled)) < 1e-12

    def test_values_length_checked(self):
        with pytest.raises(ValueError):
            PositionWavefunction(SpatialGrid(8), np.zeros(9, dtype=complex))
