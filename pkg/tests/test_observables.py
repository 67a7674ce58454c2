import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kickedrotor import (
    Density,
    MomentumWavefunction,
    NoCrossingError,
    Profile,
    SpatialGrid,
    UNIFORM_SIGMA_X,
    fwhm,
    init_momentum_eigenstate,
    l1_distance,
    mean_energy,
    momentum_density,
    position_density,
    sigma_x,
    to_position,
)

TWO_PI = 2 * math.pi


def uniform_density(n: int = 512) -> Density:
    X = TWO_PI * np.arange(n) / n
    return Density("position", X, np.full(n, 1.0 / TWO_PI))


def cosine_density(n: int = 512) -> Density:
    X = TWO_PI * np.arange(n) / n
    return Density("position", X, (1.0 + np.cos(X)) / TWO_PI)


class TestDensity:
    def test_kind_checked(self):
        with pytest.raises(ValueError):
            Density("angle", np.arange(4.0), np.full(4, 0.25))

    def test_negative_values_rejected(self):
        X = TWO_PI * np.arange(8) / 8
        vals = np.full(8, 1.0 / TWO_PI)
        vals[3] = -1e-6
        with pytest.raises(ValueError):
            Density("position", X, vals)

    def test_total_mass_enforced(self):
        X = TWO_PI * np.arange(8) / 8
        with pytest.raises(ValueError):
            Density("position", X, np.full(8, 0.5 / TWO_PI))
        with pytest.raises(ValueError):
            Density("momentum", np.arange(-2.0, 3.0), np.full(5, 0.3))

    def test_from_states(self):
        wf = init_momentum_eigenstate(4)
        assert momentum_density(wf).values[4] == 1.0
        pwf = to_position(wf, SpatialGrid(32))
        d = position_density(pwf)
        assert np.allclose(d.values, 1.0 / TWO_PI, atol=1e-14)


class TestSigmaX:
    def test_uniform_hits_the_circle_value(self):
        # pi/sqrt(3), independent of the grid resolution
        for n in (64, 256, 512, 1024):
            assert sigma_x(uniform_density(n)) == pytest.approx(
                UNIFORM_SIGMA_X, abs=1e-9
            )

    def test_cosine_bump_matches_analytic_variance(self):
        # recentred (1 + cos)/2pi has variance pi^2/3 - 2
        expect = math.sqrt(math.pi**2 / 3 - 2)
        assert sigma_x(cosine_density(512)) == pytest.approx(expect, abs=1e-5)
        # quadrature error falls off with the bin width squared
        err_a = abs(sigma_x(cosine_density(256)) - expect)
        err_b = abs(sigma_x(cosine_density(1024)) - expect)
        assert err_b < err_a / 8

    @given(st.integers(-1024, 1024))
    def test_rotation_invariance(self, shift):
        d = cosine_density(256)
        rolled = Density("position", d.support, np.roll(d.values, shift))
        assert sigma_x(rolled) == pytest.approx(sigma_x(d), abs=1e-8)

    def test_needs_position_kind(self):
        with pytest.raises(ValueError):
            sigma_x(momentum_density(init_momentum_eigenstate(3)))


class TestMeanEnergy:
    def test_ground_state_is_zero(self):
        assert mean_energy(init_momentum_eigenstate(5), 4 * math.pi) == 0.0

    def test_single_rung(self):
        M = 5
        amps = np.zeros(2 * M + 1, dtype=complex)
        amps[M + 3] = 1.0
        wf = MomentumWavefunction(M, amps)
        hbar = 4 * math.pi
        assert mean_energy(wf, hbar) == pytest.approx(
            0.5 * hbar**2 * 9, rel=1e-15
        )


class TestL1Distance:
    def test_zero_on_identical(self):
        d = uniform_density(64)
        assert l1_distance(d, d) == 0.0

    def test_disjoint_position_densities(self):
        n = 64
        X = TWO_PI * np.arange(n) / n
        a = np.where(X < math.pi, 1.0 / math.pi, 0.0)
        b = np.where(X >= math.pi, 1.0 / math.pi, 0.0)
        da = Density("position", X, a)
        db = Density("position", X, b)
        assert l1_distance(da, db) == pytest.approx(2.0, abs=1e-12)

    def test_kind_and_support_guards(self):
        d = uniform_density(64)
        m = momentum_density(init_momentum_eigenstate(3))
        with pytest.raises(ValueError):
            l1_distance(d, m)
        with pytest.raises(ValueError):
            l1_distance(d, uniform_density(128))


class TestProfile:
    def test_needs_five_points(self):
        with pytest.raises(ValueError):
            Profile(np.arange(4.0), np.ones(4))

    def test_needs_increasing_abscissa(self):
        with pytest.raises(ValueError):
            Profile(np.array([0.0, 1.0, 1.0, 2.0, 3.0]), np.ones(5))


class TestFwhm:
    def triangle(self, n=201):
        x = np.linspace(-1.0, 1.0, n)
        return Profile(x, 1.0 - np.abs(x))

    def test_triangle_width_is_exact(self):
        # crossings at +-1/2 land exactly on the interpolant
        assert fwhm(self.triangle()) == pytest.approx(1.0, abs=1e-12)

    def test_gaussian_width(self):
        x = np.linspace(-1.0, 1.0, 2001)
        p = Profile(x, np.exp(-(x**2) / (2 * 0.1**2)))
        expect = 2 * math.sqrt(2 * math.log(2)) * 0.1
        assert fwhm(p) == pytest.approx(expect, abs=1e-4)

    def test_explicit_level_overrides_default(self):
        p = self.triangle()
        assert fwhm(p, half_level=0.25) == pytest.approx(1.5, abs=1e-12)

    def test_flat_profile_rejected(self):
        with pytest.raises(NoCrossingError):
            fwhm(Profile(np.arange(5.0), np.ones(5)))

    def test_edge_peak_rejected(self):
        x = np.arange(5.0)
        with pytest.raises(NoCrossingError):
            fwhm(Profile(x, np.array([5.0, 4.0, 3.0, 2.0, 1.0])))

    def test_peak_below_requested_level(self):
        with pytest.raises(NoCrossingError):
            fwhm(self.triangle(), half_level=2.0)

    def test_narrow_range_rejected(self):
        # edges never reach the half level computed from the true floor
        x = np.linspace(-0.1, 0.1, 21)
        with pytest.raises(NoCrossingError):
            fwhm(Profile(x, 1.0 - np.abs(x)), half_level=0.5)

    def test_innermost_crossing_wins(self):
        # a profile that dips, recovers, and dips again: the width must
        # come from the crossings nearest the peak
        x = np.linspace(-3.0, 3.0, 601)
        y = np.exp(-(x**2)) + 0.6 * np.exp(-((np.abs(x) - 2.0) ** 2) / 0.01)
        w = fwhm(Profile(x, y), half_level=0.5)
        assert w == pytest.approx(2 * math.sqrt(math.log(2)), abs=1e-2)

    @given(st.floats(1e-3, 1e3))
    def test_ordinate_scale_invariance(self, scale):
        p = self.triangle()
        scaled = Profile(p.abscissa, scale * p.ordinate)
        assert fwhm(scaled) == pytest.approx(fwhm(p), rel=1e-9)

    @given(st.floats(-5.0, 5.0, allow_nan=False))
    def test_abscissa_shift_invariance(self, shift):
        p = self.triangle()
        moved = Profile(p.abscissa + shift, p.ordinate)
        assert fwhm(moved) == pytest.approx(fwhm(p), abs=1e-9)

    def test_reflection_invariance(self):
        x = np.linspace(-1.0, 2.0, 301)
        y = np.exp(-((x - 0.4) ** 2) / 0.05)
        p = Profile(x, y)
        mirrored = Profile(-x[::-1], y[::-1])
        assert fwhm(mirrored) == pytest.approx(fwhm(p), abs=1e-12)
