import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energystudio.exceptions import PreconditionError, UnsupportedManifoldError
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.psi import solve_psi
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.measures.moments import first_moment, psi_moment, sinh_moment, tail_mass, total_mass
from energystudio.measures.radial import (
    bump_mixture,
    mass,
    normalize,
    radial_density_from_function,
    radial_grid,
    uniform_ball,
)
from energystudio.measures.schemas import RadialDensity


@pytest.fixture
def hyperbolic_plane():
    return ModelManifold(dim=2, curvature=1.0)


@pytest.fixture
def euclidean_plane():
    return ModelManifold(dim=2, curvature=0.0)


class TestRadialGrid:
    def test_shape(self):
        grid = radial_grid(5.0, 64)
        assert grid.size == 64
        assert grid[0] == 0.0
        assert grid[-1] == pytest.approx(5.0)
        assert np.all(np.diff(grid) > 0)

    def test_too_few_nodes(self):
        with pytest.raises(PreconditionError, match="at least 16"):
            radial_grid(1.0, 8)


class TestUniformBall:
    @given(dim=st.integers(2, 4), c=st.floats(0.0, 4.0), R=st.floats(0.1, 10.0))
    @settings(max_examples=30, deadline=None)
    def test_unit_mass(self, dim, c, R):
        rho = uniform_ball(ModelManifold(dim=dim, curvature=c), R, grid_size=256)
        assert mass(rho) == pytest.approx(1.0, rel=1e-8)
        assert rho.jump_radius == pytest.approx(R)

    def test_non_positive_radius(self, hyperbolic_plane):
        with pytest.raises(PreconditionError, match="positive"):
            uniform_ball(hyperbolic_plane, 0.0)

    def test_bound_only_manifold(self):
        manifold = ModelManifold(
            dim=2,
            lower_curvature=CurvatureProfile(kind="constant", value=2.0),
            upper_curvature=CurvatureProfile(kind="constant", value=1.0),
            theta_max=5.0,
        )
        with pytest.raises(UnsupportedManifoldError, match="bound-only"):
            uniform_ball(manifold, 1.0)


class TestDensities:
    def test_normalize_is_idempotent(self, hyperbolic_plane):
        rho = radial_density_from_function(hyperbolic_plane, lambda r: np.exp(-r), 6.0, 256, normalized=False)
        once = normalize(rho)
        twice = normalize(once)
        assert mass(once) == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(twice.values, once.values, rtol=1e-12)

    def test_zero_density_cannot_be_normalized(self, hyperbolic_plane):
        rho = RadialDensity(manifold=hyperbolic_plane, r_grid=radial_grid(1.0, 32), values=np.zeros(32))
        with pytest.raises(PreconditionError, match="normalize"):
            normalize(rho)

    def test_bump_mixture(self, hyperbolic_plane):
        rho = bump_mixture(hyperbolic_plane, [0.5, 2.0], [0.3, 0.5], [1.0, 2.0], r_max=4.0, n=256)
        assert mass(rho) == pytest.approx(1.0, rel=1e-10)

    def test_bump_mixture_shapes(self, hyperbolic_plane):
        with pytest.raises(PreconditionError, match="equal length"):
            bump_mixture(hyperbolic_plane, [0.5], [0.3, 0.5], [1.0], r_max=4.0)

    def test_invalid_grid(self, hyperbolic_plane):
        with pytest.raises(ValueError, match="start at 0"):
            RadialDensity(manifold=hyperbolic_plane, r_grid=np.array([0.5, 1.0]), values=np.ones(2))

    def test_negative_values(self, hyperbolic_plane):
        with pytest.raises(ValueError, match="non-negative"):
            RadialDensity(manifold=hyperbolic_plane, r_grid=np.array([0.0, 1.0]), values=np.array([1.0, -1.0]))

    def test_interpolation_vanishes_beyond_grid(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 1.0, 64)
        assert rho(1.0) == pytest.approx(rho.values[-1])
        assert rho(1.5) == 0.0


class TestMoments:
    def test_euclidean_first_moment(self, euclidean_plane):
        rho = uniform_ball(euclidean_plane, 1.0, 256)
        assert first_moment(rho) == pytest.approx(2.0 / 3.0, rel=1e-10)

    def test_tail_mass(self, euclidean_plane):
        rho = uniform_ball(euclidean_plane, 1.0, 256)
        assert tail_mass(rho, 0.5) == pytest.approx(0.75, rel=1e-10)
        assert tail_mass(rho, 2.0) == 0.0
        assert total_mass(rho) == pytest.approx(1.0, rel=1e-10)

    def test_sinh_moment_euclidean(self, euclidean_plane):
        """
        With c = 0 the weight is r^λ, so λ = 2 gives ∫r² = 1/2 on the unit disc.
        """
        rho = uniform_ball(euclidean_plane, 1.0, 256)
        assert sinh_moment(rho, 2.0) == pytest.approx(0.5, rel=1e-10)

    def test_psi_moment_matches_sinh_moment(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 2.0, 256)
        psi = solve_psi(CurvatureProfile(kind="constant", value=1.0), theta_max=3.0)
        assert psi_moment(rho, 1.5, psi) == sinh_moment(rho, 1.5)
        assert psi_moment(rho, 0.0, psi) == pytest.approx(1.0, rel=1e-10)

    def test_invalid_exponent(self, hyperbolic_plane):
        with pytest.raises(PreconditionError, match="positive"):
            sinh_moment(uniform_ball(hyperbolic_plane, 1.0, 64), 0.0)

    def test_large_moment_overflows_to_inf(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 300.0, 256)
        assert sinh_moment(rho, 3.0) == float("inf")
