import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energystudio.energy.kernel import KernelMatrix, interaction_kernel
from energystudio.energy.schemas import EnergyBreakdown
from energystudio.energy.terms import (
    entropy_error,
    entropy_term,
    interaction_energy,
    kernel_for,
    rhoR_energy_bound,
    total_energy,
)
from energystudio.exceptions import ParameterError, PreconditionError
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.geometry.volumes import ball_volume
from energystudio.measures.clouds import make_centred_cloud
from energystudio.measures.radial import (
    mass,
    radial_density_from_function,
    radial_grid,
    radial_integral_error,
    uniform_ball,
)
from energystudio.measures.schemas import DiscreteMeasure, Potential


@pytest.fixture
def hyperbolic_plane():
    return ModelManifold(dim=2, curvature=1.0)


class TestEntropy:
    @given(
        dim=st.integers(2, 4),
        c=st.floats(0.0, 4.0),
        q=st.floats(0.2, 0.9),
        R=st.floats(0.1, 10.0),
    )
    @settings(max_examples=50, deadline=None)
    def test_uniform_ball_closed_form(self, dim, c, q, R):
        """
        The entropy of the uniform ball is −|B_R|^{1−q}/(1−q).
        """
        manifold = ModelManifold(dim=dim, curvature=c)
        rho = uniform_ball(manifold, R, grid_size=256)
        expected = -ball_volume(manifold, R).lower ** (1.0 - q) / (1.0 - q)
        assert entropy_term(rho, q) == pytest.approx(expected, rel=1e-8)

    def test_discrete_measure_has_no_entropy(self):
        assert entropy_term(make_centred_cloud(2, 1.0, 10, seed=0), 0.5) == 0.0

    @pytest.mark.parametrize("q", [0.0, 1.0, 1.5])
    def test_exponent_range(self, hyperbolic_plane, q):
        with pytest.raises(ParameterError, match="q"):
            entropy_term(uniform_ball(hyperbolic_plane, 1.0, 64), q)


class TestInteraction:
    def test_zero_potential(self, hyperbolic_plane):
        energy = total_energy(uniform_ball(hyperbolic_plane, 1.0, 256), 0.5, Potential(kind="zero"))
        assert energy.interaction == 0.0
        assert energy.total == energy.entropy

    def test_bounded_by_diameter(self, hyperbolic_plane):
        """
        For non-decreasing h the interaction of ρ_R lies between h(0)/2 and h(2R)/2.
        """
        h = Potential(kind="log1p")
        value = interaction_energy(uniform_ball(hyperbolic_plane, 1.0, 256), h)
        assert 0.0 < value < 0.5 * np.log1p(2.0)

    def test_discrete_pair(self):
        pair = DiscreteMeasure(
            dim=2, curvature=1.0, log_points=np.array([[1.0, 0.0], [-1.0, 0.0]]), weights=np.array([0.5, 0.5])
        )
        assert interaction_energy(pair, Potential(kind="power", beta=1.0)) == pytest.approx(0.5)

    def test_variable_curvature_density(self):
        manifold = ModelManifold(dim=2, profile=CurvatureProfile(kind="constant", value=1.0), theta_max=3.0)
        with pytest.raises(ValueError, match="constant-curvature"):
            interaction_energy(uniform_ball(manifold, 1.0, 64), Potential(kind="log1p"))

    def test_kernel_for_other_potential(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 1.0, 64)
        kernel = KernelMatrix(manifold=hyperbolic_plane, potential=Potential(kind="zero"), r_grid=rho.r_grid)
        with pytest.raises(PreconditionError, match="different potential"):
            interaction_energy(rho, Potential(kind="log1p"), kernel)

    def test_kernel_reuse_matches_fresh_kernel(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 1.0, 128)
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        kernel = KernelMatrix(manifold=hyperbolic_plane, potential=h, r_grid=rho.r_grid)
        assert interaction_energy(rho, h, kernel) == pytest.approx(interaction_energy(rho, h), rel=1e-12)


class TestKernel:
    def test_mean_distance_on_sphere(self):
        """
        In ℝ³ the mean distance from a point at radius r to the sphere of radius s < r is r + s²/(3r).
        """
        value = interaction_kernel(0.0, 3, Potential(kind="power", beta=1.0), 2.0, 1.0)
        assert value == pytest.approx(2.0 + 1.0 / 6.0, rel=1e-10)

    def test_origin_rows(self):
        h = Potential(kind="log1p")
        assert interaction_kernel(1.0, 2, h, 0.0, 1.5) == pytest.approx(np.log1p(1.5))
        assert interaction_kernel(1.0, 2, h, 1.5, 0.0) == pytest.approx(np.log1p(1.5))

    @given(r=st.floats(0.0, 5.0), s=st.floats(0.0, 5.0), dim=st.integers(2, 4))
    @settings(max_examples=40, deadline=None)
    def test_symmetry(self, r, s, dim):
        h = Potential(kind="sinh_power", lam=2.0, c=1.0)
        assert interaction_kernel(1.0, dim, h, r, s) == pytest.approx(interaction_kernel(1.0, dim, h, s, r), rel=1e-12)

    def test_negative_curvature_rejected(self):
        with pytest.raises(PreconditionError, match="c ≥ 0"):
            interaction_kernel(-1.0, 2, Potential(kind="zero"), 1.0, 1.0)

    def test_kernel_matrix_mass(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 2.0, 128)
        kernel = KernelMatrix(manifold=hyperbolic_plane, potential=Potential(kind="zero"), r_grid=rho.r_grid)
        assert kernel.mass(rho.values) == pytest.approx(mass(rho), rel=1e-10)
        assert kernel.integral(rho.values, 0.5) == pytest.approx(-0.5 * entropy_term(rho, 0.5), rel=1e-10)

    def test_bound_only_manifold(self):
        manifold = ModelManifold(
            dim=2,
            lower_curvature=CurvatureProfile(kind="constant", value=2.0),
            upper_curvature=CurvatureProfile(kind="constant", value=1.0),
            theta_max=4.0,
        )
        with pytest.raises(ValueError, match="constant-curvature"):
            KernelMatrix(manifold=manifold, potential=Potential(kind="zero"), r_grid=radial_grid(1.0, 32))


class TestEnergyBreakdown:
    def test_from_terms(self):
        energy = EnergyBreakdown.from_terms(-2.0, 0.5, 0.5)
        assert energy.total == -1.5

    def test_positive_entropy(self):
        with pytest.raises(ValueError, match="non-positive"):
            EnergyBreakdown.from_terms(1.0, 0.0, 0.5)

    def test_inconsistent_total(self):
        with pytest.raises(ValueError, match="entropy \\+ interaction"):
            EnergyBreakdown(entropy=-1.0, interaction=1.0, total=3.0, q=0.5)


class TestBallBound:
    def test_matches_closed_form(self, hyperbolic_plane):
        h = Potential(kind="log1p")
        volume = 2 * np.pi * (np.cosh(2.0) - 1.0)
        expected = -(volume**0.5) / 0.5 + 0.5 * np.log1p(4.0)
        assert rhoR_energy_bound(hyperbolic_plane, 2.0, 0.5, h) == pytest.approx(expected, rel=1e-10)

    def test_bounds_exact_energy(self, hyperbolic_plane):
        h = Potential(kind="sinh_power", lam=3.0, c=1.0)
        rho = uniform_ball(hyperbolic_plane, 1.0, 256)
        assert total_energy(rho, 0.5, h).total <= rhoR_energy_bound(hyperbolic_plane, 1.0, 0.5, h)

    def test_volume_overflow_gives_minus_inf(self, hyperbolic_plane):
        assert rhoR_energy_bound(hyperbolic_plane, 2000.0, 0.5, Potential(kind="log1p")) == -np.inf


class TestQuadratureError:
    def test_uniform_ball_is_resolved(self, hyperbolic_plane):
        rho = uniform_ball(hyperbolic_plane, 1.0, 256)
        assert entropy_error(rho, 0.5) < 1e-10 * abs(entropy_term(rho, 0.5))

    def test_entropy_error_scales_the_integral_error(self, hyperbolic_plane):
        rho = radial_density_from_function(hyperbolic_plane, lambda r: np.exp(-r**2), 5.0, 16)
        assert entropy_error(rho, 0.25) == pytest.approx(radial_integral_error(rho, power=0.25) / 0.75, rel=1e-12)

    def test_error_shrinks_under_refinement(self, hyperbolic_plane):
        """
        Doubling the Gauss order per cell matters less on finer grids.
        """
        coarse = radial_density_from_function(hyperbolic_plane, lambda r: np.exp(-r**2), 5.0, 16)
        fine = radial_density_from_function(hyperbolic_plane, lambda r: np.exp(-r**2), 5.0, 128)
        assert radial_integral_error(coarse, power=0.5) > 0.0
        assert radial_integral_error(fine, power=0.5) < radial_integral_error(coarse, power=0.5)

    def test_breakdown_carries_entropy_error(self, hyperbolic_plane):
        rho = radial_density_from_function(hyperbolic_plane, lambda r: np.exp(-r**2), 5.0, 64)
        energy = total_energy(rho, 0.5, Potential(kind="log1p"))
        assert energy.quadrature_error_estimate == pytest.approx(entropy_error(rho, 0.5), rel=1e-12)

    def test_cloud_has_no_error_estimate(self):
        energy = total_energy(make_centred_cloud(2, 1.0, 10, seed=0), 0.5, Potential(kind="log1p"))
        assert energy.quadrature_error_estimate == 0.0


class TestKernelNodes:
    @pytest.fixture
    def euclidean_disc(self):
        return uniform_ball(ModelManifold(dim=2, curvature=0.0), 1.0, 1024)

    def test_thinned_grid_size(self, euclidean_disc):
        kernel = kernel_for(euclidean_disc, Potential(kind="zero"), 32)
        assert kernel.r_grid.size == 32
        assert kernel.r_grid[0] == 0.0
        assert kernel.r_grid[-1] == pytest.approx(1.0)

    def test_more_nodes_approach_closed_form(self, euclidean_disc):
        """
        For h = θ²/2 on the unit disc the interaction is E|x − y|²/4 = 1/4.
        """
        h = Potential(kind="power", beta=2.0)
        thin = interaction_energy(euclidean_disc, h, kernel_nodes=32)
        dense = interaction_energy(euclidean_disc, h, kernel_nodes=512)
        assert thin == pytest.approx(0.25, rel=1e-3)
        assert dense == pytest.approx(0.25, rel=1e-5)
        assert abs(dense - 0.25) < abs(thin - 0.25)

    def test_total_energy_forwards_nodes(self, euclidean_disc):
        h = Potential(kind="power", beta=2.0)
        energy = total_energy(euclidean_disc, 0.5, h, kernel_nodes=64)
        assert energy.interaction == pytest.approx(interaction_energy(euclidean_disc, h, kernel_nodes=64), rel=1e-12)
