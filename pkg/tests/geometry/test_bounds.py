import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energystudio.exceptions import PreconditionError
from energystudio.geometry.bounds import (
    BoundSide,
    find_theta0,
    psi_lower_bound,
    psi_sandwich,
    psi_upper_bound,
    sqrt_curvature_integral,
    warped_sectional_curvatures,
)
from energystudio.geometry.psi import solve_psi
from energystudio.geometry.schemas import CurvatureProfile


@pytest.fixture(scope="module")
def hyperbolic_profile():
    return CurvatureProfile(kind="constant", value=1.0, monotone_nondecreasing=True, satisfies_c32=True)


@pytest.fixture(scope="module")
def hyperbolic_solution(hyperbolic_profile):
    return solve_psi(hyperbolic_profile, theta_max=8.0)


@pytest.fixture(scope="module")
def power_profile():
    return CurvatureProfile(kind="power", k=2.0, floor=1.0, monotone_nondecreasing=True, satisfies_c32=True)


@pytest.fixture(scope="module")
def power_solution(power_profile):
    return solve_psi(power_profile, theta_max=6.0)


class TestUpperBound:
    def test_constant_profile(self, hyperbolic_profile):
        assert psi_upper_bound(hyperbolic_profile, 2.0) == pytest.approx(2.0 * np.exp(2.0))
        assert psi_upper_bound(hyperbolic_profile, 0.0) == 0.0

    def test_flag_required(self):
        with pytest.raises(PreconditionError, match="monotone_nondecreasing"):
            psi_upper_bound(CurvatureProfile(kind="constant", value=1.0), 1.0)

    @given(theta=st.floats(0.01, 6.0))
    @settings(max_examples=30, deadline=None)
    def test_dominates_solution(self, power_profile, power_solution, theta):
        assert power_solution.evaluate(theta) <= psi_upper_bound(power_profile, theta) * (1 + 1e-9)

    def test_sqrt_curvature_integral(self, power_profile):
        # √(1 + t²) integrates to (t√(1+t²) + asinh t)/2
        expected = 0.5 * (2.0 * np.sqrt(5.0) + np.arcsinh(2.0))
        assert sqrt_curvature_integral(power_profile, 0.0, 2.0) == pytest.approx(expected, rel=1e-10)


class TestLowerBound:
    def test_constant_profile(self, hyperbolic_profile, hyperbolic_solution):
        bound, holds = psi_lower_bound(hyperbolic_profile, 0.5, 1.0, 3.0, hyperbolic_solution)
        assert bound == pytest.approx(np.sinh(1.0) * np.e, rel=1e-8)
        assert holds

    def test_radius_below_anchor(self, hyperbolic_profile, hyperbolic_solution):
        with pytest.raises(PreconditionError, match="below the anchor"):
            psi_lower_bound(hyperbolic_profile, 0.5, 2.0, 1.0, hyperbolic_solution)

    def test_flag_required(self, hyperbolic_solution):
        profile = CurvatureProfile(kind="constant", value=1.0)
        with pytest.raises(PreconditionError, match="satisfies_c32"):
            psi_lower_bound(profile, 0.5, 1.0, 2.0, hyperbolic_solution)

    def test_epsilon_range(self, hyperbolic_profile, hyperbolic_solution):
        with pytest.raises(PreconditionError, match="epsilon"):
            psi_lower_bound(hyperbolic_profile, 1.0, 1.0, 2.0, hyperbolic_solution)

    def test_anchor_from_scan(self, power_profile, power_solution):
        """
        From the scanned anchor on, the relaxed lower bound holds at every grid radius.
        """
        theta0 = find_theta0(power_profile, 0.5, power_solution)
        later = power_solution.theta_grid[power_solution.theta_grid >= theta0]
        for theta in later[:: max(1, later.size // 25)]:
            assert psi_lower_bound(power_profile, 0.5, theta0, float(theta), power_solution).holds


class TestSandwich:
    def test_sides(self, power_profile, power_solution):
        below = psi_sandwich(power_profile, 2.0, power_solution, 4.0)
        above = psi_sandwich(power_profile, 2.0, power_solution, 1.0)
        assert below.side is BoundSide.BELOW
        assert above.side is BoundSide.ABOVE
        assert below.bound <= power_solution.evaluate(4.0) * (1 + 1e-8)
        assert above.bound >= power_solution.evaluate(1.0) * (1 - 1e-8)

    def test_pivot_radius_is_equality(self, power_profile, power_solution):
        """
        At θ = R the estimate is ψ(R) itself and bounds from both sides.
        """
        pivot = psi_sandwich(power_profile, 2.0, power_solution, 2.0)
        assert pivot.side is BoundSide.EQUAL
        assert pivot.bound == pytest.approx(power_solution.evaluate(2.0), rel=1e-12)

    def test_positive_radii(self, power_profile, power_solution):
        with pytest.raises(PreconditionError, match="positive"):
            psi_sandwich(power_profile, 0.0, power_solution, 1.0)


class TestWarpedCurvatures:
    def test_constant_profile(self, hyperbolic_solution):
        radial, tangential = warped_sectional_curvatures(hyperbolic_solution)
        away = hyperbolic_solution.theta_grid[1:] >= 0.5
        np.testing.assert_allclose(radial, -1.0)
        np.testing.assert_allclose(tangential[away], -1.0, rtol=1e-5)

    def test_non_decreasing_profile_bounds(self, power_solution):
        """
        Tangential curvatures of a non-decreasing profile lie between −c and 0.
        """
        radial, tangential = warped_sectional_curvatures(power_solution)
        away = power_solution.theta_grid[1:] >= 0.5
        assert np.all(tangential[away] <= 1e-6)
        assert np.all(tangential[away] >= radial[away] * (1 + 1e-6))
