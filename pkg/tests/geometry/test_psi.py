import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from energystudio.exceptions import InvalidProfileError, PreconditionError
from energystudio.geometry.io import read_psi_csv
from energystudio.geometry.psi import log_psi_closed_form, psi_closed_form, solve_psi
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.tables import write_table


class TestClosedForm:
    def test_known_values(self):
        assert psi_closed_form(1.0, 2.0) == pytest.approx(np.sinh(2.0))
        assert psi_closed_form(0.0, 5.0) == 5.0
        assert psi_closed_form(4.0, 1.0) == pytest.approx(np.sinh(2.0) / 2.0)

    def test_small_radii_use_series(self):
        """
        The series branch must agree with sinh where both are accurate.
        """
        theta = np.array([1e-8, 1e-6, 5e-5])
        np.testing.assert_allclose(psi_closed_form(1.0, theta), np.sinh(theta), rtol=1e-14)

    def test_log_form_stays_finite(self):
        assert np.isfinite(log_psi_closed_form(1.0, 2000.0))
        assert log_psi_closed_form(1.0, 2000.0) == pytest.approx(2000.0 - np.log(2.0))

    def test_negative_curvature_rejected(self):
        with pytest.raises(PreconditionError, match="non-negative"):
            psi_closed_form(-1.0, 1.0)

    @given(c=st.floats(0.01, 9.0), theta=st.floats(0.0, 40.0))
    @settings(max_examples=50, deadline=None)
    def test_log_matches_value(self, c, theta):
        value = psi_closed_form(c, theta)
        if theta > 0:
            assert np.exp(log_psi_closed_form(c, theta)) == pytest.approx(value, rel=1e-12)


class TestSolvePsi:
    @pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
    def test_matches_closed_form(self, c):
        """
        The integrated solution must agree with sinh(√c θ)/√c to 1e-8 relative.
        """
        solution = solve_psi(CurvatureProfile(kind="constant", value=c), theta_max=10.0)
        theta = np.linspace(1e-3, 10.0, 2001)
        np.testing.assert_allclose(solution.evaluate(theta), psi_closed_form(c, theta), rtol=1e-8)

    def test_initial_conditions(self):
        solution = solve_psi(CurvatureProfile(kind="power", k=2.0, floor=1.0), theta_max=3.0)
        assert solution.psi[0] == 0.0
        assert solution.dpsi[0] == 1.0
        assert solution.theta_max == pytest.approx(3.0)

    def test_large_radius_switches_to_log_form(self):
        """
        Past the overflow switch the log form carries the solution.
        """
        solution = solve_psi(CurvatureProfile(kind="constant", value=1.0), theta_max=600.0)
        assert solution.switch_index < solution.theta_grid.size - 1
        assert solution.log_evaluate(550.0) == pytest.approx(550.0 - np.log(2.0), rel=1e-8)

    def test_log_derivative(self):
        solution = solve_psi(CurvatureProfile(kind="constant", value=1.0), theta_max=600.0)
        assert solution.log_derivative(2.0) == pytest.approx(np.log(np.cosh(2.0)), rel=1e-7)
        assert solution.log_derivative(550.0) == pytest.approx(550.0 - np.log(2.0), rel=1e-8)

    def test_growth_dominates_the_euclidean_solution(self):
        solution = solve_psi(CurvatureProfile(kind="exponential", beta=0.5), theta_max=5.0)
        theta = solution.theta_grid[1:]
        assert np.all(solution.psi[1:] >= theta * (1 - 1e-9))

    def test_non_positive_theta_max(self):
        with pytest.raises(PreconditionError, match="theta_max"):
            solve_psi(CurvatureProfile(kind="constant", value=1.0), theta_max=0.0)

    def test_non_positive_profile(self):
        with pytest.raises(InvalidProfileError, match="strictly positive"):
            solve_psi(CurvatureProfile(kind="constant", value=0.0), theta_max=1.0)

    def test_table_round_trip(self, tmp_path):
        solution = solve_psi(CurvatureProfile(kind="constant", value=1.0), theta_max=2.0)
        write_table(solution.to_frame(), tmp_path / "psi.csv")
        table = read_psi_csv(tmp_path / "psi.csv")
        np.testing.assert_array_equal(table["theta"], solution.theta_grid)
        np.testing.assert_array_equal(table["psi"], solution.psi)

    def test_table_missing_column(self, tmp_path):
        solution = solve_psi(CurvatureProfile(kind="constant", value=1.0), theta_max=1.0)
        write_table(solution.to_frame()[["theta", "psi"]], tmp_path / "psi.csv")
        with pytest.raises(ValueError, match="missing columns"):
            read_psi_csv(tmp_path / "psi.csv")


class TestCurvatureProfile:
    def test_from_config(self):
        profile = CurvatureProfile.from_config(
            {"kind": "power", "k": "2", "floor": "1", "monotone_nondecreasing": "true"}
        )
        assert profile(3.0) == pytest.approx(10.0)
        assert profile.monotone_nondecreasing

    def test_config_round_trip(self):
        profile = CurvatureProfile(kind="exponential", beta=0.5, amplitude=2.0, satisfies_c32=True)
        assert CurvatureProfile.from_config(profile.to_config()).model_dump() == profile.model_dump()

    def test_decreasing_profile_with_monotone_flag(self):
        with pytest.raises(ValueError, match="monotone_nondecreasing"):
            CurvatureProfile(
                kind="tabulated", table_theta=(0.0, 1.0, 2.0), table_c=(3.0, 2.0, 1.0), monotone_nondecreasing=True
            )

    def test_missing_parameter(self):
        with pytest.raises(ValueError, match="'k' key"):
            CurvatureProfile(kind="power")

    def test_tabulated_outside_table(self):
        profile = CurvatureProfile(kind="tabulated", table_theta=(0.0, 1.0), table_c=(1.0, 2.0))
        with pytest.raises(InvalidProfileError, match="outside its table"):
            profile(1.5)
