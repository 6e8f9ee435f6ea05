import numpy as np
import pytest

from energystudio.exceptions import ParameterError, PreconditionError
from energystudio.geometry.manifold import ModelManifold
from energystudio.geometry.psi import solve_psi
from energystudio.geometry.schemas import CurvatureProfile
from energystudio.inequalities.carlson_levin import verify_carlson_levin, verify_carlson_levin_general
from energystudio.inequalities.schemas import InequalityReport, reports_frame
from energystudio.measures.radial import bump_mixture, uniform_ball


@pytest.fixture
def hyperbolic_plane():
    return ModelManifold(dim=2, curvature=1.0)


@pytest.fixture
def ball(hyperbolic_plane):
    return uniform_ball(hyperbolic_plane, 1.0, 512)


@pytest.fixture
def unit_profile():
    return CurvatureProfile(kind="constant", value=1.0, monotone_nondecreasing=True)


class TestInequalityReport:
    def test_divergent_rhs_is_degenerate(self):
        report = InequalityReport.compare(1.0, np.inf, 2.0)
        assert report.degenerate
        assert report.passed
        assert report.ratio == 0.0

    def test_zero_rhs_fails(self):
        report = InequalityReport.compare(1.0, 0.0, 2.0)
        assert report.ratio == np.inf
        assert not report.passed

    def test_compare_logs_handles_huge_sides(self):
        report = InequalityReport.compare_logs(1000.0, 1001.0, 1.0)
        assert report.ratio == pytest.approx(np.exp(-1.0))
        assert report.passed

    def test_verdict_must_match_ratio(self):
        with pytest.raises(ValueError, match="'passed' key"):
            InequalityReport(lhs=2.0, rhs=1.0, ratio=2.0, constant_used=1.0, passed=True)

    def test_frame(self):
        reports = [InequalityReport.compare(1.0, 2.0, 1.0), InequalityReport.compare(3.0, 2.0, 1.0, case_id=7)]
        frame = reports_frame(reports)
        assert list(frame.columns) == ["case_id", "lhs", "rhs", "ratio", "passed"]
        assert frame["case_id"].tolist() == [0, 7]
        assert frame["passed"].tolist() == [True, False]


class TestConstantCurvature:
    @pytest.mark.parametrize("lam, q", [(2.0, 0.5), (3.0, 0.5), (1.5, 0.8), (10.0, 0.3)])
    def test_uniform_ball(self, ball, lam, q):
        report = verify_carlson_levin(ball, lam, q)
        assert report.passed
        assert not report.degenerate
        assert 0 < report.ratio <= 1.0
        assert report.label == "carlson_levin"

    def test_mass_scaling(self, hyperbolic_plane):
        """
        Both sides are homogeneous of degree q in ρ, so the ratio does not depend on the mass.
        """
        rho = bump_mixture(hyperbolic_plane, centres=[0.5, 2.0], widths=[0.3, 0.4], amplitudes=[1.0, 0.5],
                           r_max=4.0, n=512)
        base = verify_carlson_levin(rho, 3.0, 0.5)
        scaled = verify_carlson_levin(rho.scaled(7.0), 3.0, 0.5)
        assert scaled.ratio == pytest.approx(base.ratio, rel=1e-10)

    def test_larger_scale_is_allowed(self, ball):
        report = verify_carlson_levin(ball, 3.0, 0.5, c_m=4.0)
        assert report.passed
        assert report.constant_used < verify_carlson_levin(ball, 3.0, 0.5).constant_used

    def test_scale_below_curvature(self, ball):
        with pytest.raises(PreconditionError, match="below the manifold curvature"):
            verify_carlson_levin(ball, 3.0, 0.5, c_m=0.5)

    def test_exponent_at_threshold(self, ball):
        with pytest.raises(ParameterError, match="threshold"):
            verify_carlson_levin(ball, 1.0, 0.5)

    def test_variable_curvature_is_refused(self):
        profile = CurvatureProfile(kind="power", k=2.0, floor=1.0, monotone_nondecreasing=True)
        rho = uniform_ball(ModelManifold(dim=2, profile=profile, theta_max=4.0), 1.0, 256)
        with pytest.raises(ValueError, match="constant"):
            verify_carlson_levin(rho, 3.0, 0.5)


class TestVariableCurvature:
    def test_agrees_with_constant_case(self, ball, unit_profile):
        psi = solve_psi(unit_profile, 5.0)
        general = verify_carlson_levin_general(ball, 3.0, 0.5, psi)
        constant = verify_carlson_levin(ball, 3.0, 0.5)
        assert general.passed
        assert general.label == "carlson_levin_general"
        assert general.ratio == pytest.approx(constant.ratio, rel=1e-6)

    def test_warped_model(self):
        profile = CurvatureProfile(kind="exponential", beta=0.5, amplitude=1.0, monotone_nondecreasing=True)
        manifold = ModelManifold(dim=3, profile=profile, theta_max=6.0)
        rho = bump_mixture(manifold, centres=[0.0, 1.5], widths=[0.5, 0.3], amplitudes=[1.0, 1.0],
                           r_max=3.0, n=256)
        psi = manifold.comparison_solution("exact")
        report = verify_carlson_levin_general(rho, 3.0, 0.6, psi)
        assert report.passed

    def test_profile_must_dominate(self, unit_profile):
        rho = uniform_ball(ModelManifold(dim=2, curvature=2.0), 1.0, 256)
        with pytest.raises(PreconditionError, match="dominate"):
            verify_carlson_levin_general(rho, 3.0, 0.5, solve_psi(unit_profile, 5.0))

    def test_support_beyond_solved_range(self, ball, unit_profile):
        with pytest.raises(PreconditionError, match="beyond the solved range"):
            verify_carlson_levin_general(ball, 3.0, 0.5, solve_psi(unit_profile, 0.5))
