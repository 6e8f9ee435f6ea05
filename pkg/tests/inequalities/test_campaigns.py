import pandas as pd
import pytest

from energystudio.exceptions import ParameterError
from energystudio.inequalities.campaigns import (
    CampaignConfig,
    carlson_levin_campaign,
    case_rng,
    convexity_campaign,
    general_carlson_levin_campaign,
    random_parameters,
    reversed_hls_campaign,
    sandwich_campaign,
)
from energystudio.inequalities.schemas import reports_frame


@pytest.fixture
def small_config():
    return CampaignConfig(seed=3, cases=8, dims=(2, 3), max_points=40)


class TestCampaignConfig:
    @pytest.mark.parametrize(
        "kwargs, match",
        [
            ({"q_range": (0.9, 0.2)}, "q_range"),
            ({"q_range": (0.0, 0.5)}, "q_range"),
            ({"c_range": (2.0, 1.0)}, "c_range"),
            ({"dims": (1, 2)}, "dims"),
        ],
    )
    def test_invalid_box(self, kwargs, match):
        with pytest.raises(ValueError, match=match):
            CampaignConfig(**kwargs)

    def test_fixed_exponent_below_threshold(self):
        config = CampaignConfig(lam=1.0, q_range=(0.2, 0.9), dims=(2, 3))
        with pytest.raises(ParameterError, match="threshold"):
            carlson_levin_campaign(config)

    def test_parameters_above_threshold(self, small_config):
        rng = case_rng(0, 0)
        for _ in range(50):
            q, lam = random_parameters(rng, small_config, 3)
            assert 0.2 <= q <= 0.9
            assert 2 * (1 - q) / q < lam <= 2 * (1 - q) / q + small_config.lam_width

    def test_case_streams_are_independent_of_order(self):
        first = case_rng(5, 2).uniform(size=3)
        case_rng(5, 1).uniform(size=10)
        assert (case_rng(5, 2).uniform(size=3) == first).all()


class TestCampaigns:
    def test_carlson_levin(self, small_config):
        reports = carlson_levin_campaign(small_config)
        assert len(reports) == small_config.cases
        assert all(report.passed for report in reports)

    def test_thread_count_does_not_change_results(self, small_config):
        serial = reports_frame(carlson_levin_campaign(small_config))
        parallel = reports_frame(carlson_levin_campaign(small_config.model_copy(update={"threads": 4})))
        pd.testing.assert_frame_equal(serial, parallel)

    def test_convexity(self, small_config):
        reports = convexity_campaign(small_config, lam=3.0)
        assert all(report.passed for report in reports)

    def test_convexity_unnormalized(self, small_config):
        reports = convexity_campaign(small_config, lam=3.0, unnormalized=True)
        assert all(report.label == "convexity_unnormalized" for report in reports)
        assert all(report.passed for report in reports)

    def test_negative_control_detects_failures(self):
        config = CampaignConfig(seed=1, cases=20, dims=(2,), max_points=20)
        reports = convexity_campaign(config, lam=3.0, negative_offset=3.0)
        assert any(not report.passed for report in reports)

    def test_sandwich(self, small_config):
        reports = sandwich_campaign(small_config, profile_count=4)
        assert {"psi_upper"} <= {report.label for report in reports}
        assert all(report.passed for report in reports)

    @pytest.mark.slow
    def test_general_carlson_levin(self, small_config):
        reports = general_carlson_levin_campaign(small_config)
        assert all(report.passed for report in reports)

    @pytest.mark.slow
    def test_reversed_hls(self):
        config = CampaignConfig(seed=2, cases=3, dims=(2,))
        reports = reversed_hls_campaign(config)
        assert len(reports) == 3 * 5
        assert all(report.passed for report in reports)
