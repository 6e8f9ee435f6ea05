import os
from unittest.mock import patch

import pytest

from energystudio.cli.config import MinimizeSection, ScanSection, VerifySection, load_config, parse_section
from energystudio.cli.defaults import read_defaults
from energystudio.exceptions import ConfigError


@pytest.fixture
def write_ini(tmp_path):
    def write(text: str, name: str = "run.ini"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


class TestDefaults:
    @pytest.mark.parametrize("command", ["psi", "scan", "verify", "minimize", "energy"])
    def test_every_command_has_defaults(self, command):
        assert "[run]" in read_defaults(command)
        config = load_config(command)
        assert config.run.seed == 0

    def test_unknown_command(self):
        with pytest.raises(ValueError, match="not a valid command"):
            read_defaults("plot")


class TestLoadConfig:
    def test_user_values_override_defaults(self, write_ini):
        path = write_ini("[scan]\nkind = blowup\nradii = 1, 0.5\n")
        config = load_config("scan", path)
        settings = parse_section(ScanSection, config.section("scan"), "scan")
        assert settings.kind == "blowup"
        assert settings.radii == (1.0, 0.5)
        assert settings.floor == -1e6

    def test_object_sections_are_replaced(self, write_ini):
        path = write_ini("[profile]\nkind = power\nk = 2\nfloor = 1\nmonotone_nondecreasing = true\n")
        config = load_config("psi", path)
        assert "value" not in config.section("profile")
        assert config.build_profile().kind == "power"

    def test_command_line_overrides(self, write_ini):
        path = write_ini("[run]\nseed = 4\nthreads = 2\n")
        config = load_config("verify", path, seed=9, threads=3)
        assert config.run.seed == 9
        assert config.run.threads == 3
        assert config.parser.get("run", "seed") == "9"

    def test_threads_from_environment(self):
        with patch.dict(os.environ, {"ENERGYSTUDIO_THREADS": "5"}):
            assert load_config("verify").run.threads == 5
            assert load_config("verify", threads=2).run.threads == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="not found"):
            load_config("psi", tmp_path / "missing.ini")

    def test_unparsable_file(self, write_ini):
        with pytest.raises(ConfigError, match="Cannot parse"):
            load_config("psi", write_ini("theta_max = 3\n"))

    def test_invalid_run_section(self, write_ini):
        with pytest.raises(ConfigError, match="\\[run\\]"):
            load_config("scan", write_ini("[run]\nq = 1.5\n"))

    def test_missing_q(self):
        config = load_config("psi")
        with pytest.raises(ConfigError, match="'q'"):
            config.q

    def test_written_config_replays(self, write_ini, tmp_path):
        config = load_config("scan", write_ini("[potential]\nkind = zero\n"), seed=3)
        path = config.write(tmp_path / "out")
        replay = load_config("scan", path)
        assert replay.to_ini() == config.to_ini()
        assert replay.build_potential().kind == "zero"


class TestSections:
    def test_empty_radii(self, write_ini):
        config = load_config("scan", write_ini("[scan]\nradii =\n"))
        with pytest.raises(ConfigError, match="\\[scan\\]"):
            parse_section(ScanSection, config.section("scan"), "scan")

    def test_invalid_campaign(self):
        with pytest.raises(ConfigError, match="\\[verify\\]"):
            parse_section(VerifySection, {"campaign": "nonsense"}, "verify")

    def test_campaign_config(self):
        settings = parse_section(VerifySection, {"dims": "2, 3", "cases": "4", "q_min": "0.3"}, "verify")
        campaign = settings.campaign_config(seed=7, threads=2)
        assert campaign.dims == (2, 3)
        assert campaign.q_range == (0.3, 0.9)
        assert campaign.seed == 7

    def test_minimize_section_split(self):
        settings = MinimizeSection.from_section({"grid_size": "64", "certificate": "false", "lam": "3"})
        assert settings.options == {"grid_size": "64"}
        assert not settings.certificate
        assert settings.minimizer_options(threads=2).grid_size == 64

    def test_invalid_minimizer_option(self):
        settings = MinimizeSection.from_section({"damping": "2.0"})
        with pytest.raises(ConfigError, match="\\[minimize\\]"):
            settings.minimizer_options(threads=1)

    def test_invalid_manifold(self, write_ini):
        config = load_config("scan", write_ini("[manifold]\nmode = bounds\n"))
        with pytest.raises(ConfigError, match="lower_profile"):
            config.build_manifold()
