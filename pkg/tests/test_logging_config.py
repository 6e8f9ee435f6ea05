import logging
import os
from unittest.mock import patch

from energystudio.logging_config import ExtraFormatter, configure_root_logger, get_logger, set_log_level


class TestLogging:
    def test_logger_is_namespaced(self):
        logger = get_logger("tests.namespace")
        assert logger.name == "energystudio.tests.namespace"
        assert not logger.propagate

    def test_handlers_are_added_once(self):
        first = get_logger("tests.once")
        second = get_logger("tests.once")
        assert first is second
        assert len(second.handlers) == 1

    def test_level_from_environment(self):
        with patch.dict(os.environ, {"ENERGYSTUDIO_LOG_LEVEL": "DEBUG"}):
            assert get_logger("tests.env_level").level == logging.DEBUG

    def test_log_file(self, tmp_path):
        path = tmp_path / "run.log"
        with patch.dict(os.environ, {"ENERGYSTUDIO_LOG_FILE": str(path)}):
            logger = get_logger("tests.file")
        logger.warning("Written to file", extra={"value": 1})
        for handler in logger.handlers:
            handler.flush()
        text = path.read_text(encoding="utf-8")
        assert "Written to file" in text
        assert text.rstrip().endswith("| value=1")

    def test_set_log_level(self):
        logger = get_logger("tests.set_level")
        set_log_level("ERROR")
        assert logger.level == logging.ERROR
        set_log_level("INFO")
        assert logger.level == logging.INFO

    def test_configure_root_logger(self):
        configure_root_logger("warning")
        assert logging.getLogger("energystudio").level == logging.WARNING


class TestExtraFormatter:
    @staticmethod
    def _record(message: str, **extra) -> logging.LogRecord:
        record = logging.LogRecord("energystudio.tests", logging.INFO, __file__, 1, message, None, None)
        for key, value in extra.items():
            setattr(record, key, value)
        return record

    def test_appends_sorted_fields(self):
        formatter = ExtraFormatter("%(message)s")
        line = formatter.format(self._record("Scan finished", verdict="unbounded_below_spreading", radii=10))
        assert line == "Scan finished | radii=10 verdict=unbounded_below_spreading"

    def test_floats_keep_full_precision(self):
        formatter = ExtraFormatter("%(message)s")
        line = formatter.format(self._record("Residual", foc_residual=0.1 + 0.2, campaigns=["a", "b"]))
        assert "foc_residual=0.30000000000000004" in line
        assert "campaigns=[a,b]" in line

    def test_plain_record_is_unchanged(self):
        formatter = ExtraFormatter("%(levelname)s %(message)s")
        assert formatter.format(self._record("Nothing extra")) == "INFO Nothing extra"
