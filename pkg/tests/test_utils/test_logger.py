"""
Tests for structured logging helpers.
"""

import io
import json

import pytest

from src.utils.logger import get_logger, log_stage_execution, setup_logging, timed_stage


@pytest.fixture
def stream(monkeypatch):
    """JSON log output captured in memory."""
    monkeypatch.delenv("ENVIRONMENT", raising=False)
    buffer = io.StringIO()
    setup_logging(level="INFO", stream=buffer)
    yield buffer
    setup_logging(level="INFO")


def _events(buffer):
    return [json.loads(line) for line in buffer.getvalue().splitlines() if line.strip()]


class TestSetupLogging:
    """Test suite for setup_logging."""

    def test_json_lines(self, stream):
        """Test events render as JSON with level and timestamp."""
        get_logger("test").info("match_city_started", cities=3)

        event = _events(stream)[-1]
        assert event["event"] == "match_city_started"
        assert event["cities"] == 3
        assert event["level"] == "info"
        assert "timestamp" in event

    def test_level_filters(self, monkeypatch):
        """Test events below the configured level are dropped."""
        monkeypatch.delenv("ENVIRONMENT", raising=False)
        buffer = io.StringIO()
        setup_logging(level="warn", stream=buffer)

        get_logger("test").info("hidden")
        get_logger("test").warning("shown")

        assert [e["event"] for e in _events(buffer)] == ["shown"]

    def test_unknown_level(self, monkeypatch):
        """Test an unknown level falls back to INFO with a warning."""
        monkeypatch.delenv("ENVIRONMENT", raising=False)
        buffer = io.StringIO()
        setup_logging(level="chatty", stream=buffer)

        assert _events(buffer)[0]["event"] == "unknown_log_level"


class TestStageLogging:
    """Test suite for stage execution events."""

    def test_success(self, stream):
        """Test a successful stage logs its duration and context."""
        log_stage_execution("sweep_row", 12.3456, point={"epsilon": 1.0})

        event = _events(stream)[-1]
        assert event["event"] == "stage_execution_success"
        assert event["duration_ms"] == 12.35
        assert event["point"] == {"epsilon": 1.0}

    def test_timed_stage_reraises(self, stream):
        """Test a failing block is logged with its error type and re-raised."""
        with pytest.raises(KeyError):
            with timed_stage("metrics"):
                raise KeyError("kanon")

        event = _events(stream)[-1]
        assert event["event"] == "stage_execution_failed"
        assert event["stage"] == "metrics"
        assert event["error_type"] == "KeyError"
