"""Tests for the acceptance self-test."""

import numpy as np
import pandas as pd
import pytest

from src.config import SystemConfig
from src.scene import Scene, default_scene
from src.selftest import SelfTest


class TestSelfTest:
    """Test cases for SelfTest."""

    def setup_method(self):
        """Set up test fixtures."""
        self.selftest = SelfTest(SystemConfig(), default_scene(), np.random.default_rng(3))

    def test_record_defaults_to_upper_bound(self):
        """Test that a row passes when value <= threshold."""
        self.selftest._record("a", 0.5, 1.0)
        self.selftest._record("b", 2.0, 1.0)
        self.selftest._record("c", 20.0, 10.0, passed=True)

        assert [row["passed"] for row in self.selftest.rows] == [True, False, True]

    def test_cheap_checks_pass(self):
        """Test the phase code, clutter span, quadratic form and invariant checks."""
        self.selftest.check_phase_code()
        self.selftest.check_clutter_span()
        self.selftest.check_quadratic_form()
        self.selftest.check_invariants()

        frame = pd.DataFrame(self.selftest.rows)
        assert frame["passed"].all(), frame[~frame["passed"]]
        expected = {
            "phase_code_gap_error_hz",
            "clutter_doppler_span_error_hz",
            "lowpass_projector_error",
            "doppler_rate_error_hz",
        }
        assert expected <= set(frame["metric"])

    def test_clutter_span_skipped_without_clutter(self):
        """Test that a scene without clutter records nothing."""
        selftest = SelfTest(SystemConfig(), Scene(), np.random.default_rng(3))

        selftest.check_clutter_span()

        assert selftest.rows == []


class TestSelfTestDefaultScene:
    """Full self-test on the reference scene at the desk pulse count."""

    @pytest.fixture(scope="class")
    def frame(self):
        return SelfTest(SystemConfig(), default_scene(), np.random.default_rng(3)).run()

    @staticmethod
    def row(frame, metric):
        rows = frame[frame["metric"] == metric]
        assert len(rows) == 1, metric
        return rows.iloc[0]

    def test_every_row_passes(self, frame):
        """Test that run() on the reference scene passes every check."""
        assert list(frame.columns) == ["metric", "value", "threshold", "passed"]
        assert frame["passed"].all(), frame[~frame["passed"]]
        assert {"chain_filtered_error", "cross_channel_leakage_db", "jammer_covariance_error"} <= set(frame["metric"])

    def test_pattern_peaks_at_target(self, frame):
        """Test that the FDA adapted pattern peaks at the (45°, 400 Hz) target cell."""
        assert self.row(frame, "pattern_argmax_offset_cells")["value"] == 0.0

    def test_clutter_and_jammer_nulls(self, frame):
        """Test 40 dB suppression on the clutter ridge and along the jammer line."""
        assert self.row(frame, "clutter_ridge_response_db")["value"] <= -40.0
        assert self.row(frame, "jammer_line_response_db")["value"] <= -40.0

    def test_mode_contrast(self, frame):
        """Test that FDA beats MIMO and PA by 10 dB at the target cell and on the mainlobe notch."""
        assert self.row(frame, "mode_contrast_target_sinr_db")["value"] >= 10.0
        assert self.row(frame, "mode_contrast_sinr_loss_db")["value"] >= 10.0
