"""Tests for the phase code module."""

import numpy as np
import pytest

from src.config import SystemConfig
from src.phasecode import (
    PhaseCode,
    circular_gaps,
    design_phase_codes,
    doppler_centers,
    validate_phase_codes,
)
from src.utils import DomainError


def code_with_centers(centers, cfg):
    """Build a phase code whose static band centers are `centers`."""
    m = np.arange(1, cfg.n_tx + 1)
    phi = np.asarray(centers, dtype=float) - m * cfg.freq_offset_hz
    return PhaseCode(phi=phi, band_centers=np.asarray(centers, dtype=float))


class TestDesignPhaseCodes:
    """Test cases for the equal-gap design."""

    def setup_method(self):
        """Set up test fixtures."""
        self.cfg = SystemConfig()
        self.code = design_phase_codes(self.cfg)

    def test_centers_are_equally_spaced(self):
        """Test that band centers sit at (m-1) PRF/N_T."""
        np.testing.assert_allclose(self.code.band_centers, [0.0, 1400.0, 2800.0, 4200.0, 5600.0])

    def test_code_values(self):
        """Test φ_m = (m-1) PRF/N_T - mΔf."""
        assert self.code.phi[0] == pytest.approx(-1e6)
        assert self.code.phi[1] == pytest.approx(1400.0 - 2e6)
        assert len(self.code) == 5

    def test_centers_on_dft_bins(self):
        """Test that the design lands on slow-time bins for L = 180."""
        assert self.code.on_bin(180, 7000.0)
        assert not self.code.on_bin(32, 7000.0)

    def test_centers_invariant_to_prf_multiples(self):
        """Test that adding whole PRFs to φ leaves the band centers unchanged."""
        prf = self.cfg.prf_hz
        shifted = PhaseCode(phi=self.code.phi + prf * np.array([1, -2, 3, 0, 5]), band_centers=self.code.band_centers)

        for f_td in (0.0, 400.0, -2500.0):
            gap = doppler_centers(shifted, f_td, self.cfg) - doppler_centers(self.code, f_td, self.cfg)
            wrapped = np.mod(gap + prf / 2, prf) - prf / 2

            np.testing.assert_allclose(wrapped, 0.0, atol=1e-6)

    def test_design_invariant_to_offset_modulo_prf(self):
        """Test that Δf and Δf + PRF give the same designed band centers."""
        prf = self.cfg.prf_hz
        other = design_phase_codes(self.cfg.with_overrides(freq_offset_hz=self.cfg.freq_offset_hz + prf))

        wrapped = np.mod(other.band_centers - self.code.band_centers + prf / 2, prf) - prf / 2

        np.testing.assert_allclose(wrapped, 0.0, atol=1e-6)

    def test_doppler_scales_with_carrier(self):
        """Test that each center moves by (f_m/f_c) f_td."""
        centers = doppler_centers(self.code, 600.0, self.cfg)

        np.testing.assert_allclose(centers, [600.0, 2000.5, 3401.0, 4801.5, 6202.0], atol=1e-6)

    def test_wrong_length_raises(self):
        """Test that a code of the wrong length is rejected."""
        with pytest.raises(DomainError, match="expected 5"):
            doppler_centers(PhaseCode(phi=np.zeros(3), band_centers=np.zeros(3)), 0.0, self.cfg)


class TestCircularGaps:
    """Test cases for circular gap computation."""

    def test_gaps_sum_to_prf(self):
        """Test that gaps cover the whole Doppler circle."""
        gaps = circular_gaps([6500.0, 100.0, 3000.0], 7000.0)

        assert gaps.sum() == pytest.approx(7000.0)
        np.testing.assert_allclose(gaps, [2900.0, 3500.0, 600.0])

    def test_single_center(self):
        """Test that one center owns the full PRF."""
        np.testing.assert_array_equal(circular_gaps([42.0], 7000.0), [7000.0])


class TestValidatePhaseCodes:
    """Test cases for phase code feasibility."""

    def setup_method(self):
        """Set up test fixtures."""
        self.cfg = SystemConfig()
        self.code = design_phase_codes(self.cfg)

    def test_stationary_design_is_feasible(self):
        """Test that the design meets PRF/N_T exactly at f_td = 0."""
        report = validate_phase_codes(self.code, 0.0, self.cfg)

        assert report.feasible is True
        assert report.min_gap == pytest.approx(1400.0)
        assert report.violated_constraint is None
        assert report.checked_f_td == (0.0,)

    def test_target_doppler_shrinks_wraparound_gap(self):
        """Test that f_td = 600 Hz breaks the wraparound gap."""
        report = validate_phase_codes(self.code, 600.0, self.cfg)

        assert report.feasible is False
        assert report.min_gap == pytest.approx(1398.0, abs=1e-6)
        assert report.worst_f_td == 600.0
        assert report.violated_constraint == "wraparound_gap"
        assert report.min_adjacent_gap == pytest.approx(1399.5, abs=1e-6)
        assert report.min_wraparound_gap == pytest.approx(1398.0, abs=1e-6)

    def test_tolerance_accepts_small_shortfall(self):
        """Test that a tolerance absorbs the carrier-scaling shortfall."""
        report = validate_phase_codes(self.code, 600.0, self.cfg, tolerance=2.5)

        assert report.feasible is True

    def test_doppler_beyond_band(self):
        """Test that f_td_max >= PRF/N_T is flagged."""
        report = validate_phase_codes(self.code, 1400.0, self.cfg)

        assert report.feasible is False
        assert report.violated_constraint == "doppler_exceeds_band"
        assert "not below" in report.message

    def test_out_of_order_bands(self):
        """Test that interleaved bands are reported as an ordering violation."""
        code = code_with_centers([0.0, 2800.0, 2500.0, 4200.0, 5600.0], self.cfg)

        report = validate_phase_codes(code, 0.0, self.cfg)

        assert report.feasible is False
        assert report.min_gap == pytest.approx(300.0)
        assert report.violated_constraint == "band_order"

    def test_adjacent_collision(self):
        """Test that neighbors closer than PRF/N_T are reported as adjacent."""
        code = code_with_centers([0.0, 1400.0, 2800.0, 4200.0, 5000.0], self.cfg)

        report = validate_phase_codes(code, 0.0, self.cfg)

        assert report.violated_constraint == "adjacent_gap"
        assert report.min_gap == pytest.approx(800.0)

    def test_single_transmitter(self):
        """Test that one element is trivially feasible."""
        cfg = SystemConfig(n_tx=1)

        report = validate_phase_codes(design_phase_codes(cfg), 100.0, cfg)

        assert report.min_gap == pytest.approx(7000.0)
        assert report.min_adjacent_gap == pytest.approx(7000.0)
        assert report.feasible is True

    def test_negative_limit_raises(self):
        """Test that a negative Doppler limit is rejected."""
        with pytest.raises(DomainError, match="non-negative"):
            validate_phase_codes(self.code, -1.0, self.cfg)
