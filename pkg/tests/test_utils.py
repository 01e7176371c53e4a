"""Tests for the utilities module."""

import numpy as np
import pytest

from src.utils import (
    DomainError,
    SEED_LABELS,
    ValidationError,
    aligned_relative_error,
    config_hash,
    frange,
    from_db,
    spawn_generators,
    to_db,
)


class TestSpawnGenerators:
    """Test cases for seed fan-out."""

    def test_same_seed_reproduces_streams(self):
        """Test that one seed gives identical draws on every call."""
        first = spawn_generators(7)["clutter"].standard_normal(5)
        second = spawn_generators(7)["clutter"].standard_normal(5)

        np.testing.assert_array_equal(first, second)

    def test_labels_are_independent(self):
        """Test that different labels produce different streams."""
        streams = spawn_generators(7)

        assert set(streams) == set(SEED_LABELS)
        assert not np.allclose(streams["clutter"].random(4), streams["noise"].random(4))

    def test_different_seeds_differ(self):
        """Test that different seeds change the draws."""
        a = spawn_generators(1)["selftest"].random(3)
        b = spawn_generators(2)["selftest"].random(3)

        assert not np.allclose(a, b)


class TestConfigHash:
    """Test cases for config hashing."""

    def test_key_order_does_not_matter(self):
        """Test that the hash is canonical in key order."""
        assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})

    def test_value_change_changes_hash(self):
        """Test that changing a value changes the hash."""
        assert config_hash({"pulses": 32}) != config_hash({"pulses": 33})
        assert len(config_hash({})) == 64


class TestDecibels:
    """Test cases for dB conversions."""

    def test_to_db_values(self):
        """Test known dB conversions."""
        np.testing.assert_allclose(to_db([1.0, 100.0, 0.01]), [0.0, 20.0, -20.0])

    def test_to_db_zero_is_finite(self):
        """Test that zero power maps to the floor instead of -inf."""
        assert np.isfinite(to_db(0.0))
        assert to_db(0.0) == pytest.approx(-3000.0)

    def test_from_db_inverts_to_db(self):
        """Test that from_db undoes to_db."""
        values = np.array([0.5, 3.0, 1e4])
        np.testing.assert_allclose(from_db(to_db(values)), values, rtol=1e-12)


class TestAlignedRelativeError:
    """Test cases for scalar-aligned L2 error."""

    def setup_method(self):
        """Set up test fixtures."""
        self.reference = np.exp(1j * np.linspace(0.0, 3.0, 12))

    def test_scaled_copy_has_zero_error(self):
        """Test that a complex multiple of the reference aligns exactly."""
        measured = (2.0 - 1.5j) * self.reference

        assert aligned_relative_error(measured, self.reference) < 1e-12

    def test_orthogonal_component_is_measured(self):
        """Test that an orthogonal addition shows up in the error."""
        signs = np.zeros(12)
        signs[:2] = [1.0, -1.0]
        ortho = self.reference * signs
        measured = self.reference + 0.1 * ortho / np.linalg.norm(ortho) * np.linalg.norm(self.reference)

        error = aligned_relative_error(measured, self.reference)

        assert error == pytest.approx(0.1 / np.sqrt(1.01), rel=1e-9)

    def test_shape_mismatch_raises(self):
        """Test that mismatched shapes are rejected."""
        with pytest.raises(DomainError, match="shape mismatch"):
            aligned_relative_error(np.ones(3), np.ones(4))

    def test_zero_vector_raises(self):
        """Test that a zero vector is rejected."""
        with pytest.raises(DomainError, match="zero vectors"):
            aligned_relative_error(np.zeros(3), np.ones(3))


class TestFrange:
    """Test cases for inclusive float ranges."""

    def test_inclusive_endpoint(self):
        """Test that the stop value is included."""
        np.testing.assert_allclose(frange(0.0, 1.0, 0.25), [0.0, 0.25, 0.5, 0.75, 1.0])

    def test_default_doppler_grid_size(self):
        """Test the size of the default Doppler grid."""
        grid = frange(-800.0, 800.0, 10.0)

        assert len(grid) == 161
        assert grid[-1] == pytest.approx(800.0)

    def test_bad_step_raises(self):
        """Test that a non-positive step is rejected."""
        with pytest.raises(DomainError, match="step"):
            frange(0.0, 1.0, 0.0)

    def test_reversed_range_raises(self):
        """Test that stop below start is rejected."""
        with pytest.raises(DomainError, match="below start"):
            frange(1.0, 0.0, 0.1)


class TestValidationError:
    """Test cases for the validation exception."""

    def test_message_names_field(self):
        """Test that the message is prefixed with the field."""
        error = ValidationError("grid.doppler_hz", "must be [start, stop, step]")

        assert error.field == "grid.doppler_hz"
        assert str(error) == "grid.doppler_hz: must be [start, stop, step]"
        assert isinstance(error, ValueError)
