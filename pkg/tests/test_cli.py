"""Tests for the command-line interface."""

import json
from dataclasses import replace
from unittest.mock import patch

import numpy as np
import pandas as pd
import pytest

from src.cli import (
    RunConfig,
    RunResult,
    apply_overrides,
    build_parser,
    load_config,
    main,
    run,
    run_selftest,
    save_config,
)
from src.config import SystemConfig
from src.export import ResultWriter
from src.utils import ValidationError


def small_config(out_dir) -> dict:
    return {
        "system": {"n_tx": 3, "n_rx": 2, "pulses": 8},
        "scene": {
            "name": "small",
            "target": {"range_m": 3000.0, "azimuth_deg": 45.0, "depression_deg": 45.0, "doppler_hz": 400.0},
            "clutter_rings": [{"range_m": 3006.0, "azimuth_span_deg": [0.0, 180.0], "patches": 7, "cnr_db": 10.0}],
            "jammers": [{"azimuth_deg": 120.0, "jnr_db": 10.0}],
        },
        "grid": {"azimuth_deg": [0.0, 180.0, 10.0], "doppler_hz": [-800.0, 800.0, 100.0]},
        "out_dir": str(out_dir),
    }


def write_config(path, data) -> str:
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestLoadConfig:
    """Test cases for configuration loading."""

    def test_defaults_without_file(self):
        """Test that no file gives the built-in defaults."""
        config = load_config()

        assert config.system == SystemConfig()
        assert config.scene.name == "default"
        assert config.mode == "fda"
        assert config.doppler_limit_hz == 400.0
        assert len(config.azimuths) == 181

    def test_empty_file_gives_defaults(self, tmp_path):
        """Test that an empty file behaves like no file."""
        path = tmp_path / "empty.json"
        path.write_text("   \n", encoding="utf-8")

        assert load_config(str(path)).system == SystemConfig()

    def test_small_file(self, tmp_path):
        """Test that file values are parsed with angles in radians."""
        config = load_config(write_config(tmp_path / "c.json", small_config(tmp_path)))

        assert config.system.snapshot_dim == 48
        assert config.scene.name == "small"
        assert config.scene.target.azimuth == pytest.approx(np.pi / 4)
        assert config.scene.clutter_rings[0].patches == 7
        assert config.scene.jammers[0].jnr_db == 10.0
        assert len(config.dopplers) == 17

    def test_missing_file(self, tmp_path):
        """Test that a missing file is a validation error on the scene."""
        with pytest.raises(ValidationError, match="not found") as excinfo:
            load_config(str(tmp_path / "nope.json"))

        assert excinfo.value.field == "scene"

    def test_malformed_json(self, tmp_path):
        """Test that bad JSON reports its position."""
        path = tmp_path / "bad.json"
        path.write_text('{"mode": }', encoding="utf-8")

        with pytest.raises(ValidationError, match="line 1") as excinfo:
            load_config(str(path))

        assert excinfo.value.field == "file"

    @pytest.mark.parametrize("data,field", [
        ({"bogus": 1}, "config.bogus"),
        ({"system": {"antennas": 4}}, "system.antennas"),
        ({"system": {"n_tx": 2.5}}, "system.n_tx"),
        ({"system": {"prf_hz": "fast"}}, "system.prf_hz"),
        ({"system": {"pulse_width_s": 1.0}}, "system"),
        ({"grid": {"doppler_hz": [800.0, -800.0, 10.0]}}, "grid.doppler_hz"),
        ({"grid": {"azimuth_deg": [0.0, 180.0]}}, "grid.azimuth_deg"),
        ({"scene": {"clutter_rings": [{"patches": 0}]}}, "scene.clutter_rings[0].patches"),
        ({"scene": {"target": {"speed": 3.0}}}, "scene.target.speed"),
        ({"scene": {"jammers": {"azimuth_deg": 10.0}}}, "scene.jammers"),
        ({"mode": "sar"}, "mode"),
        ({"loading": -1.0}, "loading"),
        ({"cnr_mode": "average"}, "cnr_mode"),
        ({"seed": -3}, "seed"),
        ({"system": {"pulses": 1000}}, "system.pulses"),
        ({"scene": {"target": {"azimuth_deg": 200.0}}}, "scene.target"),
        ({"scene": {"jammers": [{"depression_deg": 95.0}]}}, "scene.jammers[0]"),
    ])
    def test_invalid_fields(self, tmp_path, data, field):
        """Test that each invalid field is named in the error."""
        path = write_config(tmp_path / "c.json", data)

        with pytest.raises(ValidationError) as excinfo:
            load_config(path)

        assert excinfo.value.field == field

    @pytest.mark.parametrize("source", ["small", "default"])
    def test_save_round_trip(self, tmp_path, source):
        """Test that a saved config loads back equal field by field."""
        if source == "small":
            config = load_config(write_config(tmp_path / "c.json", small_config(tmp_path)))
        else:
            config = load_config()

        save_config(config, str(tmp_path / "saved.json"))
        reloaded = load_config(str(tmp_path / "saved.json"))

        assert reloaded == config


class TestApplyOverrides:
    """Test cases for CLI flag overrides."""

    def setup_method(self):
        """Set up test fixtures."""
        self.config = RunConfig(system=SystemConfig(n_tx=3, n_rx=2, pulses=8))

    def test_no_overrides_returns_same(self):
        """Test that unset flags change nothing."""
        assert apply_overrides(self.config, pulses=None, mode=None) is self.config

    def test_overrides_applied(self):
        """Test pulses, mode, CNR mode and seed overrides."""
        config = apply_overrides(self.config, pulses=16, mode="mimo", cnr_mode="total", seed=9)

        assert config.system.pulses == 16
        assert config.mode == "mimo"
        assert config.scene.cnr_mode == "total"
        assert config.seed == 9

    def test_bad_pulses_raise(self):
        """Test that a zero pulse count is rejected."""
        with pytest.raises(ValidationError) as excinfo:
            apply_overrides(self.config, pulses=0)

        assert excinfo.value.field == "pulses"


class TestRun:
    """Test cases for subcommand execution."""

    @pytest.fixture
    def config(self, tmp_path):
        return load_config(write_config(tmp_path / "c.json", small_config(tmp_path / "out")))

    def test_phase_code(self, config, tmp_path):
        """Test the phase-code outputs."""
        result = run("phase-code", config)

        assert result.files == ["phase_code.csv", "phase_code_report.json", "manifest.json"]
        frame = pd.read_csv(tmp_path / "out" / "phase_code.csv")
        assert list(frame["element"]) == [1, 2, 3]
        assert "min_gap_hz" in result.summary

    def test_spectrum_with_plot(self, config, tmp_path):
        """Test the spectrum table and figure."""
        result = run("spectrum", config, plot=True)

        frame = pd.read_csv(tmp_path / "out" / "spectrum.csv")
        assert len(frame) == 19 * 17
        assert "spectrum.html" in result.files

    def test_pattern_normalized(self, config, tmp_path):
        """Test that the pattern is normalized to its peak."""
        result = run("pattern", config)

        frame = pd.read_csv(tmp_path / "out" / "pattern.csv")
        assert frame["value_db"].max() == pytest.approx(0.0, abs=1e-6)
        assert set(result.summary) == {"peak_azimuth_deg", "peak_doppler_hz"}

    def test_cut_defaults_to_target_doppler(self, config, tmp_path):
        """Test the default cut position."""
        result = run("cut", config, axis="doppler")

        frame = pd.read_csv(tmp_path / "out" / "cut.csv")
        assert result.summary["at"] == 400.0
        assert list(frame.columns) == ["azimuth_deg", "value_db", "value_raw_db"]

    def test_sinr_loss_compare(self, config, tmp_path):
        """Test one loss column per mode."""
        run("sinr-loss", config, compare=True)

        frame = pd.read_csv(tmp_path / "out" / "sinr_loss.csv")
        assert list(frame.columns) == ["doppler_hz", "loss_fda_db", "loss_mimo_db", "loss_pa_db"]
        assert (frame.drop(columns="doppler_hz") <= 1e-6).all().all()

    def test_beampattern(self, config, tmp_path):
        """Test the beampattern table."""
        run("beampattern", config, ranges_m=[2000.0, 4000.0, 100.0])

        frame = pd.read_csv(tmp_path / "out" / "beampattern.csv")
        assert len(frame) == 21 * 19
        assert frame["value_db"].max() <= 1e-6

    def test_manifest_written(self, config, tmp_path):
        """Test that every run writes a manifest."""
        run("phase-code", config)

        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["subcommand"] == "phase-code"
        assert manifest["seed"] == config.seed

    @pytest.mark.parametrize("subcommand", ["chain-verify", "selftest"])
    def test_same_seed_identical_csv(self, config, tmp_path, subcommand):
        """Test that two runs with one seed write byte-identical tables."""
        tables = []
        for name in ("first", "second"):
            out = tmp_path / name
            result = run(subcommand, replace(config, seed=7, out_dir=str(out)))
            csvs = sorted(f for f in result.files if f.endswith(".csv"))
            assert csvs
            tables.append({f: (out / f).read_bytes() for f in csvs})

        assert tables[0] == tables[1]

    def test_phase_code_reports_dft_bins(self, config):
        """Test that the phase-code summary says whether centers sit on slow-time bins."""
        result = run("phase-code", config)

        assert isinstance(result.summary["on_dft_bins"], bool)

    def test_sinr_loss_coherent_reference(self, config, tmp_path):
        """Test the coherent reference through the parser and the run."""
        args = build_parser().parse_args(["sinr-loss", "--reference", "coherent"])
        result = run("sinr-loss", config, reference=args.reference)

        frame = pd.read_csv(tmp_path / "out" / "sinr_loss.csv")
        assert result.summary["reference"] == "coherent"
        assert (frame["loss_db"] <= 1e-6).all()

    def test_unknown_subcommand(self, config):
        """Test that an unknown subcommand is rejected."""
        with pytest.raises(ValidationError, match="subcommand"):
            run("detect", config)

    @patch("src.cli.SelfTest")
    def test_selftest_pass_flag(self, mock_selftest, config, tmp_path):
        """Test that selftest passes only when every row passes."""
        mock_selftest.return_value.run.return_value = pd.DataFrame({
            "metric": ["a", "b"], "value": [0.0, 2.0], "threshold": [1.0, 1.0], "passed": [True, False],
        })

        result = run_selftest(config, ResultWriter(str(tmp_path / "out")))

        assert result.passed is False
        assert result.summary == {"checks": 2, "failed": 1}


class TestMain:
    """Test cases for the CLI entry point."""

    def test_parser_options(self):
        """Test subcommand-specific flags."""
        args = build_parser().parse_args(["beampattern", "--time", "1e-6", "--ranges", "1000", "2000", "50"])

        assert args.time_s == pytest.approx(1e-6)
        assert args.ranges_m == [1000.0, 2000.0, 50.0]

    def test_success_exit_code(self, tmp_path, capsys):
        """Test exit code 0 on success."""
        path = write_config(tmp_path / "c.json", small_config(tmp_path / "out"))

        code = main(["phase-code", "--scene", path])

        assert code == 0
        assert "phase-code complete" in capsys.readouterr().out

    def test_invalid_input_exit_code(self, tmp_path, capsys):
        """Test exit code 2 on invalid input."""
        code = main(["spectrum", "--scene", str(tmp_path / "missing.json")])

        assert code == 2
        assert "Invalid input" in capsys.readouterr().out

    @patch("src.cli.run")
    def test_failed_checks_exit_code(self, mock_run, tmp_path):
        """Test exit code 1 when checks fail."""
        mock_run.return_value = RunResult(files=[], passed=False)

        assert main(["selftest", "--out", str(tmp_path)]) == 1

    @patch("src.cli.run")
    def test_runtime_error_exit_code(self, mock_run, tmp_path):
        """Test exit code 1 on an unexpected failure."""
        mock_run.side_effect = RuntimeError("boom")

        assert main(["pattern", "--out", str(tmp_path)]) == 1

    @patch("src.cli.validate_environment")
    def test_invalid_environment_exit_code(self, mock_validate, tmp_path, capsys):
        """Test exit code 2 when the output directory is unusable."""
        mock_validate.return_value = {"valid": False, "warnings": [], "errors": ["Output directory is not writable"]}

        code = main(["phase-code", "--out", str(tmp_path)])

        assert code == 2
        assert "not writable" in capsys.readouterr().out
