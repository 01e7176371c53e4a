"""Command-line interface for the FDA-STAP simulator."""

import argparse
import json
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

try:
    from .chain import GATES, Scatterer, chain_verify
    from .config import (
        DEFAULT_AZIMUTH_GRID_DEG,
        DEFAULT_DOPPLER_GRID_HZ,
        DEFAULT_SEED,
        DEFAULT_TARGET_EXTENT_M,
        MAX_SNAPSHOT_DIM,
        OUTPUT_DIR,
        SystemConfig,
        logger,
        validate_environment,
    )
    from .export import ResultWriter, grid_figure, line_figure, write_text
    from .geometry import Angles, check_decorrelation
    from .model import MODES, mode_dimension, transmit_beampattern
    from .phasecode import design_phase_codes, validate_phase_codes
    from .scene import CNR_MODES, ClutterRing, Jammer, Scene, Target, default_scene
    from .selftest import SelfTest
    from .stap import LOSS_REFERENCES, adapted_pattern, interference_spectrum, pattern_cut, sinr_loss_curve
    from .utils import DomainError, ValidationError, frange, spawn_generators, to_db
except ImportError:
    from src.chain import GATES, Scatterer, chain_verify
    from src.config import (
        DEFAULT_AZIMUTH_GRID_DEG,
        DEFAULT_DOPPLER_GRID_HZ,
        DEFAULT_SEED,
        DEFAULT_TARGET_EXTENT_M,
        MAX_SNAPSHOT_DIM,
        OUTPUT_DIR,
        SystemConfig,
        logger,
        validate_environment,
    )
    from src.export import ResultWriter, grid_figure, line_figure, write_text
    from src.geometry import Angles, check_decorrelation
    from src.model import MODES, mode_dimension, transmit_beampattern
    from src.phasecode import design_phase_codes, validate_phase_codes
    from src.scene import CNR_MODES, ClutterRing, Jammer, Scene, Target, default_scene
    from src.selftest import SelfTest
    from src.stap import LOSS_REFERENCES, adapted_pattern, interference_spectrum, pattern_cut, sinr_loss_curve
    from src.utils import DomainError, ValidationError, frange, spawn_generators, to_db

SUBCOMMANDS = ("phase-code", "chain-verify", "spectrum", "pattern", "cut", "sinr-loss", "beampattern", "selftest")
TOP_LEVEL_KEYS = {
    "system", "scene", "grid", "mode", "cnr_mode", "loading", "seed", "out_dir",
    "look_azimuth_deg", "target_extent_m", "f_td_max_hz",
}
SYSTEM_KEYS = {f.name for f in fields(SystemConfig)}


@dataclass
class RunConfig:
    """
    Fully resolved run configuration.

    Angles are radians inside system/scene objects and degrees on the grid
    and in the JSON file.
    """

    system: SystemConfig = field(default_factory=SystemConfig)
    scene: Scene = field(default_factory=default_scene)
    azimuth_grid_deg: Tuple[float, float, float] = DEFAULT_AZIMUTH_GRID_DEG
    doppler_grid_hz: Tuple[float, float, float] = DEFAULT_DOPPLER_GRID_HZ
    mode: str = "fda"
    loading: float = 0.0
    seed: int = DEFAULT_SEED
    out_dir: str = OUTPUT_DIR
    look_azimuth_deg: float = 90.0
    target_extent_m: float = DEFAULT_TARGET_EXTENT_M
    f_td_max_hz: Optional[float] = None

    @property
    def azimuths(self) -> np.ndarray:
        return frange(*self.azimuth_grid_deg)

    @property
    def dopplers(self) -> np.ndarray:
        return frange(*self.doppler_grid_hz)

    @property
    def doppler_limit_hz(self) -> float:
        """Largest |f_td| the phase code must accommodate."""
        if self.f_td_max_hz is not None:
            return self.f_td_max_hz
        return abs(self.scene.target.doppler_hz)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "system": self.system.to_dict(),
            "scene": _scene_to_dict(self.scene),
            "grid": {"azimuth_deg": list(self.azimuth_grid_deg), "doppler_hz": list(self.doppler_grid_hz)},
            "mode": self.mode,
            "cnr_mode": self.scene.cnr_mode,
            "loading": self.loading,
            "seed": self.seed,
            "out_dir": self.out_dir,
            "look_azimuth_deg": self.look_azimuth_deg,
            "target_extent_m": self.target_extent_m,
            "f_td_max_hz": self.f_td_max_hz,
        }


@dataclass
class RunResult:
    """Files written by a subcommand and, for checks, whether they passed."""

    files: List[str]
    passed: Optional[bool] = None
    summary: Dict[str, Any] = field(default_factory=dict)


def _deg(value: float) -> float:
    # Twelve decimals make degrees -> radians -> degrees exact for saved files.
    return round(float(np.rad2deg(value)), 12)


def _rad(value: float) -> float:
    return float(np.deg2rad(value))


def _scene_to_dict(scene: Scene) -> Dict[str, Any]:
    t = scene.target
    return {
        "name": scene.name,
        "target": {
            "range_m": t.range_m,
            "azimuth_deg": _deg(t.azimuth),
            "depression_deg": _deg(t.depression),
            "doppler_hz": t.doppler_hz,
            "snr_db": t.snr_db,
        },
        "clutter_rings": [
            {
                "range_m": ring.range_m,
                "azimuth_span_deg": [_deg(a) for a in ring.azimuth_span],
                "patches": ring.patches,
                "depression_deg": _deg(ring.depression),
                "cnr_db": ring.cnr_db,
            }
            for ring in scene.clutter_rings
        ],
        "jammers": [
            {
                "azimuth_deg": _deg(j.azimuth),
                "depression_deg": _deg(j.depression),
                "jnr_db": j.jnr_db,
                "range_m": j.range_m,
            }
            for j in scene.jammers
        ],
    }


def _number(path: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(path, f"must be a number, got {value!r}")
    return float(value)


def _section(path: str, value: Any, allowed: set) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ValidationError(path, "must be an object")
    unknown = sorted(set(value) - allowed)
    if unknown:
        raise ValidationError(f"{path}.{unknown[0]}", "unknown key")
    return value


def _angles(path: str, d: Dict[str, Any], azimuth: float, depression: float) -> Angles:
    azimuth_deg = _number(f"{path}.azimuth_deg", d.get("azimuth_deg", _deg(azimuth)))
    depression_deg = _number(f"{path}.depression_deg", d.get("depression_deg", _deg(depression)))
    try:
        return Angles.from_degrees(azimuth_deg, depression_deg)
    except DomainError as e:
        raise ValidationError(path, str(e)) from e


def _parse_target(data: Any) -> Target:
    d = _section("scene.target", data, {"range_m", "azimuth_deg", "depression_deg", "doppler_hz", "snr_db"})
    base = Target()
    angles = _angles("scene.target", d, base.azimuth, base.depression)
    return Target(
        range_m=_number("scene.target.range_m", d.get("range_m", base.range_m)),
        azimuth=angles.azimuth,
        depression=angles.depression,
        doppler_hz=_number("scene.target.doppler_hz", d.get("doppler_hz", base.doppler_hz)),
        snr_db=_number("scene.target.snr_db", d.get("snr_db", base.snr_db)),
    )


def _parse_ring(index: int, data: Any) -> ClutterRing:
    path = f"scene.clutter_rings[{index}]"
    d = _section(path, data, {"range_m", "azimuth_span_deg", "patches", "depression_deg", "cnr_db"})
    base = ClutterRing()
    span = d.get("azimuth_span_deg", [_deg(a) for a in base.azimuth_span])
    if not isinstance(span, list) or len(span) != 2:
        raise ValidationError(f"{path}.azimuth_span_deg", "must be [start, stop]")
    patches = d.get("patches", base.patches)
    if isinstance(patches, bool) or not isinstance(patches, int) or patches < 1:
        raise ValidationError(f"{path}.patches", f"must be a positive integer, got {patches!r}")
    return ClutterRing(
        range_m=_number(f"{path}.range_m", d.get("range_m", base.range_m)),
        azimuth_span=tuple(_rad(_number(f"{path}.azimuth_span_deg", a)) for a in span),
        patches=patches,
        depression=_rad(_number(f"{path}.depression_deg", d.get("depression_deg", _deg(base.depression)))),
        cnr_db=_number(f"{path}.cnr_db", d.get("cnr_db", base.cnr_db)),
    )


def _parse_jammer(index: int, data: Any) -> Jammer:
    path = f"scene.jammers[{index}]"
    d = _section(path, data, {"azimuth_deg", "depression_deg", "jnr_db", "range_m"})
    base = Jammer()
    range_m = d.get("range_m")
    angles = _angles(path, d, base.azimuth, base.depression)
    return Jammer(
        azimuth=angles.azimuth,
        depression=angles.depression,
        jnr_db=_number(f"{path}.jnr_db", d.get("jnr_db", base.jnr_db)),
        range_m=None if range_m is None else _number(f"{path}.range_m", range_m),
    )


def _parse_scene(data: Any, cnr_mode: str) -> Scene:
    base = default_scene(cnr_mode)
    if data is None:
        return base
    d = _section("scene", data, {"name", "target", "clutter_rings", "jammers"})
    rings = d.get("clutter_rings")
    jammers = d.get("jammers")
    for key, value in (("clutter_rings", rings), ("jammers", jammers)):
        if value is not None and not isinstance(value, list):
            raise ValidationError(f"scene.{key}", "must be a list")
    return Scene(
        target=_parse_target(d["target"]) if "target" in d else base.target,
        clutter_rings=base.clutter_rings if rings is None else [_parse_ring(i, r) for i, r in enumerate(rings)],
        jammers=base.jammers if jammers is None else [_parse_jammer(i, j) for i, j in enumerate(jammers)],
        cnr_mode=cnr_mode,
        name=str(d.get("name", "scene")),
    )


def _parse_grid_axis(path: str, value: Any) -> Tuple[float, float, float]:
    if not isinstance(value, list) or len(value) != 3:
        raise ValidationError(path, "must be [start, stop, step]")
    axis = tuple(_number(path, v) for v in value)
    try:
        frange(*axis)
    except DomainError as e:
        raise ValidationError(path, str(e)) from e
    return axis


def validate_run_config(config: RunConfig) -> RunConfig:
    """
    Check a resolved configuration.

    Raises:
        ValidationError: If the snapshot exceeds the memory budget or a field is invalid
    """
    if config.mode not in MODES:
        raise ValidationError("mode", f"must be one of {MODES}, got '{config.mode}'")
    if config.loading < 0:
        raise ValidationError("loading", f"must be non-negative, got {config.loading}")
    dim = mode_dimension(config.system, config.mode)
    if dim > MAX_SNAPSHOT_DIM:
        raise ValidationError("system.pulses", f"snapshot dimension {dim} exceeds budget {MAX_SNAPSHOT_DIM}")

    validate_phase_codes(design_phase_codes(config.system), config.doppler_limit_hz, config.system)
    if config.system.n_tx > 1:
        check_decorrelation(config.system.freq_offset_hz, config.system.n_tx, config.target_extent_m)
    return config


def load_config(path: Optional[str] = None) -> RunConfig:
    """
    Load a JSON run configuration, filling gaps with the built-in defaults.

    Args:
        path: JSON file; None or an empty file gives pure defaults

    Returns:
        Validated RunConfig

    Raises:
        ValidationError: On malformed JSON or a bad field
    """
    data: Dict[str, Any] = {}
    if path is not None:
        file = Path(path)
        if not file.is_file():
            raise ValidationError("scene", f"config file not found: {path}")
        text = file.read_text(encoding="utf-8")
        if text.strip():
            try:
                data = json.loads(text)
            except json.JSONDecodeError as e:
                raise ValidationError("file", f"line {e.lineno} column {e.colno}: {e.msg}") from e
    data = _section("config", data, TOP_LEVEL_KEYS)

    system_data = _section("system", data.get("system", {}), SYSTEM_KEYS)
    for key, value in system_data.items():
        if key in ("n_tx", "n_rx", "pulses"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"system.{key}", f"must be an integer, got {value!r}")
        elif value is not None:
            _number(f"system.{key}", value)
    try:
        system = SystemConfig(**system_data)
    except DomainError as e:
        raise ValidationError("system", str(e)) from e

    cnr_mode = data.get("cnr_mode", "per-patch")
    if cnr_mode not in CNR_MODES:
        raise ValidationError("cnr_mode", f"must be one of {CNR_MODES}, got '{cnr_mode}'")

    grid = _section("grid", data.get("grid", {}), {"azimuth_deg", "doppler_hz"})
    seed = data.get("seed", DEFAULT_SEED)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ValidationError("seed", f"must be a non-negative integer, got {seed!r}")
    f_td_max = data.get("f_td_max_hz")

    config = RunConfig(
        system=system,
        scene=_parse_scene(data.get("scene"), cnr_mode),
        azimuth_grid_deg=_parse_grid_axis("grid.azimuth_deg", grid.get("azimuth_deg", list(DEFAULT_AZIMUTH_GRID_DEG))),
        doppler_grid_hz=_parse_grid_axis("grid.doppler_hz", grid.get("doppler_hz", list(DEFAULT_DOPPLER_GRID_HZ))),
        mode=str(data.get("mode", "fda")),
        loading=_number("loading", data.get("loading", 0.0)),
        seed=seed,
        out_dir=str(data.get("out_dir", OUTPUT_DIR)),
        look_azimuth_deg=_number("look_azimuth_deg", data.get("look_azimuth_deg", 90.0)),
        target_extent_m=_number("target_extent_m", data.get("target_extent_m", DEFAULT_TARGET_EXTENT_M)),
        f_td_max_hz=None if f_td_max is None else _number("f_td_max_hz", f_td_max),
    )
    validate_run_config(config)
    logger.info(f"Resolved config: {json.dumps(config.to_dict(), sort_keys=True)}")
    return config


def save_config(config: RunConfig, path: str) -> Path:
    """Write a RunConfig as JSON that load_config reads back."""
    target = Path(path)
    write_text(target, json.dumps(config.to_dict(), indent=2, sort_keys=True))
    logger.info(f"Saved config to {target}")
    return target


def apply_overrides(config: RunConfig, **overrides: Any) -> RunConfig:
    """Apply CLI flag overrides (None means unset) and re-validate."""
    changes: Dict[str, Any] = {}
    if overrides.get("pulses") is not None:
        try:
            changes["system"] = config.system.with_overrides(pulses=overrides["pulses"])
        except DomainError as e:
            raise ValidationError("pulses", str(e)) from e
    if overrides.get("cnr_mode") is not None:
        if overrides["cnr_mode"] not in CNR_MODES:
            raise ValidationError("cnr_mode", f"must be one of {CNR_MODES}")
        changes["scene"] = replace(config.scene, cnr_mode=overrides["cnr_mode"])
    for key in ("mode", "loading", "seed", "out_dir"):
        if overrides.get(key) is not None:
            changes[key] = overrides[key]
    return validate_run_config(replace(config, **changes)) if changes else config


def run_phase_code(config: RunConfig, writer: ResultWriter) -> RunResult:
    """
    Design the phase code and report its Doppler gaps.

    Raises:
        RuntimeError: If the design step fails unexpectedly
    """
    logger.info("Starting phase-code run...")
    try:
        cfg = config.system
        code = design_phase_codes(cfg)
        report = validate_phase_codes(code, config.doppler_limit_hz, cfg)
        frame = pd.DataFrame({
            "element": np.arange(1, cfg.n_tx + 1),
            "phi_hz": code.phi,
            "band_center_hz": code.band_centers,
        })
        writer.write_csv(frame, "phase_code.csv")
        summary = {
            "feasible": report.feasible,
            "min_gap_hz": report.min_gap,
            "required_gap_hz": report.required_gap,
            "min_adjacent_gap_hz": report.min_adjacent_gap,
            "min_wraparound_gap_hz": report.min_wraparound_gap,
            "worst_f_td_hz": report.worst_f_td,
            "on_dft_bins": code.on_bin(cfg.pulses, cfg.prf_hz),
            "violated_constraint": report.violated_constraint,
            "message": report.message,
        }
        writer.write_json(summary, "phase_code_report.json")
        return RunResult(list(writer.files), passed=None, summary=summary)
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Phase-code run failed: {e}")
        raise RuntimeError(f"Phase-code run failed: {e}") from e


def run_chain_verify(config: RunConfig, writer: ResultWriter, gate: str = "interpolate") -> RunResult:
    """Compare the time-domain chain with the analytic snapshot."""
    logger.info("Starting chain-verify run...")
    try:
        t = config.scene.target
        report = chain_verify(config.system, Scatterer(t.range_m, t.azimuth, t.depression, t.doppler_hz), gate=gate)
        frame = pd.DataFrame([
            {"metric": "filtered_error", "value": report.filtered_error, "threshold": 0.05},
            {"metric": "raw_error", "value": report.raw_error, "threshold": 0.10},
        ])
        frame["passed"] = frame["value"] <= frame["threshold"]
        writer.write_csv(frame, "chain_verify.csv")
        return RunResult(
            list(writer.files),
            passed=report.passed,
            summary={"raw_error": report.raw_error, "filtered_error": report.filtered_error, "gate": gate},
        )
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Chain-verify run failed: {e}")
        raise RuntimeError(f"Chain-verify run failed: {e}") from e


def _grid_run(config: RunConfig, writer: ResultWriter, kind: str, plot: bool) -> RunResult:
    compute = interference_spectrum if kind == "spectrum" else adapted_pattern
    grid = compute(config.scene, config.system, config.azimuths, config.dopplers, mode=config.mode, loading=config.loading)
    frame = grid.to_frame()
    writer.write_csv(frame, f"{kind}.csv")
    if plot:
        writer.write_figure(grid_figure(frame, f"{kind.title()} ({config.mode.upper()})"), f"{kind}.html")
    peak_az, peak_dop = grid.argmax()
    return RunResult(list(writer.files), summary={"peak_azimuth_deg": peak_az, "peak_doppler_hz": peak_dop})


def run_spectrum(config: RunConfig, writer: ResultWriter, plot: bool = False) -> RunResult:
    """Interference spectrum over the configured grid."""
    logger.info("Starting spectrum run...")
    try:
        return _grid_run(config, writer, "spectrum", plot)
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Spectrum run failed: {e}")
        raise RuntimeError(f"Spectrum run failed: {e}") from e


def run_pattern(config: RunConfig, writer: ResultWriter, plot: bool = False) -> RunResult:
    """Adapted pattern over the configured grid."""
    logger.info("Starting pattern run...")
    try:
        return _grid_run(config, writer, "pattern", plot)
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Pattern run failed: {e}")
        raise RuntimeError(f"Pattern run failed: {e}") from e


def run_cut(
    config: RunConfig,
    writer: ResultWriter,
    axis: str = "doppler",
    at: Optional[float] = None,
    source: str = "pattern",
    plot: bool = False,
) -> RunResult:
    """One-dimensional cut through a pattern or spectrum."""
    logger.info("Starting cut run...")
    try:
        t = config.scene.target
        if at is None:
            at = t.doppler_hz if axis == "doppler" else _deg(t.azimuth)
        compute = interference_spectrum if source == "spectrum" else adapted_pattern
        grid = compute(config.scene, config.system, config.azimuths, config.dopplers, mode=config.mode, loading=config.loading)
        frame = pattern_cut(grid, axis, at)
        writer.write_csv(frame, "cut.csv")
        if plot:
            x = frame.columns[0]
            writer.write_figure(line_figure(frame, x, {source: "value_db"}, f"{source.title()} cut at {axis} = {at:g}"), "cut.html")
        return RunResult(list(writer.files), summary={"axis": axis, "at": at, "source": source})
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Cut run failed: {e}")
        raise RuntimeError(f"Cut run failed: {e}") from e


def run_sinr_loss(
    config: RunConfig,
    writer: ResultWriter,
    reference: str = "amplitude",
    compare: bool = False,
    plot: bool = False,
) -> RunResult:
    """SINR loss versus Doppler at the look azimuth, optionally for every mode."""
    logger.info("Starting sinr-loss run...")
    try:
        modes = MODES if compare else (config.mode,)
        frame = pd.DataFrame({"doppler_hz": config.dopplers})
        for mode in modes:
            curve = sinr_loss_curve(
                config.scene, config.system, config.dopplers,
                azimuth_deg=config.look_azimuth_deg, mode=mode, reference=reference, loading=config.loading,
            )
            column = "loss_db" if not compare else f"loss_{mode}_db"
            frame[column] = curve["loss_db"].to_numpy()
        writer.write_csv(frame, "sinr_loss.csv")
        if plot:
            columns = {c: c for c in frame.columns if c != "doppler_hz"}
            writer.write_figure(line_figure(frame, "doppler_hz", columns, "SINR loss"), "sinr_loss.html")
        return RunResult(list(writer.files), summary={"reference": reference, "modes": list(modes)})
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"SINR-loss run failed: {e}")
        raise RuntimeError(f"SINR-loss run failed: {e}") from e


def run_beampattern(
    config: RunConfig,
    writer: ResultWriter,
    ranges_m: Sequence[float] = (1000.0, 5000.0, 10.0),
    time_s: float = 0.0,
    plot: bool = False,
) -> RunResult:
    """Range-azimuth transmit beampattern focused on the target."""
    logger.info("Starting beampattern run...")
    try:
        t = config.scene.target
        ranges = frange(*ranges_m)
        azimuths = config.azimuths
        power = transmit_beampattern(
            config.system, ranges, np.deg2rad(azimuths), t.depression,
            time_s=time_s, focus=(t.range_m, t.azimuth),
        )
        rr, az = np.meshgrid(ranges, azimuths, indexing="ij")
        frame = pd.DataFrame({"range_m": rr.ravel(), "azimuth_deg": az.ravel(), "value_db": to_db(power).ravel()})
        writer.write_csv(frame, "beampattern.csv")
        if plot:
            fig = grid_figure(frame, "Transmit beampattern", y="range_m", y_title="Range (m)")
            writer.write_figure(fig, "beampattern.html")
        return RunResult(list(writer.files), summary={"time_s": time_s})
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Beampattern run failed: {e}")
        raise RuntimeError(f"Beampattern run failed: {e}") from e


def run_selftest(config: RunConfig, writer: ResultWriter) -> RunResult:
    """Run the desk-scale acceptance checks."""
    logger.info("Starting selftest run...")
    try:
        rng = spawn_generators(config.seed)["selftest"]
        frame = SelfTest(config.system, config.scene, rng).run()
        writer.write_csv(frame, "selftest.csv")
        passed = bool(frame["passed"].all())
        return RunResult(list(writer.files), passed=passed, summary={"checks": len(frame), "failed": int((~frame["passed"]).sum())})
    except (DomainError, ValidationError):
        raise
    except Exception as e:
        logger.error(f"Selftest run failed: {e}")
        raise RuntimeError(f"Selftest run failed: {e}") from e


def run(subcommand: str, config: RunConfig, **options: Any) -> RunResult:
    """
    Execute one subcommand and write its manifest.

    Args:
        subcommand: One of SUBCOMMANDS
        config: Validated run configuration
        **options: Subcommand-specific options (plot, axis, at, source, reference,
            compare, gate, ranges_m, time_s)

    Returns:
        RunResult with every file written, manifest included
    """
    if subcommand not in SUBCOMMANDS:
        raise ValidationError("subcommand", f"must be one of {SUBCOMMANDS}, got '{subcommand}'")
    writer = ResultWriter(config.out_dir, subcommand=subcommand, seed=config.seed)
    plot = bool(options.get("plot", False))

    if subcommand == "phase-code":
        result = run_phase_code(config, writer)
    elif subcommand == "chain-verify":
        result = run_chain_verify(config, writer, gate=options.get("gate") or "interpolate")
    elif subcommand == "spectrum":
        result = run_spectrum(config, writer, plot=plot)
    elif subcommand == "pattern":
        result = run_pattern(config, writer, plot=plot)
    elif subcommand == "cut":
        result = run_cut(
            config, writer,
            axis=options.get("axis") or "doppler", at=options.get("at"),
            source=options.get("source") or "pattern", plot=plot,
        )
    elif subcommand == "sinr-loss":
        result = run_sinr_loss(
            config, writer, reference=options.get("reference") or "amplitude",
            compare=bool(options.get("compare", False)), plot=plot,
        )
    elif subcommand == "beampattern":
        result = run_beampattern(
            config, writer, ranges_m=options.get("ranges_m") or (1000.0, 5000.0, 10.0),
            time_s=options.get("time_s") or 0.0, plot=plot,
        )
    else:
        result = run_selftest(config, writer)

    manifest_config = {"config": config.to_dict(), "options": {k: v for k, v in options.items() if v is not None}}
    writer.write_manifest(manifest_config)
    result.files = list(writer.files) + ["manifest.json"]
    return result


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene", type=str, help="JSON run configuration")
    common.add_argument("--out", type=str, help="Output directory")
    common.add_argument("--seed", type=int, help="Root random seed")
    common.add_argument("--pulses", type=int, help="Override the number of pulses L")
    common.add_argument("--mode", type=str, choices=MODES, help="Steering model")
    common.add_argument("--cnr-mode", type=str, choices=CNR_MODES, help="Clutter CNR convention")
    common.add_argument("--loading", type=float, help="Diagonal loading added to the covariance")
    common.add_argument("--plot", action="store_true", help="Also write an interactive HTML figure")

    parser = argparse.ArgumentParser(description="FDA radar STAP simulator")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("phase-code", parents=[common], help="Design and validate the phase code")
    chain = sub.add_parser("chain-verify", parents=[common], help="Time-domain chain vs analytic snapshot")
    chain.add_argument("--gate", type=str, choices=GATES, help="Range gate method")
    sub.add_parser("spectrum", parents=[common], help="Interference spectrum")
    sub.add_parser("pattern", parents=[common], help="Adapted pattern")
    cut = sub.add_parser("cut", parents=[common], help="Cut through a pattern or spectrum")
    cut.add_argument("--axis", type=str, choices=["doppler", "azimuth"], help="Fixed axis of the cut")
    cut.add_argument("--at", type=float, help="Position of the cut (Hz or degrees)")
    cut.add_argument("--source", type=str, choices=["pattern", "spectrum"], help="Grid to cut")
    loss = sub.add_parser("sinr-loss", parents=[common], help="SINR loss versus Doppler")
    loss.add_argument("--reference", type=str, choices=LOSS_REFERENCES, help="Loss normalization")
    loss.add_argument("--compare", action="store_true", help="Compute FDA, MIMO and PA together")
    beam = sub.add_parser("beampattern", parents=[common], help="Range-angle transmit beampattern")
    beam.add_argument("--time", dest="time_s", type=float, help="Observation time in seconds")
    beam.add_argument("--ranges", dest="ranges_m", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    sub.add_parser("selftest", parents=[common], help="Run the acceptance checks")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for command-line execution."""
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.scene)
        config = apply_overrides(
            config, pulses=args.pulses, mode=args.mode, cnr_mode=args.cnr_mode,
            loading=args.loading, seed=args.seed, out_dir=args.out,
        )
        env_validation = validate_environment(config.out_dir)
        if not env_validation["valid"]:
            for error in env_validation["errors"]:
                logger.error(f"Environment validation error: {error}")
            raise ValidationError("environment", "; ".join(env_validation["errors"]))
        for warning in env_validation.get("warnings", []):
            logger.warning(warning)
        options = {
            key: getattr(args, key, None)
            for key in ("plot", "gate", "axis", "at", "source", "reference", "compare", "time_s", "ranges_m")
        }
        result = run(args.subcommand, config, **options)
    except (ValidationError, DomainError) as e:
        print(f"\n❌ Invalid input: {e}")
        return 2
    except Exception as e:
        print(f"\n❌ Error: {e}")
        return 1

    for key, value in result.summary.items():
        print(f"{key}: {value}")
    print(f"Wrote {len(result.files)} file(s) to {config.out_dir}")
    if result.passed is False:
        print(f"\n❌ {args.subcommand} checks failed")
        return 1
    print(f"\n✅ {args.subcommand} complete")
    return 0


if __name__ == "__main__":
    sys.exit(main())
