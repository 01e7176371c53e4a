"""Desk-scale acceptance checks, reported as metric / value / threshold / passed rows."""

from typing import Callable, List, Optional

import numpy as np
import pandas as pd

try:
    from .chain import Scatterer, chain_verify, cross_channel_leakage, lowpass_matrix
    from .config import SPEED_OF_LIGHT, SystemConfig, logger
    from .geometry import conic_angle, delays
    from .model import composite_steering
    from .phasecode import circular_gaps, design_phase_codes
    from .scene import (
        ClutterRing,
        Jammer,
        Scene,
        Target,
        covariance_jamming,
        covariance_total,
        sample_jamming_snapshot,
        scene_patches,
    )
    from .stap import (
        adapted_pattern,
        mvdr_weights,
        output_sinr_linear,
        sinr_loss_curve,
        sinr_quadratic_forms,
        target_steering,
    )
    from .utils import frange, to_db
    from .waveform import ambiguity, waveform_for
except ImportError:
    from src.chain import Scatterer, chain_verify, cross_channel_leakage, lowpass_matrix
    from src.config import SPEED_OF_LIGHT, SystemConfig, logger
    from src.geometry import conic_angle, delays
    from src.model import composite_steering
    from src.phasecode import circular_gaps, design_phase_codes
    from src.scene import (
        ClutterRing,
        Jammer,
        Scene,
        Target,
        covariance_jamming,
        covariance_total,
        sample_jamming_snapshot,
        scene_patches,
    )
    from src.stap import (
        adapted_pattern,
        mvdr_weights,
        output_sinr_linear,
        sinr_loss_curve,
        sinr_quadratic_forms,
        target_steering,
    )
    from src.utils import frange, to_db
    from src.waveform import ambiguity, waveform_for

# Reduced pulse count for covariance-based checks.
DESK_PULSES = 32
JAMMER_DRAWS = 10_000
RANDOM_WEIGHTS = 100


class SelfTest:
    """Runs the acceptance metrics against a base system and scene."""

    def __init__(self, system: SystemConfig, scene: Scene, rng: np.random.Generator):
        self.system = system
        self.scene = scene
        self.rng = rng
        self.rows: List[dict] = []

    def _record(self, metric: str, value: float, threshold: float, passed: Optional[bool] = None) -> None:
        if passed is None:
            passed = bool(value <= threshold)
        self.rows.append({"metric": metric, "value": float(value), "threshold": float(threshold), "passed": passed})
        level = logger.info if passed else logger.warning
        level(f"{metric}: {value:.6g} (threshold {threshold:g}) {'PASS' if passed else 'FAIL'}")

    def _target_scatterer(self, doppler_hz: Optional[float] = None) -> Scatterer:
        t = self.scene.target
        return Scatterer(t.range_m, t.azimuth, t.depression, t.doppler_hz if doppler_hz is None else doppler_hz)

    def check_chain(self) -> None:
        cfg = SystemConfig(n_tx=3, n_rx=2, pulses=16, sample_rate_hz=40e6)
        report = chain_verify(cfg, self._target_scatterer())
        self._record("chain_filtered_error", report.filtered_error, 0.05)
        self._record("chain_raw_error", report.raw_error, 0.10)

    def check_phase_code(self) -> None:
        code = design_phase_codes(self.system)
        gaps = circular_gaps(code.band_centers, self.system.prf_hz)
        self._record("phase_code_gap_error_hz", np.max(np.abs(gaps - self.system.prf_hz / self.system.n_tx)), 1e-9)

    def check_leakage(self) -> None:
        cfg = self.system.with_overrides(n_rx=1, pulses=36 * self.system.n_tx, sample_rate_hz=None)
        leakage = cross_channel_leakage(cfg, self._target_scatterer(doppler_hz=0.0))
        self._record("cross_channel_leakage_db", leakage["worst_db"], -40.0)

    def check_patterns(self) -> None:
        """
        Adapted-pattern and MVDR checks at the desk pulse count.

        The mode contrast compares the pattern's raw target-cell value, the
        output SINR on the target relative to its noise-only optimum, between
        FDA and the better of MIMO and PA. A target on the clutter ridge keeps
        that SINR only with range-dependent transmit steering.
        """
        cfg = self.system.with_overrides(pulses=DESK_PULSES)
        target = self.scene.target
        azimuths = frange(0.0, 180.0, 1.0)
        dopplers = frange(-800.0, 800.0, 10.0)
        target_az = float(np.rad2deg(target.azimuth))

        cov = covariance_total(self.scene, None, cfg)
        v = mvdr_weights(cov, target_steering(target, cfg))
        fda = adapted_pattern(self.scene, cfg, azimuths, dopplers, cov=cov)

        target_cell = fda.cell(target_az, target.doppler_hz)
        peak_cell = np.unravel_index(int(np.argmax(fda.values)), fda.values.shape)
        offset = max(abs(int(p) - t) for p, t in zip(peak_cell, target_cell))
        self._record("pattern_argmax_offset_cells", offset, 0.0)

        patches = scene_patches(self.scene, cfg)
        if patches:
            picks = np.linspace(0, len(patches) - 1, min(20, len(patches))).round().astype(int)
            ridge = [
                np.abs(np.vdot(v, composite_steering(patches[i].range_m, patches[i].psi, patches[i].doppler_hz, cfg))) ** 2
                for i in picks
            ]
            self._record("clutter_ridge_response_db", to_db(np.mean(ridge)), -40.0)

        for jammer in self.scene.jammers:
            j = fda.cell(float(np.rad2deg(jammer.azimuth)), 0.0)[1]
            self._record("jammer_line_response_db", np.max(fda.normalized_db[:, j]), -40.0)

        fda_cell = fda.raw_db[target_cell]
        others = [
            adapted_pattern(self.scene, cfg, [target_az], [target.doppler_hz], mode=mode).raw_db[0, 0]
            for mode in ("mimo", "pa")
        ]
        contrast = fda_cell - max(others)
        self._record("mode_contrast_target_sinr_db", contrast, 10.0, passed=bool(contrast >= 10.0))

        losses = {
            mode: float(sinr_loss_curve(self.scene, cfg, [0.0], azimuth_deg=90.0, mode=mode)["loss_db"].iloc[0])
            for mode in ("fda", "mimo", "pa")
        }
        contrast = losses["fda"] - max(losses["mimo"], losses["pa"])
        self._record("mode_contrast_sinr_loss_db", contrast, 10.0, passed=bool(contrast >= 10.0))

        q_t = target_steering(target, cfg)
        self._record("mvdr_distortionless_error", abs(np.vdot(v, q_t) - 1.0), 1e-10)
        best = output_sinr_linear(v, None, self.scene, cfg, cov=cov)
        trials = []
        for _ in range(RANDOM_WEIGHTS):
            u = self.rng.standard_normal(cov.dim) + 1j * self.rng.standard_normal(cov.dim)
            trials.append(output_sinr_linear(u / np.linalg.norm(u), None, self.scene, cfg, cov=cov))
        self._record("mvdr_random_sinr_ratio", max(trials) / best, 1.0)

    def check_clutter_span(self) -> None:
        dopplers = [p.doppler_hz for p in scene_patches(self.scene, self.system)]
        if not dopplers:
            return
        # 2 v_a / λ at the nominal 0.25 m wavelength, 45° depression
        bound = 800.0 * np.cos(np.pi / 4.0)
        spread = max(abs(max(dopplers) - bound), abs(min(dopplers) + bound))
        self._record("clutter_doppler_span_error_hz", spread, 1.0)

    def check_quadratic_form(self) -> None:
        cfg = SystemConfig(n_tx=3, n_rx=2, pulses=8)
        rng = self.rng
        scene = Scene(
            target=Target(2000.0 + 2000.0 * rng.random(), np.pi * rng.random(), 0.5 * np.pi * rng.random(),
                          1000.0 * rng.random() - 500.0, 0.0),
            clutter_rings=[ClutterRing(range_m=3000.0, patches=7, cnr_db=10.0)],
            jammers=[Jammer(azimuth=np.pi * rng.random(), jnr_db=10.0)],
        )
        worst = 0.0
        for _ in range(20):
            v = rng.standard_normal(cfg.snapshot_dim) + 1j * rng.standard_normal(cfg.snapshot_dim)
            w = rng.standard_normal(cfg.n_tx) + 1j * rng.standard_normal(cfg.n_tx)
            direct = output_sinr_linear(v, w, scene, cfg)
            forms = sinr_quadratic_forms(v, scene, cfg).sinr(w)
            worst = max(worst, abs(direct - forms) / abs(direct))
        self._record("quadratic_form_relative_error", worst, 1e-9)

    def check_jammer_covariance(self) -> None:
        cfg = SystemConfig(n_tx=2, n_rx=3, pulses=2)
        jammer = Jammer()
        draws = np.stack([sample_jamming_snapshot(jammer, cfg, self.rng) for _ in range(JAMMER_DRAWS)], axis=1)
        estimate = draws @ draws.conj().T / JAMMER_DRAWS
        exact = covariance_jamming([jammer], cfg)
        self._record("jammer_covariance_error", np.linalg.norm(estimate - exact) / np.linalg.norm(exact), 0.05)

    def check_invariants(self) -> None:
        pulse = waveform_for(self.system)
        self._record("ambiguity_peak_error", abs(ambiguity(pulse, 0.0, 0.0) - 1.0), 1e-9)
        peak = max(
            abs(ambiguity(pulse, tau, f))
            for tau in np.linspace(-0.5, 0.5, 5) * self.system.pulse_width_s
            for f in np.linspace(-2.0, 2.0, 5) * self.system.freq_offset_hz
        )
        self._record("ambiguity_max_magnitude", peak, 1.0 + 1e-9)

        proj = lowpass_matrix(16, self.system.prf_hz / 6.0, self.system.prf_hz)
        error = max(np.max(np.abs(proj @ proj - proj)), np.max(np.abs(proj - proj.conj().T)))
        self._record("lowpass_projector_error", error, 1e-12)

        theta = np.pi * self.rng.random(16)
        phi = 0.5 * np.pi * self.rng.random(16)
        psi = conic_angle(theta, phi)
        self._record("conic_identity_error", np.max(np.abs(np.cos(psi) - np.cos(theta) * np.cos(phi))), 1e-12)

        target = self.scene.target
        d = delays(target.range_m, float(psi[0]), self.system, velocity_mps=target.velocity_mps(self.system))
        self._record("delay_identity_error", abs(d.round_trip - 2.0 * target.range_m / SPEED_OF_LIGHT), 1e-12)
        self._record("doppler_rate_error_hz", abs(d.doppler_rate * self.system.carrier_hz - target.doppler_hz), 1e-9)

    def run(self) -> pd.DataFrame:
        checks: List[Callable[[], None]] = [
            self.check_chain,
            self.check_phase_code,
            self.check_leakage,
            self.check_patterns,
            self.check_clutter_span,
            self.check_quadratic_form,
            self.check_jammer_covariance,
            self.check_invariants,
        ]
        for check in checks:
            check()
        frame = pd.DataFrame(self.rows, columns=["metric", "value", "threshold", "passed"])
        logger.info(f"Self-test: {int(frame['passed'].sum())}/{len(frame)} checks passed")
        return frame
