"""
Brute-force time-domain transmit/receive chain.

Every carrier is handled in complex baseband relative to f_c, so the
frequency offsets appear as e^{j2π(m-1)Δf t} factors and nothing is sampled
at RF. Per receive element the chain runs

    echo -> mix by carrier m' -> matched filter per pulse -> range gate
         -> demodulate by φ_{m'} -> slow-time low-pass

and the gated samples are stacked into the canonical snapshot ordering
(pulse, receive element, transmit channel).
"""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

try:
    from .config import SPEED_OF_LIGHT, SystemConfig, logger
    from .geometry import conic_angle, delays, doppler_from_velocity
    from .model import composite_steering
    from .phasecode import PhaseCode, design_phase_codes
    from .utils import DomainError, aligned_relative_error, to_db
    from .waveform import BasebandWaveform, matched_filter, waveform_for
except ImportError:
    from src.config import SPEED_OF_LIGHT, SystemConfig, logger
    from src.geometry import conic_angle, delays, doppler_from_velocity
    from src.model import composite_steering
    from src.phasecode import PhaseCode, design_phase_codes
    from src.utils import DomainError, aligned_relative_error, to_db
    from src.waveform import BasebandWaveform, matched_filter, waveform_for

GATES = ("interpolate", "nearest")


@dataclass(frozen=True)
class PulseTrain:
    """
    Phase-coded transmit pulse train, one stream per element.

    Attributes:
        pulse: Baseband pulse u(τ) occupying [0, T_p) of each PRI
        weights: Transmit weights w_m
        slow_phase: e^{j2πφ_m t_l}, shape (N_T, L)
        carriers_hz: f_c + (m-1)Δf, kept for bookkeeping only
        prf_hz: Pulse repetition frequency
        fast_samples: Samples per PRI
    """

    pulse: BasebandWaveform
    weights: np.ndarray
    slow_phase: np.ndarray
    carriers_hz: np.ndarray
    prf_hz: float
    fast_samples: int

    def __post_init__(self):
        if self.pulse.support >= 1.0 / self.prf_hz:
            raise DomainError("pulse does not fit inside one PRI")
        if len(self.pulse.samples) > self.fast_samples:
            raise DomainError("fast-time window is shorter than the pulse")

    @property
    def n_tx(self) -> int:
        return len(self.weights)

    @property
    def pulses(self) -> int:
        return self.slow_phase.shape[1]

    def element_samples(self, m: int) -> np.ndarray:
        """Baseband samples of element m (0-based) as an (L, K) array."""
        envelope = np.zeros(self.fast_samples, dtype=complex)
        envelope[:len(self.pulse.samples)] = self.pulse.samples
        return self.weights[m] * self.slow_phase[m][:, None] * envelope[None, :]


@dataclass(frozen=True)
class Scatterer:
    """Point scatterer; angles in radians, amplitude is the complex δ."""

    range_m: float
    azimuth: float
    depression: float
    doppler_hz: float = 0.0
    amplitude: complex = 1.0

    @property
    def conic(self) -> float:
        return conic_angle(self.azimuth, self.depression)

    @classmethod
    def from_velocity(
        cls,
        range_m: float,
        azimuth: float,
        depression: float,
        velocity_mps: float,
        cfg: SystemConfig,
        amplitude: complex = 1.0,
    ) -> "Scatterer":
        if abs(velocity_mps) >= SPEED_OF_LIGHT:
            raise DomainError(f"velocity {velocity_mps} m/s is not below c")
        doppler = doppler_from_velocity(velocity_mps, cfg.wavelength_m)
        return cls(range_m, azimuth, depression, float(doppler), amplitude)


@dataclass
class Snapshot:
    """Space-time snapshot, index = (l * N_R + n) * N_T + m."""

    data: np.ndarray
    n_tx: int
    n_rx: int
    pulses: int

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex).ravel()
        expected = self.n_tx * self.n_rx * self.pulses
        if self.data.size != expected:
            raise DomainError(f"snapshot has {self.data.size} entries, expected {expected}")
        if not np.all(np.isfinite(self.data)):
            raise DomainError("snapshot has non-finite entries")

    @property
    def cube(self) -> np.ndarray:
        """View as (L, N_R, N_T)."""
        return self.data.reshape(self.pulses, self.n_rx, self.n_tx)

    def channel_energy(self) -> np.ndarray:
        """Energy per receive channel m'."""
        return np.sum(np.abs(self.cube) ** 2, axis=(0, 1))


@dataclass
class ChainReport:
    """Chain-vs-model comparison."""

    raw_error: float
    filtered_error: float
    snapshot: Snapshot
    model: np.ndarray
    gate: str

    @property
    def passed(self) -> bool:
        return self.filtered_error <= 0.05 and self.raw_error <= 0.10


def fast_time_samples(cfg: SystemConfig) -> int:
    """Samples in one PRI at the fast-time rate."""
    return int(round(cfg.pri_s * cfg.fs_hz))


def synthesize_transmit(
    cfg: SystemConfig,
    code: PhaseCode,
    w: Optional[Sequence[complex]] = None,
    pulse: Optional[BasebandWaveform] = None,
) -> PulseTrain:
    """
    Build the phase-coded pulse train.

    Element m, pulse l carries w_m u(τ) e^{j2πφ_m t_l}; the carrier
    f_c + (m-1)Δf is applied analytically downstream.
    """
    phi = np.asarray(code.phi, dtype=float)
    if len(phi) != cfg.n_tx:
        raise DomainError(f"phase code has {len(phi)} entries, expected {cfg.n_tx}")
    weights = np.ones(cfg.n_tx, dtype=complex) if w is None else np.asarray(w, dtype=complex).ravel()
    if len(weights) != cfg.n_tx:
        raise DomainError(f"transmit weights have length {len(weights)}, expected {cfg.n_tx}")

    pulse = pulse or waveform_for(cfg)
    slow_phase = np.exp(2j * np.pi * np.outer(phi, cfg.slow_times_s))
    return PulseTrain(
        pulse=pulse,
        weights=weights,
        slow_phase=slow_phase,
        carriers_hz=cfg.carriers_hz,
        prf_hz=cfg.prf_hz,
        fast_samples=fast_time_samples(cfg),
    )


def simulate_point_echo(tx: PulseTrain, scatterer: Scatterer, cfg: SystemConfig) -> np.ndarray:
    """
    Received baseband streams of a single point scatterer.

    The envelope is delayed by ξ(r) only; carrier m is rotated by ξ(r),
    (m-1)ξ_T and (n-1)ξ_R; the slow-time Doppler of carrier m is
    f_td (f_m / f_c). Contributions of all carriers are summed.

    Args:
        tx: Transmit pulse train
        scatterer: Point scatterer
        cfg: System configuration

    Returns:
        Complex array (N_R, L, K)

    Raises:
        DomainError: If the echo does not end inside the PRI
    """
    d = delays(scatterer.range_m, scatterer.conic, cfg)
    if d.round_trip + tx.pulse.support > cfg.pri_s:
        logger.error(f"Echo delay {d.round_trip:.6g} s plus pulse exceeds PRI {cfg.pri_s:.6g} s")
        raise DomainError("scatterer delay beyond PRI is not supported")

    tau = np.arange(tx.fast_samples) / cfg.fs_hz
    t = cfg.slow_times_s
    m = np.arange(tx.n_tx)[:, None]
    n = np.arange(cfg.n_rx)[None, :]
    f_m = tx.carriers_hz[:, None]

    envelope = tx.pulse.envelope(tau - d.round_trip)
    fast = np.exp(2j * np.pi * m * cfg.freq_offset_hz * tau[None, :]) * envelope[None, :]
    slow_freq = m * cfg.freq_offset_hz + (f_m / cfg.carrier_hz) * scatterer.doppler_hz
    slow = tx.weights[:, None] * tx.slow_phase * np.exp(2j * np.pi * slow_freq * t[None, :])
    spatial = scatterer.amplitude * np.exp(
        2j * np.pi * f_m * (m * d.tx_step + n * d.rx_step - d.round_trip)
    )
    return np.einsum("mn,ml,mk->nlk", spatial, slow, fast)


def mix_channels(rx: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """
    Split one receive stream (L, K) into N_T channels.

    Channel m' is the input times e^{-j2π(m'-1)Δf(t_l + τ_k)}.

    Returns:
        Complex array (N_T, L, K)
    """
    rx = np.asarray(rx, dtype=complex)
    pulses, samples = rx.shape
    absolute = cfg.slow_times_s[:pulses, None] + np.arange(samples)[None, :] / cfg.fs_hz
    m = np.arange(cfg.n_tx)[:, None, None]
    return rx[None, :, :] * np.exp(-2j * np.pi * m * cfg.freq_offset_hz * absolute[None, :, :])


def pulse_compress(chan: np.ndarray, u: BasebandWaveform) -> np.ndarray:
    """Matched-filter each pulse of a channel stream along fast time."""
    return matched_filter(chan, u)


def range_gate(profiles: np.ndarray, delay_s: float, fs_hz: float, gate: str = "interpolate") -> np.ndarray:
    """
    Sample compressed profiles at fast-time delay ξ(r).

    "nearest" takes the closest sample; "interpolate" evaluates the
    band-limited (trigonometric) interpolant at the exact delay.

    Args:
        profiles: Compressed fast-time profiles, fast time on the last axis
        delay_s: Gate delay in seconds
        fs_hz: Fast-time sample rate
        gate: "interpolate" or "nearest"

    Returns:
        Gated samples with the last axis removed
    """
    if gate not in GATES:
        raise DomainError(f"gate must be one of {GATES}, got '{gate}'")
    samples = profiles.shape[-1]
    position = delay_s * fs_hz
    if position < 0 or position > samples - 1:
        logger.error(f"Gate at sample {position:.3f} is outside [0, {samples - 1}]")
        raise DomainError("range gate outside the sampled window")

    if gate == "nearest":
        return profiles[..., int(round(position))]

    spectrum = np.fft.fft(profiles, axis=-1)
    bins = np.fft.fftfreq(samples) * samples
    kernel = np.exp(2j * np.pi * bins * position / samples) / samples
    return spectrum @ kernel


def doppler_demodulate(gated: np.ndarray, channel: int, code: PhaseCode, cfg: SystemConfig) -> np.ndarray:
    """Multiply pulse l by e^{-j2πφ_{m'} t_l} for channel m' (0-based)."""
    gated = np.asarray(gated, dtype=complex)
    t = cfg.slow_times_s[:gated.shape[-1]]
    return gated * np.exp(-2j * np.pi * code.phi[channel] * t)


def _lowpass_mask(pulses: int, cutoff_hz: float, prf_hz: float) -> np.ndarray:
    if pulses < 2:
        raise DomainError(f"low-pass needs at least 2 pulses, got {pulses}")
    if cutoff_hz >= prf_hz / 2.0:
        return np.ones(pulses, dtype=bool)
    return np.abs(np.fft.fftfreq(pulses, d=1.0 / prf_hz)) < cutoff_hz


def slow_time_lowpass(x: np.ndarray, cutoff_hz: float, prf_hz: float) -> np.ndarray:
    """
    Ideal DFT-domain low-pass along the last axis.

    Keeps bins whose centered frequency lies strictly inside
    (-cutoff_hz, cutoff_hz); the band half-width is PRF/(2N_T).
    """
    x = np.asarray(x, dtype=complex)
    mask = _lowpass_mask(x.shape[-1], cutoff_hz, prf_hz)
    return np.fft.ifft(np.fft.fft(x, axis=-1) * mask, axis=-1)


def lowpass_matrix(pulses: int, cutoff_hz: float, prf_hz: float) -> np.ndarray:
    """The low-pass as an L x L orthogonal projector."""
    mask = _lowpass_mask(pulses, cutoff_hz, prf_hz)
    dft = np.fft.fft(np.eye(pulses), axis=0) / np.sqrt(pulses)
    return dft.conj().T @ (mask[:, None] * dft)


def band_cutoff(cfg: SystemConfig) -> float:
    return cfg.prf_hz / (2.0 * cfg.n_tx)


def assemble_snapshot(series: np.ndarray, cfg: SystemConfig) -> Snapshot:
    """
    Stack filtered slow-time series into a Snapshot.

    Args:
        series: Array (N_R, N_T, L) of per-element, per-channel outputs
    """
    series = np.asarray(series, dtype=complex)
    if series.shape != (cfg.n_rx, cfg.n_tx, cfg.pulses):
        raise DomainError(f"chain outputs have shape {series.shape}, expected {(cfg.n_rx, cfg.n_tx, cfg.pulses)}")
    return Snapshot(np.transpose(series, (2, 0, 1)), cfg.n_tx, cfg.n_rx, cfg.pulses)


def process_receive(
    rx: np.ndarray,
    tx: PulseTrain,
    code: PhaseCode,
    gate_range_m: float,
    cfg: SystemConfig,
    gate: str = "interpolate",
) -> Snapshot:
    """
    Run the receive chain on (N_R, L, K) streams and gate at range r.

    The chain is linear in rx.
    """
    rx = np.asarray(rx, dtype=complex)
    if rx.shape != (cfg.n_rx, cfg.pulses, tx.fast_samples):
        raise DomainError(f"receive streams have shape {rx.shape}")
    delay = 2.0 * gate_range_m / SPEED_OF_LIGHT
    cutoff = band_cutoff(cfg)

    outputs = np.empty((cfg.n_rx, cfg.n_tx, cfg.pulses), dtype=complex)
    for n in range(cfg.n_rx):
        channels = mix_channels(rx[n], cfg)
        gated = range_gate(pulse_compress(channels, tx.pulse), delay, cfg.fs_hz, gate=gate)
        for m in range(cfg.n_tx):
            outputs[n, m] = slow_time_lowpass(doppler_demodulate(gated[m], m, code, cfg), cutoff, cfg.prf_hz)
    return assemble_snapshot(outputs, cfg)


def run_chain(
    cfg: SystemConfig,
    scatterers: Sequence[Scatterer],
    code: Optional[PhaseCode] = None,
    w: Optional[Sequence[complex]] = None,
    gate_range_m: Optional[float] = None,
    gate: str = "interpolate",
) -> Snapshot:
    """
    Simulate echoes from one or more scatterers and process them into a snapshot.

    Args:
        cfg: System configuration
        scatterers: Point scatterers, summed at the receiver
        code: Phase code, designed from cfg when omitted
        w: Transmit weights
        gate_range_m: Range gate, defaults to the first scatterer's range
        gate: Gate method

    Returns:
        Snapshot
    """
    if not scatterers:
        raise DomainError("run_chain needs at least one scatterer")
    code = code or design_phase_codes(cfg)
    tx = synthesize_transmit(cfg, code, w)
    rx = sum(simulate_point_echo(tx, s, cfg) for s in scatterers)
    gate_range_m = scatterers[0].range_m if gate_range_m is None else gate_range_m
    snapshot = process_receive(rx, tx, code, gate_range_m, cfg, gate=gate)
    logger.info(f"Chain processed {len(scatterers)} scatterer(s) into a {snapshot.data.size}-entry snapshot")
    return snapshot


def lowpass_model(model: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Apply the slow-time low-pass to an analytic snapshot."""
    cube = np.asarray(model, dtype=complex).reshape(cfg.pulses, -1)
    filtered = slow_time_lowpass(cube.T, band_cutoff(cfg), cfg.prf_hz).T
    return filtered.ravel()


def chain_verify(
    cfg: SystemConfig,
    scatterer: Scatterer,
    code: Optional[PhaseCode] = None,
    gate: str = "interpolate",
) -> ChainReport:
    """
    Compare the chain snapshot with composite_steering after scalar alignment.

    Returns:
        ChainReport with the raw error and the error against the low-passed model
    """
    snapshot = run_chain(cfg, [scatterer], code=code, gate=gate)
    model = composite_steering(scatterer.range_m, scatterer.conic, scatterer.doppler_hz, cfg)
    raw = aligned_relative_error(snapshot.data, model)
    filtered = aligned_relative_error(snapshot.data, lowpass_model(model, cfg))
    logger.info(f"Chain check: raw error {raw:.4%}, filtered error {filtered:.4%} ({gate} gate)")
    return ChainReport(raw_error=raw, filtered_error=filtered, snapshot=snapshot, model=model, gate=gate)


def cross_channel_leakage(
    cfg: SystemConfig,
    scatterer: Scatterer,
    code: Optional[PhaseCode] = None,
    gate: str = "interpolate",
) -> Dict[str, float]:
    """
    Worst-case cross-channel energy after demodulation and low-pass.

    Each transmitter is driven alone; energy landing in channels other than
    its own is compared with the energy in its own channel.

    Returns:
        {"worst_db": ..., "per_element_db": [...]}
    """
    code = code or design_phase_codes(cfg)
    ratios = []
    for m in range(cfg.n_tx):
        w = np.zeros(cfg.n_tx, dtype=complex)
        w[m] = 1.0
        energy = run_chain(cfg, [scatterer], code=code, w=w, gate=gate).channel_energy()
        ratios.append(float(to_db((np.sum(energy) - energy[m]) / energy[m])))
    return {"worst_db": max(ratios), "per_element_db": ratios}
