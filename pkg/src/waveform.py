"""Baseband LFM pulse, ambiguity function and fast-time matched filtering."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import signal

try:
    from .config import SystemConfig, logger
    from .utils import DomainError
except ImportError:
    from src.config import SystemConfig, logger
    from src.utils import DomainError

MIN_PULSE_SAMPLES = 8


@dataclass(frozen=True)
class BasebandWaveform:
    """
    Unit-energy causal pulse u(t) on [0, T_p).

    Attributes:
        samples: u[k] = u(k / fs), k = 0..N-1
        sample_rate: fs in Hz
        duration: T_p in seconds
        bandwidth: Swept bandwidth B in Hz (0 gives a rectangular pulse)
        gain: Envelope magnitude g, chosen so sum |u[k]|^2 / fs = 1
    """

    samples: np.ndarray
    sample_rate: float
    duration: float
    bandwidth: float
    gain: float

    @property
    def support(self) -> float:
        """Sampled support N / fs in seconds."""
        return len(self.samples) / self.sample_rate

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) / self.sample_rate)

    def envelope(self, t: np.ndarray) -> np.ndarray:
        """Evaluate the continuous pulse at arbitrary times; zero off support."""
        t = np.asarray(t, dtype=float)
        inside = (t >= 0.0) & (t < self.support)
        rate = self.bandwidth / self.duration
        phase = np.pi * rate * (t - self.duration / 2.0) ** 2
        return np.where(inside, self.gain * np.exp(1j * phase), 0.0)


def lfm_baseband(duration: float, bandwidth: float, sample_rate: Optional[float] = None) -> BasebandWaveform:
    """
    Generate a unit-energy linear FM pulse.

    Args:
        duration: Pulse width T_p in seconds
        bandwidth: Swept bandwidth B in Hz
        sample_rate: fs in Hz; defaults to 2B

    Returns:
        BasebandWaveform with u[k] = g exp(jπ(B/T_p)(t_k - T_p/2)^2)

    Raises:
        DomainError: If the pulse is undersampled or too short
    """
    if not duration > 0:
        raise DomainError(f"pulse duration must be positive, got {duration}")
    if bandwidth < 0:
        raise DomainError(f"bandwidth must be non-negative, got {bandwidth}")
    if sample_rate is None:
        if bandwidth == 0:
            raise DomainError("sample_rate is required for a rectangular pulse")
        sample_rate = 2.0 * bandwidth
    if sample_rate < bandwidth:
        logger.error(f"Sample rate {sample_rate} Hz is below bandwidth {bandwidth} Hz")
        raise DomainError(f"undersampled: fs = {sample_rate} Hz < B = {bandwidth} Hz")
    if sample_rate < 2.0 * bandwidth:
        logger.warning(f"Sample rate {sample_rate} Hz is below 2B = {2 * bandwidth} Hz")

    count = int(round(duration * sample_rate))
    if count < MIN_PULSE_SAMPLES:
        raise DomainError(f"pulse has {count} samples, need at least {MIN_PULSE_SAMPLES}")

    gain = np.sqrt(sample_rate / count)
    t = np.arange(count) / sample_rate
    phase = np.pi * (bandwidth / duration) * (t - duration / 2.0) ** 2
    samples = gain * np.exp(1j * phase)
    return BasebandWaveform(samples, float(sample_rate), float(duration), float(bandwidth), float(gain))


def waveform_for(cfg: SystemConfig) -> BasebandWaveform:
    """Build the system pulse from a SystemConfig."""
    return lfm_baseband(cfg.pulse_width_s, cfg.bandwidth_hz, cfg.fs_hz)


def ambiguity(u: BasebandWaveform, delay: float, doppler: float) -> complex:
    """
    Riemann-sum ambiguity function ∫ u(τ) e^{j2πτf'} u*(τ - τ') dτ.

    Args:
        u: Baseband pulse
        delay: τ' in seconds
        doppler: f' in Hz

    Returns:
        Complex ambiguity value; 0 when |τ'| is at least the pulse support
    """
    if abs(delay) >= u.support:
        return 0j
    t = np.arange(len(u.samples)) / u.sample_rate
    shifted = u.envelope(t - delay)
    value = np.sum(u.samples * np.exp(2j * np.pi * doppler * t) * np.conj(shifted))
    return complex(value / u.sample_rate)


def matched_filter(x: np.ndarray, u: BasebandWaveform, method: str = "fft") -> np.ndarray:
    """
    Correlate a fast-time record with the pulse.

    Output index k holds sum_j x[k + j] u*[j] / fs, so a pulse starting at
    sample k0 peaks at index k0 and an undelayed copy of u gives 1 at index 0.

    Args:
        x: Complex fast-time samples, at least as long as the pulse
        u: Baseband pulse
        method: "fft" or "direct"

    Returns:
        Complex array with the same length as x
    """
    x = np.asarray(x)
    if x.size == 0:
        raise DomainError("matched filter input is empty")
    if x.shape[-1] < len(u.samples):
        raise DomainError(f"input length {x.shape[-1]} is shorter than the pulse ({len(u.samples)})")

    offset = len(u.samples) - 1
    if x.ndim == 1:
        full = signal.correlate(x, u.samples, mode="full", method=method)
        return full[offset:offset + x.shape[-1]] / u.sample_rate

    # Batched along the last axis (one row per pulse).
    kernel = u.samples.reshape((1,) * (x.ndim - 1) + (-1,))
    full = signal.correlate(x, kernel, mode="full", method=method)
    return full[..., offset:offset + x.shape[-1]] / u.sample_rate
