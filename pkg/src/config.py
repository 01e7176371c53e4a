"""Configuration module for the FDA STAP simulator."""

import logging
import os
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, Final, Optional

import numpy as np
from dotenv import load_dotenv

try:
    from .utils import DomainError
except ImportError:
    from src.utils import DomainError

# Load environment variables
load_dotenv()

SPEED_OF_LIGHT: Final[float] = 299_792_458.0  # m/s

# Run settings
OUTPUT_DIR: str = os.getenv("FDA_OUTPUT_DIR", "outputs")
DEFAULT_SEED: int = int(os.getenv("FDA_SEED", "20240101"))
MAX_SNAPSHOT_DIM: int = int(os.getenv("FDA_MAX_SNAPSHOT_DIM", "4500"))
LOG_LEVEL: str = os.getenv("FDA_LOG_LEVEL", "INFO")

# System parameters
DEFAULT_N_TX: int = 5
DEFAULT_N_RX: int = 5
DEFAULT_D_TX_M: float = 0.125
DEFAULT_D_RX_M: float = 0.125
DEFAULT_CARRIER_HZ: float = 1.2e9
DEFAULT_FREQ_OFFSET_HZ: float = 1.0e6
DEFAULT_PRF_HZ: float = 7.0e3
DEFAULT_PULSES: int = 180
DEFAULT_PLATFORM_MPS: float = 100.0
DEFAULT_PULSE_WIDTH_S: float = 1.0e-6
DEFAULT_BANDWIDTH_HZ: float = 20.0e6

# Scenario parameters
DEFAULT_TARGET_RANGE_M: float = 3000.0
DEFAULT_TARGET_AZIMUTH_DEG: float = 45.0
DEFAULT_TARGET_DEPRESSION_DEG: float = 45.0
DEFAULT_TARGET_DOPPLER_HZ: float = 400.0
DEFAULT_TARGET_SNR_DB: float = 0.0
DEFAULT_JAMMER_AZIMUTH_DEG: float = 120.0
DEFAULT_JAMMER_DEPRESSION_DEG: float = 45.0
DEFAULT_JNR_DB: float = 20.0
DEFAULT_CLUTTER_RANGE_M: float = 3006.0
DEFAULT_CLUTTER_DEPRESSION_DEG: float = 45.0
DEFAULT_CLUTTER_SPAN_DEG: tuple = (0.0, 180.0)
DEFAULT_CLUTTER_PATCHES: int = 181
DEFAULT_CNR_DB: float = 20.0
DEFAULT_TARGET_EXTENT_M: float = 10.0

# Grid defaults
DEFAULT_AZIMUTH_GRID_DEG: tuple = (0.0, 180.0, 1.0)
DEFAULT_DOPPLER_GRID_HZ: tuple = (-800.0, 800.0, 10.0)

# Logging configuration
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s %(levelname)s %(name)s %(message)s",
    handlers=[logging.StreamHandler(sys.stdout)]
)

logger = logging.getLogger("fda_stap")


@dataclass(frozen=True)
class SystemConfig:
    """
    Radar system parameters.

    Attributes:
        n_tx: Number of transmit elements N_T
        n_rx: Number of receive elements N_R
        d_tx_m: Transmit element spacing in meters
        d_rx_m: Receive element spacing in meters
        carrier_hz: Reference carrier f_c
        freq_offset_hz: Inter-element frequency offset Δf
        prf_hz: Pulse repetition frequency
        pulses: Pulses per CPI (L)
        platform_mps: Platform velocity v_a
        pulse_width_s: Pulse duration T_p
        bandwidth_hz: LFM bandwidth B
        sample_rate_hz: Fast-time sample rate; None means 2B
    """

    n_tx: int = DEFAULT_N_TX
    n_rx: int = DEFAULT_N_RX
    d_tx_m: float = DEFAULT_D_TX_M
    d_rx_m: float = DEFAULT_D_RX_M
    carrier_hz: float = DEFAULT_CARRIER_HZ
    freq_offset_hz: float = DEFAULT_FREQ_OFFSET_HZ
    prf_hz: float = DEFAULT_PRF_HZ
    pulses: int = DEFAULT_PULSES
    platform_mps: float = DEFAULT_PLATFORM_MPS
    pulse_width_s: float = DEFAULT_PULSE_WIDTH_S
    bandwidth_hz: float = DEFAULT_BANDWIDTH_HZ
    sample_rate_hz: Optional[float] = None

    def __post_init__(self):
        for name in ("n_tx", "n_rx", "pulses"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value}")
        for name in ("d_tx_m", "d_rx_m", "carrier_hz", "prf_hz", "pulse_width_s"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if self.freq_offset_hz < 0 or self.bandwidth_hz < 0:
            raise DomainError("freq_offset_hz and bandwidth_hz must be non-negative")
        if self.pulse_width_s >= self.pri_s:
            raise DomainError(f"pulse width {self.pulse_width_s} s does not fit in PRI {self.pri_s} s")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def pri_s(self) -> float:
        return 1.0 / self.prf_hz

    @property
    def fs_hz(self) -> float:
        """Fast-time sample rate, defaulting to twice the bandwidth."""
        if self.sample_rate_hz:
            return float(self.sample_rate_hz)
        return 2.0 * self.bandwidth_hz if self.bandwidth_hz > 0 else 40.0 / self.pulse_width_s

    @property
    def snapshot_dim(self) -> int:
        return self.n_tx * self.n_rx * self.pulses

    @property
    def carriers_hz(self) -> np.ndarray:
        """Per-element carriers f_c + (m-1)Δf."""
        return self.carrier_hz + np.arange(self.n_tx) * self.freq_offset_hz

    @property
    def slow_times_s(self) -> np.ndarray:
        """Pulse times t_l = (l-1)T_r referenced to the first pulse."""
        return np.arange(self.pulses) * self.pri_s

    def with_overrides(self, **changes: Any) -> "SystemConfig":
        """Return a copy with selected fields replaced."""
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def ensure_output_dir(path: Optional[str] = None) -> Path:
    """Create the output directory if it doesn't exist."""
    out = Path(path or OUTPUT_DIR)
    out.mkdir(parents=True, exist_ok=True)
    return out


def validate_environment(out_dir: Optional[str] = None) -> dict:
    """
    Validate the runtime environment.

    Returns:
        Dict with validation results and messages
    """
    results = {
        "valid": True,
        "warnings": [],
        "errors": []
    }

    try:
        ensure_output_dir(out_dir)
    except OSError as e:
        results["valid"] = False
        results["errors"].append(f"Output directory is not writable: {e}")

    if MAX_SNAPSHOT_DIM < 1:
        results["valid"] = False
        results["errors"].append(f"FDA_MAX_SNAPSHOT_DIM must be positive, got {MAX_SNAPSHOT_DIM}")
    elif MAX_SNAPSHOT_DIM > 8000:
        results["warnings"].append(f"Snapshot budget {MAX_SNAPSHOT_DIM} exceeds desk scale; covariance builds will be slow")

    return results
