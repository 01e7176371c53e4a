"""
Angle conventions and propagation delays.

Azimuth θ is measured from the array axis in [0, π], depression φ from the
horizontal in [0, π/2]; the conic angle ψ between the array axis and the line
of sight satisfies cos ψ = cos θ · cos φ. Geometry is frozen over a CPI.
"""

from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

try:
    from .config import SPEED_OF_LIGHT, SystemConfig, logger
    from .utils import DomainError
except ImportError:
    from src.config import SPEED_OF_LIGHT, SystemConfig, logger
    from src.utils import DomainError

ArrayLike = Union[float, np.ndarray]

_ANGLE_TOL = 1e-12


@dataclass(frozen=True)
class Angles:
    """Azimuth/depression pair with its derived conic angle (radians)."""

    azimuth: float
    depression: float

    def __post_init__(self):
        _check_angles(self.azimuth, self.depression)

    @property
    def conic(self) -> float:
        return float(conic_angle(self.azimuth, self.depression))

    @classmethod
    def from_degrees(cls, azimuth_deg: float, depression_deg: float) -> "Angles":
        return cls(float(np.deg2rad(azimuth_deg)), float(np.deg2rad(depression_deg)))


@dataclass(frozen=True)
class DelaySet:
    """
    Delay components of a point echo.

    Attributes:
        round_trip: ξ(r) = 2r/c in seconds
        tx_step: ξ_T(ψ) = -d_t cos ψ / c in seconds
        rx_step: ξ_R(ψ) = -d_r cos ψ / c in seconds
        doppler_rate: f_d / f_c for the radial velocity, dimensionless
    """

    round_trip: float
    tx_step: float
    rx_step: float
    doppler_rate: float = 0.0


def _check_angles(theta: ArrayLike, phi: ArrayLike) -> None:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(theta < -_ANGLE_TOL) or np.any(theta > np.pi + _ANGLE_TOL):
        raise DomainError(f"azimuth must lie in [0, pi], got {theta}")
    if np.any(phi < -_ANGLE_TOL) or np.any(phi > np.pi / 2 + _ANGLE_TOL):
        raise DomainError(f"depression must lie in [0, pi/2], got {phi}")


def conic_angle(theta: ArrayLike, phi: ArrayLike) -> ArrayLike:
    """
    Map azimuth and depression to the conic angle.

    Args:
        theta: Azimuth in radians, [0, π]
        phi: Depression in radians, [0, π/2]

    Returns:
        ψ = arccos(cos θ · cos φ) in radians

    Raises:
        DomainError: If either angle is out of range
    """
    _check_angles(theta, phi)
    cos_psi = np.clip(np.cos(theta) * np.cos(phi), -1.0, 1.0)
    psi = np.arccos(cos_psi)
    return float(psi) if np.ndim(psi) == 0 else psi


def delays(r: float, psi: float, cfg: SystemConfig, velocity_mps: float = 0.0) -> DelaySet:
    """
    Compute the delay components for a scatterer at range r and conic angle ψ.

    Args:
        r: Range in meters
        psi: Conic angle in radians
        cfg: System configuration (element spacings)
        velocity_mps: Radial closing velocity used for the Doppler rate

    Returns:
        DelaySet

    Raises:
        DomainError: If r is not positive
    """
    if not r > 0:
        logger.error(f"Invalid range {r} m")
        raise DomainError(f"range must be positive, got {r}")
    cos_psi = np.cos(psi)
    return DelaySet(
        round_trip=2.0 * r / SPEED_OF_LIGHT,
        tx_step=-cfg.d_tx_m * cos_psi / SPEED_OF_LIGHT,
        rx_step=-cfg.d_rx_m * cos_psi / SPEED_OF_LIGHT,
        doppler_rate=2.0 * velocity_mps / SPEED_OF_LIGHT,
    )


def doppler_from_velocity(v: ArrayLike, wavelength: float) -> ArrayLike:
    """Two-way Doppler shift 2v/λ in Hz."""
    if not wavelength > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength}")
    return 2.0 * np.asarray(v, dtype=float) / wavelength if np.ndim(v) else 2.0 * float(v) / wavelength


def velocity_from_doppler(f_d: float, wavelength: float) -> float:
    """Inverse of doppler_from_velocity."""
    if not wavelength > 0:
        raise DomainError(f"wavelength must be positive, got {wavelength}")
    return f_d * wavelength / 2.0


def clutter_doppler(psi: ArrayLike, cfg: SystemConfig) -> ArrayLike:
    """Doppler of stationary ground at conic angle ψ: (2 v_a / λ) cos ψ."""
    return doppler_from_velocity(cfg.platform_mps, cfg.wavelength_m) * np.cos(psi)


def check_decorrelation(freq_offset_hz: float, n_tx: int, extent_m: float) -> Dict[str, object]:
    """
    Check the sufficient condition against frequency decorrelation of the target.

    The offset must satisfy Δf <= c / (4 (N_T - 1) Δς) for a target of
    extent Δς along boresight.

    Args:
        freq_offset_hz: Inter-element frequency offset Δf
        n_tx: Number of transmit elements, >= 2
        extent_m: Target extent Δς in meters, > 0

    Returns:
        Dict with passed, bound_hz, margin_hz and message
    """
    if n_tx < 2:
        raise DomainError(f"decorrelation check needs at least 2 transmitters, got {n_tx}")
    if not extent_m > 0:
        raise DomainError(f"target extent must be positive, got {extent_m}")

    bound = SPEED_OF_LIGHT / (4.0 * (n_tx - 1) * extent_m)
    passed = freq_offset_hz <= bound
    message = (
        f"Δf = {freq_offset_hz:.6g} Hz {'within' if passed else 'exceeds'} "
        f"decorrelation bound {bound:.6g} Hz"
    )
    if not passed:
        logger.warning(message)
    return {
        "passed": passed,
        "bound_hz": bound,
        "margin_hz": bound - freq_offset_hz,
        "message": message,
    }
