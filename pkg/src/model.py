"""
Closed-form steering vectors and the analytic range-space-time snapshot.

Snapshot ordering is pulse-major, then receive element, then transmit
element: index = (l * N_R + n) * N_T + m with 0-based l, n, m. Every steering
vector is normalized so its first entry is real positive.
"""

from typing import Optional, Sequence

import numpy as np

try:
    from .config import SPEED_OF_LIGHT, SystemConfig, logger
    from .geometry import delays
    from .utils import DomainError
except ImportError:
    from src.config import SPEED_OF_LIGHT, SystemConfig, logger
    from src.geometry import delays
    from src.utils import DomainError

MODES = ("fda", "mimo", "pa")


def _weights(w: Optional[Sequence[complex]], cfg: SystemConfig) -> np.ndarray:
    if w is None:
        return np.ones(cfg.n_tx, dtype=complex)
    w = np.asarray(w, dtype=complex).ravel()
    if len(w) != cfg.n_tx:
        raise DomainError(f"transmit weights have length {len(w)}, expected {cfg.n_tx}")
    return w


def steering_transmit(r: float, psi: float, cfg: SystemConfig) -> np.ndarray:
    """
    Range-angle transmit steering a_T(r, ψ).

    Entry m carries e^{j2π f_m (m-1) ξ_T(ψ)} e^{-j2π f_m ξ(r)} with
    f_m = f_c + (m-1)Δf; the common e^{-j2π f_c ξ(r)} is removed.
    """
    d = delays(r, psi, cfg)
    m = np.arange(cfg.n_tx)
    phase = cfg.carriers_hz * m * d.tx_step - m * cfg.freq_offset_hz * d.round_trip
    return np.exp(2j * np.pi * phase)


def steering_receive(psi: float, cfg: SystemConfig) -> np.ndarray:
    """Receive steering a_R(ψ), entry n = e^{j2π f_c (n-1) ξ_R(ψ)}."""
    rx_step = -cfg.d_rx_m * np.cos(psi) / SPEED_OF_LIGHT
    n = np.arange(cfg.n_rx)
    return np.exp(2j * np.pi * cfg.carrier_hz * n * rx_step)


def steering_doppler(f_d: float, pulses: int, prf_hz: float) -> np.ndarray:
    """Doppler steering b_dop(f_d), entry l = e^{j2π f_d (l-1) T_r}."""
    return np.exp(2j * np.pi * f_d * np.arange(pulses) / prf_hz)


def composite_steering(
    r: float,
    psi: float,
    f_d: float,
    cfg: SystemConfig,
    w: Optional[Sequence[complex]] = None,
    exact: bool = False,
) -> np.ndarray:
    """
    Composite steering q̄(r, ψ, f_d; w) = b_dop ⊗ (a_R ⊗ (w ⊙ a_T)).

    Args:
        r: Range in meters
        psi: Conic angle in radians
        f_d: Doppler in Hz
        cfg: System configuration
        w: Transmit weights, defaults to all ones
        exact: Use the non-separable element phases f_m[(m-1)ξ_T + (n-1)ξ_R]
            and per-carrier Doppler scaling f_m / f_c

    Returns:
        Complex vector of length N_T * N_R * L
    """
    w = _weights(w, cfg)
    if not exact:
        spatial = np.kron(steering_receive(psi, cfg), w * steering_transmit(r, psi, cfg))
        return np.kron(steering_doppler(f_d, cfg.pulses, cfg.prf_hz), spatial)

    d = delays(r, psi, cfg)
    m = np.arange(cfg.n_tx)[None, None, :]
    n = np.arange(cfg.n_rx)[None, :, None]
    t = cfg.slow_times_s[:, None, None]
    f_m = cfg.carriers_hz[None, None, :]
    phase = (
        f_m * (m * d.tx_step + n * d.rx_step)
        - m * cfg.freq_offset_hz * d.round_trip
        + (f_m / cfg.carrier_hz) * f_d * t
    )
    return (np.exp(2j * np.pi * phase) * w[None, None, :]).ravel()


def steering_matrix_C(r: float, psi: float, f_d: float, cfg: SystemConfig) -> np.ndarray:
    """
    Factor C(r, ψ, f_d) with C w = composite_steering(r, ψ, f_d; w).

    Returns:
        Complex (N_T N_R L) x N_T matrix (b_dop ⊗ I)(a_R ⊗ I) diag(a_T)
    """
    outer = np.kron(steering_doppler(f_d, cfg.pulses, cfg.prf_hz), steering_receive(psi, cfg))
    return np.kron(outer[:, None], np.diag(steering_transmit(r, psi, cfg)))


def mode_config(cfg: SystemConfig, mode: str) -> SystemConfig:
    """System seen by a comparison mode; MIMO and PA drop the frequency offset."""
    if mode not in MODES:
        raise DomainError(f"unknown mode '{mode}', expected one of {MODES}")
    if mode == "fda":
        return cfg
    return cfg.with_overrides(freq_offset_hz=0.0)


def phased_array_gain(psi: np.ndarray, look_psi: float, cfg: SystemConfig) -> np.ndarray:
    """Coherent transmit gain a_T^H(ψ₀) a_T(ψ) of a unit-modulus phased array."""
    flat = mode_config(cfg, "pa")
    look = steering_transmit(1.0, look_psi, flat)
    psi = np.atleast_1d(psi)
    gains = np.array([np.vdot(look, steering_transmit(1.0, p, flat)) for p in psi])
    return gains


def spatial_steering(
    r: float,
    psi: float,
    cfg: SystemConfig,
    mode: str = "fda",
    w: Optional[Sequence[complex]] = None,
    look_psi: Optional[float] = None,
) -> np.ndarray:
    """
    Per-pulse spatial block of the snapshot for a comparison mode.

    FDA and MIMO give a_R ⊗ (w ⊙ a_T) of length N_R N_T; PA gives the receive
    steering scaled by its transmit gain, length N_R.
    """
    if mode == "pa":
        if look_psi is None:
            raise DomainError("PA mode needs a look direction")
        return phased_array_gain(psi, look_psi, cfg)[0] * steering_receive(psi, cfg)
    mcfg = mode_config(cfg, mode)
    return np.kron(steering_receive(psi, mcfg), _weights(w, cfg) * steering_transmit(r, psi, mcfg))


def mode_steering(
    r: float,
    psi: float,
    f_d: float,
    cfg: SystemConfig,
    mode: str = "fda",
    w: Optional[Sequence[complex]] = None,
    look_psi: Optional[float] = None,
) -> np.ndarray:
    """Full snapshot steering b_dop ⊗ spatial_steering for a comparison mode."""
    spatial = spatial_steering(r, psi, cfg, mode=mode, w=w, look_psi=look_psi)
    return np.kron(steering_doppler(f_d, cfg.pulses, cfg.prf_hz), spatial)


def mode_dimension(cfg: SystemConfig, mode: str) -> int:
    """Snapshot length for a mode."""
    mode_config(cfg, mode)
    per_pulse = cfg.n_rx if mode == "pa" else cfg.n_rx * cfg.n_tx
    return per_pulse * cfg.pulses


def transmit_beampattern(
    cfg: SystemConfig,
    ranges_m: np.ndarray,
    azimuths_rad: np.ndarray,
    depression_rad: float,
    time_s: float = 0.0,
    focus: Optional[tuple] = None,
) -> np.ndarray:
    """
    Range-angle transmit power pattern of the frequency diverse array.

    The field of element m at (r, ψ, t) is e^{j2π(m-1)Δf(t - r/c)} e^{j2π f_m (m-1) ξ_T(ψ)};
    weights conjugate that field at the focus (r₀, θ₀), or are uniform.

    Args:
        cfg: System configuration
        ranges_m: Range axis in meters
        azimuths_rad: Azimuth axis in radians
        depression_rad: Depression angle in radians
        time_s: Observation time
        focus: Optional (range_m, azimuth_rad) to focus on

    Returns:
        Array (len(ranges), len(azimuths)) normalized to N_T^2 at the focus
    """
    ranges = np.asarray(ranges_m, dtype=float)
    cos_psi = np.cos(np.asarray(azimuths_rad, dtype=float)) * np.cos(depression_rad)
    m = np.arange(cfg.n_tx)

    def field(r, cpsi):
        range_phase = m * cfg.freq_offset_hz * (time_s - np.asarray(r)[..., None] / SPEED_OF_LIGHT)
        angle_phase = -cfg.carriers_hz * m * cfg.d_tx_m * np.asarray(cpsi)[..., None] / SPEED_OF_LIGHT
        return np.exp(2j * np.pi * (range_phase + angle_phase))

    if focus is None:
        w = np.ones(cfg.n_tx, dtype=complex)
    else:
        r0, theta0 = focus
        w = np.conj(field(r0, np.cos(theta0) * np.cos(depression_rad)))

    values = field(ranges[:, None], cos_psi[None, :]) @ w
    logger.info(f"Transmit beampattern on {len(ranges)}x{len(cos_psi)} grid at t = {time_s:g} s")
    return np.abs(values) ** 2 / cfg.n_tx ** 2
