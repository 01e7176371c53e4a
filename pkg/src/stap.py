"""
MVDR weights, SINR metrics, adapted patterns, interference spectra and
SINR-loss curves.

Covariances are factored once with a Cholesky decomposition and reused for
every steering vector; nothing here forms an explicit inverse.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import linalg

try:
    from .config import SystemConfig, logger
    from .geometry import conic_angle
    from .model import (
        composite_steering,
        mode_steering,
        spatial_steering,
        steering_matrix_C,
    )
    from .scene import (
        CovarianceModel,
        Scene,
        Target,
        covariance_jamming,
        covariance_total,
        scene_patches,
    )
    from .utils import DomainError, SingularCovarianceError, to_db
except ImportError:
    from src.config import SystemConfig, logger
    from src.geometry import conic_angle
    from src.model import (
        composite_steering,
        mode_steering,
        spatial_steering,
        steering_matrix_C,
    )
    from src.scene import (
        CovarianceModel,
        Scene,
        Target,
        covariance_jamming,
        covariance_total,
        scene_patches,
    )
    from src.utils import DomainError, SingularCovarianceError, to_db

LOSS_REFERENCES = ("amplitude", "power", "coherent")


@dataclass
class AdaptedPatternGrid:
    """
    Angle-Doppler map.

    Attributes:
        azimuth_deg: Strictly increasing azimuth axis
        doppler_hz: Strictly increasing Doppler axis
        values: Linear values, shape (len(doppler_hz), len(azimuth_deg))
        metadata: kind, mode, range_m, scene name
    """

    azimuth_deg: np.ndarray
    doppler_hz: np.ndarray
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.azimuth_deg = np.asarray(self.azimuth_deg, dtype=float)
        self.doppler_hz = np.asarray(self.doppler_hz, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        for name, axis in (("azimuth_deg", self.azimuth_deg), ("doppler_hz", self.doppler_hz)):
            if axis.size == 0:
                raise DomainError(f"{name} grid is empty")
            if axis.size > 1 and np.any(np.diff(axis) <= 0):
                raise DomainError(f"{name} grid must be strictly increasing")
        if self.values.shape != (self.doppler_hz.size, self.azimuth_deg.size):
            raise DomainError(f"values shape {self.values.shape} does not match grid")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid values must be finite")

    @property
    def raw_db(self) -> np.ndarray:
        return to_db(self.values)

    @property
    def normalized_db(self) -> np.ndarray:
        """dB relative to the grid maximum."""
        return to_db(self.values / np.max(self.values))

    def cell(self, azimuth_deg: float, doppler_hz: float) -> Tuple[int, int]:
        """(doppler index, azimuth index) of the nearest grid cell."""
        return (
            int(np.argmin(np.abs(self.doppler_hz - doppler_hz))),
            int(np.argmin(np.abs(self.azimuth_deg - azimuth_deg))),
        )

    def argmax(self) -> Tuple[float, float]:
        """(azimuth_deg, doppler_hz) of the global maximum."""
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.azimuth_deg[j]), float(self.doppler_hz[i])

    def to_frame(self) -> pd.DataFrame:
        az, dop = np.meshgrid(self.azimuth_deg, self.doppler_hz)
        return pd.DataFrame({
            "azimuth_deg": az.ravel(),
            "doppler_hz": dop.ravel(),
            "value_db": self.normalized_db.ravel(),
            "value_raw_db": self.raw_db.ravel(),
        })


@dataclass
class QuadraticForms:
    """SINR as a ratio of quadratic forms in the transmit weights."""

    c_target: np.ndarray
    c_clutter: np.ndarray
    eta: float
    snr: float

    def sinr(self, w: Sequence[complex]) -> float:
        """Linear SINR  SNR · (w^H C_t w) / (w^H C_c w + η)."""
        w = np.asarray(w, dtype=complex)
        num = np.real(np.vdot(w, self.c_target @ w))
        den = np.real(np.vdot(w, self.c_clutter @ w)) + self.eta
        return float(self.snr * num / den)


def factor_covariance(cov: CovarianceModel) -> Tuple[np.ndarray, bool]:
    """Cholesky-factor a covariance, raising SingularCovarianceError on failure."""
    try:
        return linalg.cho_factor(cov.matrix, lower=True, check_finite=True)
    except linalg.LinAlgError as e:
        logger.error(f"Cholesky factorization failed for {cov.dim}x{cov.dim} covariance: {e}")
        raise SingularCovarianceError(f"covariance is not positive definite: {e}") from e


def mvdr_weights(
    cov: CovarianceModel,
    q_target: np.ndarray,
    factor: Optional[Tuple[np.ndarray, bool]] = None,
) -> np.ndarray:
    """
    MVDR weight v = R̄⁻¹ q̄ / (q̄^H R̄⁻¹ q̄).

    Args:
        cov: Interference-plus-noise covariance
        q_target: Target steering vector
        factor: Optional precomputed cho_factor result

    Returns:
        Weight vector with v^H q̄ = 1
    """
    q_target = np.asarray(q_target, dtype=complex)
    if q_target.shape != (cov.dim,):
        raise DomainError(f"steering length {q_target.shape} does not match covariance dim {cov.dim}")
    factor = factor or factor_covariance(cov)
    white = linalg.cho_solve(factor, q_target)
    return white / np.vdot(q_target, white)


def target_steering(target: Target, cfg: SystemConfig, w: Optional[Sequence[complex]] = None) -> np.ndarray:
    return composite_steering(target.range_m, target.conic, target.doppler_hz, cfg, w=w)


def output_sinr_linear(
    v: np.ndarray,
    w: Optional[Sequence[complex]],
    scene: Scene,
    cfg: SystemConfig,
    target: Optional[Target] = None,
    cov: Optional[CovarianceModel] = None,
) -> float:
    """Linear output SINR  SNR |v^H q̄_t|² / (v^H R̄(w) v)."""
    target = target or scene.target
    cov = cov or covariance_total(scene, w, cfg)
    q = target_steering(target, cfg, w)
    num = np.abs(np.vdot(v, q)) ** 2
    den = np.real(np.vdot(v, cov.matrix @ v))
    return float(target.snr * num / den)


def output_sinr(
    v: np.ndarray,
    w: Optional[Sequence[complex]],
    scene: Scene,
    cfg: SystemConfig,
    target: Optional[Target] = None,
    cov: Optional[CovarianceModel] = None,
) -> float:
    """Output SINR in dB."""
    return float(to_db(output_sinr_linear(v, w, scene, cfg, target=target, cov=cov)))


def sinr_quadratic_forms(
    v: np.ndarray,
    scene: Scene,
    cfg: SystemConfig,
    target: Optional[Target] = None,
) -> QuadraticForms:
    """
    Quadratic forms C_t(v), C_c(v) and η(v) of the SINR in the transmit weights.

    C_t = C_t^H v v^H C_t, C_c = Σ CNR_i C_i^H v v^H C_i, η = v^H R_jam v + v^H v.
    """
    target = target or scene.target
    v = np.asarray(v, dtype=complex)

    proj_t = steering_matrix_C(target.range_m, target.conic, target.doppler_hz, cfg).conj().T @ v
    c_target = np.outer(proj_t, proj_t.conj())

    c_clutter = np.zeros((cfg.n_tx, cfg.n_tx), dtype=complex)
    for patch in scene_patches(scene, cfg):
        proj = steering_matrix_C(patch.range_m, patch.psi, patch.doppler_hz, cfg).conj().T @ v
        c_clutter += patch.cnr * np.outer(proj, proj.conj())

    r_jam = covariance_jamming(scene.jammers, cfg)
    eta = float(np.real(np.vdot(v, r_jam @ v)) + np.real(np.vdot(v, v)))
    return QuadraticForms(c_target=c_target, c_clutter=c_clutter, eta=eta, snr=target.snr)


def _whitened_power(lower: np.ndarray, q: np.ndarray) -> np.ndarray:
    """q^H R⁻¹ q for each column of q using the lower Cholesky factor."""
    white = linalg.solve_triangular(lower, q, lower=True)
    return np.sum(np.abs(white) ** 2, axis=0)


def _lower_factor(cov: CovarianceModel, factor: Optional[Tuple[np.ndarray, bool]] = None) -> np.ndarray:
    c, lower = factor or factor_covariance(cov)
    return np.tril(c) if lower else np.triu(c).conj().T


def _scan_columns(
    cfg: SystemConfig,
    range_m: float,
    psi: float,
    dopplers: np.ndarray,
    mode: str,
    look_psi: Optional[float],
) -> np.ndarray:
    """Steering vectors for one angle across a Doppler axis, one per column."""
    spatial = spatial_steering(range_m, psi, cfg, mode=mode, look_psi=look_psi)
    slow = np.exp(2j * np.pi * np.outer(np.arange(cfg.pulses), dopplers) / cfg.prf_hz)
    return (slow[:, None, :] * spatial[None, :, None]).reshape(-1, len(dopplers))


def _grid_psi(azimuth_deg: np.ndarray, depression: float) -> np.ndarray:
    az = np.deg2rad(np.asarray(azimuth_deg, dtype=float))
    return np.atleast_1d(conic_angle(az, np.full_like(az, depression)))


def interference_spectrum(
    scene: Scene,
    cfg: SystemConfig,
    azimuth_deg: np.ndarray,
    doppler_hz: np.ndarray,
    mode: str = "fda",
    loading: float = 0.0,
    cov: Optional[CovarianceModel] = None,
) -> AdaptedPatternGrid:
    """
    Interference spectrum P(ψ, f_d) = 1 / (q̄^H R̄⁻¹ q̄) at the target range, w = 1.

    Args:
        scene: Scenario; the target fixes range, depression and PA look direction
        cfg: System configuration
        azimuth_deg: Azimuth axis in degrees
        doppler_hz: Doppler axis in Hz
        mode: Steering model
        loading: Diagonal loading
        cov: Optional prebuilt covariance for the same mode

    Returns:
        AdaptedPatternGrid with kind "spectrum"
    """
    target = scene.target
    look = target.conic if mode == "pa" else None
    cov = cov or covariance_total(scene, None, cfg, mode=mode, loading=loading, look_psi=look)
    lower = _lower_factor(cov)
    dopplers = np.asarray(doppler_hz, dtype=float)
    if dopplers.size == 0 or np.size(azimuth_deg) == 0:
        raise DomainError("spectrum grid is empty")

    values = np.empty((dopplers.size, np.size(azimuth_deg)))
    for j, psi in enumerate(_grid_psi(azimuth_deg, target.depression)):
        q = _scan_columns(cfg, target.range_m, psi, dopplers, mode, look)
        values[:, j] = 1.0 / _whitened_power(lower, q)

    logger.info(f"Interference spectrum computed on {values.shape[1]}x{values.shape[0]} grid ({mode})")
    return AdaptedPatternGrid(
        azimuth_deg, dopplers, values,
        metadata={"kind": "spectrum", "mode": mode, "range_m": target.range_m, "scene": scene.name},
    )


def adapted_pattern(
    scene: Scene,
    cfg: SystemConfig,
    azimuth_deg: np.ndarray,
    doppler_hz: np.ndarray,
    mode: str = "fda",
    loading: float = 0.0,
    target: Optional[Target] = None,
    structured: bool = True,
    cov: Optional[CovarianceModel] = None,
) -> AdaptedPatternGrid:
    """
    Adapted pattern of MVDR filters scanned over angle and Doppler, seen by the target.

    Each cell steers v(ψ, f_d) = R̄⁻¹q̄ / (q̄^H R̄⁻¹ q̄) at the scan vector
    q̄(r_t, ψ, f_d) and reports the output SINR it delivers on the target,
    relative to the noise-only optimum ||q̄_t||²:

        P(ψ, f_d) = |q̄^H R̄⁻¹ q̄_t|² / (q̄^H R̄⁻¹ q̄ · ||q̄_t||²)

    P never exceeds its value at the target cell, which is the target's SINR
    loss q̄_t^H R̄⁻¹ q̄_t / ||q̄_t||². With structured=True the cross term uses
    the Kronecker form b_dop ⊗ s(ψ) as a matrix product against the target
    weight instead of materializing each scan vector.

    Returns:
        AdaptedPatternGrid with kind "pattern"
    """
    target = target or scene.target
    look = target.conic if mode == "pa" else None
    cov = cov or covariance_total(scene, None, cfg, mode=mode, loading=loading, look_psi=look)
    factor = factor_covariance(cov)
    lower = _lower_factor(cov, factor)
    q_t = mode_steering(target.range_m, target.conic, target.doppler_hz, cfg, mode=mode, look_psi=look)
    v = mvdr_weights(cov, q_t, factor=factor)
    target_power = float(_whitened_power(lower, q_t[:, None])[0])

    dopplers = np.asarray(doppler_hz, dtype=float)
    psis = _grid_psi(azimuth_deg, target.depression)
    if dopplers.size == 0 or psis.size == 0:
        raise DomainError("pattern grid is empty")

    # |q̄^H R̄⁻¹ q̄_t| = (q̄_t^H R̄⁻¹ q̄_t) |v^H q̄| for the target weight v.
    response = np.empty((dopplers.size, psis.size), dtype=complex)
    scan_power = np.empty((dopplers.size, psis.size))
    if structured:
        spatial = np.stack(
            [spatial_steering(target.range_m, p, cfg, mode=mode, look_psi=look) for p in psis], axis=1
        )
        slow = np.exp(2j * np.pi * np.outer(np.arange(cfg.pulses), dopplers) / cfg.prf_hz)
        response[:] = slow.T @ v.reshape(cfg.pulses, -1).conj() @ spatial
        for j in range(psis.size):
            q = (slow[:, None, :] * spatial[None, :, j, None]).reshape(-1, dopplers.size)
            scan_power[:, j] = _whitened_power(lower, q)
    else:
        for j, psi in enumerate(psis):
            q = _scan_columns(cfg, target.range_m, psi, dopplers, mode, look)
            response[:, j] = v.conj() @ q
            scan_power[:, j] = _whitened_power(lower, q)

    values = target_power ** 2 * np.abs(response) ** 2 / (scan_power * np.vdot(q_t, q_t).real)
    logger.info(f"Adapted pattern computed on {psis.size}x{dopplers.size} grid ({mode})")
    return AdaptedPatternGrid(
        azimuth_deg, dopplers, values,
        metadata={"kind": "pattern", "mode": mode, "range_m": target.range_m, "scene": scene.name},
    )


def pattern_cut(grid: AdaptedPatternGrid, axis: str, at: float) -> pd.DataFrame:
    """
    Extract one line of a grid at the nearest grid line.

    Args:
        grid: Pattern or spectrum grid
        axis: "doppler" cuts at a fixed Doppler (series over azimuth);
            "azimuth" cuts at a fixed azimuth (series over Doppler)
        at: Position of the cut in Hz or degrees

    Returns:
        DataFrame with the running axis, value_db (normalized to the grid max)
        and value_raw_db
    """
    if axis == "doppler":
        fixed, running, name = grid.doppler_hz, grid.azimuth_deg, "azimuth_deg"
    elif axis == "azimuth":
        fixed, running, name = grid.azimuth_deg, grid.doppler_hz, "doppler_hz"
    else:
        raise DomainError(f"cut axis must be 'doppler' or 'azimuth', got '{axis}'")

    half = 0.5 * (np.min(np.diff(fixed)) if fixed.size > 1 else 0.0)
    if at < fixed[0] - half or at > fixed[-1] + half:
        raise DomainError(f"cut position {at} is outside [{fixed[0]}, {fixed[-1]}]")

    idx = int(np.argmin(np.abs(fixed - at)))
    norm = grid.normalized_db
    raw = grid.raw_db
    if axis == "doppler":
        values, values_raw = norm[idx, :], raw[idx, :]
    else:
        values, values_raw = norm[:, idx], raw[:, idx]
    return pd.DataFrame({name: running, "value_db": values, "value_raw_db": values_raw})


def sinr_loss_curve(
    scene: Scene,
    cfg: SystemConfig,
    dopplers: Sequence[float],
    azimuth_deg: float = 90.0,
    mode: str = "fda",
    reference: str = "amplitude",
    loading: float = 0.0,
    cov: Optional[CovarianceModel] = None,
) -> pd.DataFrame:
    """
    SINR loss across target Doppler at a fixed azimuth and the target range.

    With the unit-noise weight v = R̄⁻¹ q̄:

    - "amplitude": 20 log10(|v^H q̄| / ||q̄||²)
    - "power": 10 log10(q̄^H R̄⁻¹ q̄ / ||q̄||²)
    - "coherent": 20 log10(|v^H q̄| / (N_T N_R L)), a fixed reference shared by
      all modes

    The first two are 0 dB without interference in every mode; "coherent"
    is 0 dB there for FDA and MIMO and 20 log10 N_T for PA, whose steering
    carries the transmit gain.

    Returns:
        DataFrame with doppler_hz and loss_db
    """
    if reference not in LOSS_REFERENCES:
        raise DomainError(f"reference must be one of {LOSS_REFERENCES}, got '{reference}'")
    dopplers = np.asarray(dopplers, dtype=float)
    if dopplers.size == 0:
        raise DomainError("Doppler list is empty")

    target = scene.target
    psi = float(_grid_psi([azimuth_deg], target.depression)[0])
    look = psi if mode == "pa" else None
    cov = cov or covariance_total(scene, None, cfg, mode=mode, loading=loading, look_psi=look)
    lower = _lower_factor(cov)

    q = _scan_columns(cfg, target.range_m, psi, dopplers, mode, look)
    power = _whitened_power(lower, q)
    if reference == "coherent":
        loss = 20.0 * np.log10(power / (cfg.n_tx * cfg.n_rx * cfg.pulses))
    else:
        ratio = power / np.sum(np.abs(q) ** 2, axis=0)
        loss = 20.0 * np.log10(ratio) if reference == "amplitude" else 10.0 * np.log10(ratio)

    logger.info(f"SINR loss computed at {dopplers.size} Dopplers ({mode}, {reference})")
    return pd.DataFrame({"doppler_hz": dopplers, "loss_db": loss})
