"""
Slow-time phase codes placing each transmit channel in its own Doppler band.

Element m (1-based) imposes e^{j2πφ_m t_l} on pulse l. After mixing with
carrier m' and demodulating by φ_{m'}, the contribution of carrier m sits at
D_m - D_{m'} relative to the desired term, where
D_m = ((f_c + (m-1)Δf)/f_c) f_td + mΔf + φ_m, taken modulo the PRF.
"""

from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

import numpy as np

try:
    from .config import SystemConfig, logger
    from .utils import DomainError
except ImportError:
    from src.config import SystemConfig, logger
    from src.utils import DomainError

# Absolute slack on gap comparisons, in Hz.
GAP_EPSILON_HZ = 1e-9


@dataclass(frozen=True)
class PhaseCode:
    """Per-element Doppler shifts φ_m (Hz) and their band centers at design_f_td."""

    phi: np.ndarray
    band_centers: np.ndarray
    design_f_td: float = 0.0

    def __len__(self) -> int:
        return len(self.phi)

    def on_bin(self, pulses: int, prf_hz: float, tol: float = 1e-6) -> bool:
        """True when every band center falls on a slow-time DFT bin."""
        bins = pulses * np.asarray(self.band_centers) / prf_hz
        return bool(np.all(np.abs(bins - np.round(bins)) <= tol))


@dataclass
class PhaseCodeReport:
    """Outcome of a feasibility check on a phase code."""

    feasible: bool
    min_gap: float
    required_gap: float
    min_adjacent_gap: float
    min_wraparound_gap: float
    worst_f_td: float
    violated_constraint: Optional[str] = None
    message: str = ""
    checked_f_td: Tuple[float, ...] = field(default_factory=tuple)


def doppler_centers(code: PhaseCode, f_td: float, cfg: SystemConfig) -> np.ndarray:
    """
    Band centers D_m for a target Doppler f_td, reduced into [0, PRF).

    Args:
        code: Phase code with N_T entries
        f_td: Target Doppler in Hz
        cfg: System configuration

    Returns:
        Array of N_T band centers in Hz
    """
    phi = np.asarray(code.phi, dtype=float)
    if len(phi) != cfg.n_tx:
        raise DomainError(f"phase code has {len(phi)} entries, expected {cfg.n_tx}")
    m = np.arange(1, cfg.n_tx + 1)
    # Offset and code first: their sum is exact for designed codes.
    static = m * cfg.freq_offset_hz + phi
    scaled_doppler = (cfg.carriers_hz / cfg.carrier_hz) * f_td
    return np.mod(np.mod(static, cfg.prf_hz) + scaled_doppler, cfg.prf_hz)


def design_phase_codes(cfg: SystemConfig) -> PhaseCode:
    """
    Equal-gap design φ_m = (m-1) PRF/N_T - mΔf.

    At f_td = 0 the centers land at (m-1) PRF/N_T, so all circular gaps equal
    PRF/N_T and channel m is shifted to DC by its own demodulation.
    """
    m = np.arange(1, cfg.n_tx + 1)
    phi = (m - 1) * cfg.prf_hz / cfg.n_tx - m * cfg.freq_offset_hz
    code = PhaseCode(phi=phi, band_centers=np.zeros(cfg.n_tx), design_f_td=0.0)
    centers = doppler_centers(code, 0.0, cfg)
    logger.info(f"Designed phase code for N_T={cfg.n_tx}: band spacing {cfg.prf_hz / cfg.n_tx:.6g} Hz")
    return PhaseCode(phi=phi, band_centers=centers, design_f_td=0.0)


def _pair_gaps(centers: np.ndarray, prf_hz: float) -> np.ndarray:
    """Circular gaps in element order: (D_{m+1} - D_m) mod PRF, last entry wraps N_T -> 1."""
    following = np.roll(centers, -1)
    gaps = np.mod(following - centers, prf_hz)
    if len(centers) == 1:
        gaps[:] = prf_hz
    return gaps


def circular_gaps(centers: Iterable[float], prf_hz: float) -> np.ndarray:
    """Gaps between circularly sorted band centers; sums to PRF."""
    ordered = np.sort(np.mod(np.asarray(list(centers), dtype=float), prf_hz))
    if len(ordered) == 1:
        return np.array([prf_hz])
    inner = np.diff(ordered)
    wrap = ordered[0] + prf_hz - ordered[-1]
    return np.append(inner, wrap)


def _classify(centers: np.ndarray, prf_hz: float) -> str:
    """Name the constraint behind the smallest sorted gap."""
    n = len(centers)
    order = np.argsort(np.mod(centers, prf_hz), kind="stable")
    gaps = circular_gaps(centers, prf_hz)
    k = int(np.argmin(gaps))
    lower, upper = int(order[k]), int(order[(k + 1) % n])
    if upper == (lower + 1) % n:
        return "wraparound_gap" if upper == 0 else "adjacent_gap"
    return "band_order"


def validate_phase_codes(
    code: PhaseCode,
    f_td_max: float,
    cfg: SystemConfig,
    tolerance: float = 0.0,
) -> PhaseCodeReport:
    """
    Check the mutual Doppler gap over f_td in {-f_td_max, 0, +f_td_max}.

    Gaps are affine in f_td, so the endpoints bound the whole interval.

    Args:
        code: Phase code to validate
        f_td_max: Largest expected |target Doppler| in Hz
        cfg: System configuration
        tolerance: Accepted shortfall below PRF/N_T in Hz

    Returns:
        PhaseCodeReport
    """
    if f_td_max < 0:
        raise DomainError(f"f_td_max must be non-negative, got {f_td_max}")

    required = cfg.prf_hz / cfg.n_tx
    checked = (-f_td_max, 0.0, f_td_max) if f_td_max > 0 else (0.0,)

    best = None
    min_adjacent = np.inf
    min_wrap = np.inf
    for f_td in checked:
        centers = doppler_centers(code, f_td, cfg)
        gaps = circular_gaps(centers, cfg.prf_hz)
        pair = _pair_gaps(centers, cfg.prf_hz)
        if cfg.n_tx > 1:
            min_adjacent = min(min_adjacent, float(np.min(pair[:-1])))
            min_wrap = min(min_wrap, float(pair[-1]))
        gap = float(np.min(gaps))
        if best is None or gap < best[0]:
            best = (gap, f_td, _classify(centers, cfg.prf_hz))

    min_gap, worst_f_td, constraint = best
    if cfg.n_tx == 1:
        min_adjacent = min_wrap = cfg.prf_hz

    feasible = min_gap >= required - tolerance - GAP_EPSILON_HZ
    violated = None if feasible else constraint
    message = f"min gap {min_gap:.9g} Hz at f_td = {worst_f_td:g} Hz (required {required:.9g} Hz)"

    if f_td_max >= required:
        feasible = False
        violated = "doppler_exceeds_band"
        message = f"f_td_max = {f_td_max:g} Hz is not below PRF/N_T = {required:.9g} Hz; " + message

    if not feasible:
        logger.warning(f"Phase code infeasible: {message}")

    return PhaseCodeReport(
        feasible=feasible,
        min_gap=min_gap,
        required_gap=required,
        min_adjacent_gap=float(min_adjacent),
        min_wraparound_gap=float(min_wrap),
        worst_f_td=float(worst_f_td),
        violated_constraint=violated,
        message=message,
        checked_f_td=tuple(float(f) for f in checked),
    )
