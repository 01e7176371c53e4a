"""Scenario description and clutter/jamming/noise covariance construction."""

from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .config import (
        DEFAULT_CLUTTER_DEPRESSION_DEG,
        DEFAULT_CLUTTER_PATCHES,
        DEFAULT_CLUTTER_RANGE_M,
        DEFAULT_CLUTTER_SPAN_DEG,
        DEFAULT_CNR_DB,
        DEFAULT_JAMMER_AZIMUTH_DEG,
        DEFAULT_JAMMER_DEPRESSION_DEG,
        DEFAULT_JNR_DB,
        DEFAULT_TARGET_AZIMUTH_DEG,
        DEFAULT_TARGET_DEPRESSION_DEG,
        DEFAULT_TARGET_DOPPLER_HZ,
        DEFAULT_TARGET_RANGE_M,
        DEFAULT_TARGET_SNR_DB,
        SystemConfig,
        logger,
    )
    from .geometry import clutter_doppler, conic_angle, doppler_from_velocity, velocity_from_doppler
    from .model import mode_dimension, mode_steering, steering_receive
    from .utils import DomainError, from_db
except ImportError:
    from src.config import (
        DEFAULT_CLUTTER_DEPRESSION_DEG,
        DEFAULT_CLUTTER_PATCHES,
        DEFAULT_CLUTTER_RANGE_M,
        DEFAULT_CLUTTER_SPAN_DEG,
        DEFAULT_CNR_DB,
        DEFAULT_JAMMER_AZIMUTH_DEG,
        DEFAULT_JAMMER_DEPRESSION_DEG,
        DEFAULT_JNR_DB,
        DEFAULT_TARGET_AZIMUTH_DEG,
        DEFAULT_TARGET_DEPRESSION_DEG,
        DEFAULT_TARGET_DOPPLER_HZ,
        DEFAULT_TARGET_RANGE_M,
        DEFAULT_TARGET_SNR_DB,
        SystemConfig,
        logger,
    )
    from src.geometry import clutter_doppler, conic_angle, doppler_from_velocity, velocity_from_doppler
    from src.model import mode_dimension, mode_steering, steering_receive
    from src.utils import DomainError, from_db

CNR_MODES = ("per-patch", "total")
NOISE_POWER = 1.0


@dataclass(frozen=True)
class Target:
    """Point target; angles in radians, Doppler in Hz."""

    range_m: float = DEFAULT_TARGET_RANGE_M
    azimuth: float = float(np.deg2rad(DEFAULT_TARGET_AZIMUTH_DEG))
    depression: float = float(np.deg2rad(DEFAULT_TARGET_DEPRESSION_DEG))
    doppler_hz: float = DEFAULT_TARGET_DOPPLER_HZ
    snr_db: float = DEFAULT_TARGET_SNR_DB

    @property
    def conic(self) -> float:
        return conic_angle(self.azimuth, self.depression)

    @property
    def snr(self) -> float:
        return float(from_db(self.snr_db))

    def velocity_mps(self, cfg: SystemConfig) -> float:
        """Radial velocity that produces this Doppler at the carrier."""
        return velocity_from_doppler(self.doppler_hz, cfg.wavelength_m)


@dataclass(frozen=True)
class ClutterRing:
    """Ground clutter in one range cell, discretized into azimuth patches."""

    range_m: float = DEFAULT_CLUTTER_RANGE_M
    azimuth_span: Tuple[float, float] = tuple(float(a) for a in np.deg2rad(DEFAULT_CLUTTER_SPAN_DEG))
    patches: int = DEFAULT_CLUTTER_PATCHES
    depression: float = float(np.deg2rad(DEFAULT_CLUTTER_DEPRESSION_DEG))
    cnr_db: float = DEFAULT_CNR_DB


@dataclass(frozen=True)
class Jammer:
    """Barrage noise jammer: spatially coherent, white across pulses and channels."""

    azimuth: float = float(np.deg2rad(DEFAULT_JAMMER_AZIMUTH_DEG))
    depression: float = float(np.deg2rad(DEFAULT_JAMMER_DEPRESSION_DEG))
    jnr_db: float = DEFAULT_JNR_DB
    range_m: Optional[float] = None

    @property
    def conic(self) -> float:
        return conic_angle(self.azimuth, self.depression)

    @property
    def jnr(self) -> float:
        return float(from_db(self.jnr_db))


@dataclass(frozen=True)
class ClutterPatch:
    range_m: float
    azimuth: float
    psi: float
    doppler_hz: float
    cnr: float


@dataclass
class Scene:
    """Target plus interference environment."""

    target: Target = field(default_factory=Target)
    clutter_rings: List[ClutterRing] = field(default_factory=list)
    jammers: List[Jammer] = field(default_factory=list)
    cnr_mode: str = "per-patch"
    name: str = "scene"

    def __post_init__(self):
        if self.cnr_mode not in CNR_MODES:
            raise DomainError(f"cnr_mode must be one of {CNR_MODES}, got '{self.cnr_mode}'")


@dataclass
class CovarianceModel:
    """
    Interference-plus-noise covariance normalized to unit noise power.

    Only the total is held densely; labeled contributions ("clutter",
    "jamming", "noise") are rebuilt on request by term().

    Attributes:
        matrix: Hermitian positive-definite total
        noise_power: White-noise power σ² on the diagonal
        loading: Diagonal loading already included in matrix
        mode: Steering model the matrix was built for
    """

    matrix: np.ndarray
    noise_power: float = 1.0
    loading: float = 0.0
    mode: str = "fda"
    builders: Dict[str, Callable[[], np.ndarray]] = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.builders) + ("noise",)

    def term(self, label: str) -> np.ndarray:
        """Dense matrix of one labeled contribution."""
        if label == "noise":
            return self.noise_power * np.eye(self.dim, dtype=complex)
        if label not in self.builders:
            raise DomainError(f"unknown covariance term '{label}', expected one of {self.labels}")
        return self.builders[label]()


def default_scene(cnr_mode: str = "per-patch") -> Scene:
    """Target, one clutter ring and one barrage jammer at their default settings."""
    return Scene(
        target=Target(),
        clutter_rings=[ClutterRing()],
        jammers=[Jammer(range_m=DEFAULT_TARGET_RANGE_M)],
        cnr_mode=cnr_mode,
        name="default",
    )


def clutter_patches(ring: ClutterRing, cfg: SystemConfig, cnr_mode: str = "per-patch") -> List[ClutterPatch]:
    """
    Discretize a clutter ring into equally spaced azimuth patches.

    Args:
        ring: Clutter ring description
        cfg: System configuration (platform velocity, wavelength)
        cnr_mode: "per-patch" applies the ring CNR to every patch; "total"
            splits it evenly across patches

    Returns:
        List of ClutterPatch with conic angle and ground Doppler

    Raises:
        DomainError: If the span is empty or out of [0, π]
    """
    start, stop = ring.azimuth_span
    if ring.patches < 1:
        raise DomainError(f"clutter ring needs at least one patch, got {ring.patches}")
    if stop < start:
        raise DomainError(f"empty clutter span ({start}, {stop})")
    if cnr_mode not in CNR_MODES:
        raise DomainError(f"cnr_mode must be one of {CNR_MODES}, got '{cnr_mode}'")

    if ring.patches == 1:
        azimuths = np.array([(start + stop) / 2.0])
    else:
        azimuths = np.linspace(start, stop, ring.patches)
    psi = conic_angle(azimuths, np.full_like(azimuths, ring.depression))
    dopplers = clutter_doppler(psi, cfg)
    cnr = float(from_db(ring.cnr_db))
    if cnr_mode == "total":
        cnr /= ring.patches

    ceiling = doppler_from_velocity(cfg.platform_mps, cfg.wavelength_m)
    if np.any(np.abs(dopplers) > ceiling * (1 + 1e-12)):
        raise DomainError("clutter Doppler exceeds 2 v_a / λ")

    return [
        ClutterPatch(ring.range_m, float(a), float(p), float(f), cnr)
        for a, p, f in zip(azimuths, np.atleast_1d(psi), np.atleast_1d(dopplers))
    ]


def scene_patches(scene: Scene, cfg: SystemConfig) -> List[ClutterPatch]:
    """All patches of every clutter ring in the scene."""
    patches: List[ClutterPatch] = []
    for ring in scene.clutter_rings:
        patches.extend(clutter_patches(ring, cfg, scene.cnr_mode))
    return patches


def _patch_matrix(
    patches: Sequence[ClutterPatch],
    w: Optional[Sequence[complex]],
    cfg: SystemConfig,
    mode: str,
    look_psi: Optional[float],
) -> np.ndarray:
    """Columns sqrt(CNR_i) q̄_i for each patch."""
    columns = [
        np.sqrt(p.cnr) * mode_steering(p.range_m, p.psi, p.doppler_hz, cfg, mode=mode, w=w, look_psi=look_psi)
        for p in patches
    ]
    return np.stack(columns, axis=1)


def covariance_clutter(
    patches: Sequence[ClutterPatch],
    w: Optional[Sequence[complex]],
    cfg: SystemConfig,
    mode: str = "fda",
    look_psi: Optional[float] = None,
) -> np.ndarray:
    """
    Clutter covariance Σ CNR_i q̄_i q̄_i^H.

    Summation runs in patch order through one matrix product, so results are
    reproducible for a fixed patch list.
    """
    dim = mode_dimension(cfg, mode)
    if len(patches) == 0:
        return np.zeros((dim, dim), dtype=complex)
    q = _patch_matrix(patches, w, cfg, mode, look_psi)
    return q @ q.conj().T


def covariance_jamming(jammers: Sequence[Jammer], cfg: SystemConfig, mode: str = "fda") -> np.ndarray:
    """Jamming covariance I_L ⊗ [Σ JNR a_R a_R^H] ⊗ I_{N_T} (no transmit factor in PA mode)."""
    dim = mode_dimension(cfg, mode)
    if len(jammers) == 0:
        return np.zeros((dim, dim), dtype=complex)
    core = np.zeros((cfg.n_rx, cfg.n_rx), dtype=complex)
    for jammer in jammers:
        a = steering_receive(jammer.conic, cfg)
        core += jammer.jnr * np.outer(a, a.conj())
    if mode != "pa":
        core = np.kron(core, np.eye(cfg.n_tx))
    return np.kron(np.eye(cfg.pulses), core)


def sample_jamming_snapshot(jammer: Jammer, cfg: SystemConfig, rng: np.random.Generator) -> np.ndarray:
    """
    Draw one jamming snapshot α ū ⊗ a_R ⊗ ũ.

    ū (length L) and ũ (length N_T) are standard circular complex Gaussian;
    α has magnitude sqrt(JNR) and uniform phase.
    """
    def cgauss(size):
        return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2.0)

    slow = cgauss(cfg.pulses)
    channels = cgauss(cfg.n_tx)
    alpha = np.sqrt(jammer.jnr) * np.exp(2j * np.pi * rng.random())
    return alpha * np.kron(slow, np.kron(steering_receive(jammer.conic, cfg), channels))


def sample_clutter_snapshot(
    patches: Sequence[ClutterPatch],
    w: Optional[Sequence[complex]],
    cfg: SystemConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """One clutter snapshot Σ sqrt(CNR_i) e^{jU_i} q̄_i with independent uniform phases."""
    q = _patch_matrix(patches, w, cfg, "fda", None)
    phases = np.exp(2j * np.pi * rng.random(len(patches)))
    return q @ phases


def _hermitize(matrix: np.ndarray) -> None:
    """Average a square matrix with its conjugate transpose in place."""
    upper = np.triu_indices(matrix.shape[0], 1)
    mean = 0.5 * (matrix[upper] + matrix.T[upper].conj())
    matrix[upper] = mean
    matrix.T[upper] = mean.conj()
    diagonal = np.diag_indices_from(matrix)
    matrix[diagonal] = matrix[diagonal].real


def covariance_total(
    scene: Scene,
    w: Optional[Sequence[complex]],
    cfg: SystemConfig,
    mode: str = "fda",
    loading: float = 0.0,
    look_psi: Optional[float] = None,
) -> CovarianceModel:
    """
    Total covariance R̄ = R_clutter + R_jamming + σ²I (+ loading·I), σ² = 1.

    Args:
        scene: Scenario
        w: Transmit weights (FDA/MIMO), defaults to ones
        cfg: System configuration
        mode: "fda", "mimo" or "pa"
        loading: Extra diagonal loading ε >= 0
        look_psi: PA look direction; defaults to the target conic angle

    Returns:
        CovarianceModel holding the dense total and builders for its terms
    """
    if loading < 0:
        raise DomainError(f"loading must be non-negative, got {loading}")
    if mode == "pa" and look_psi is None:
        look_psi = scene.target.conic

    patches = scene_patches(scene, cfg)
    builders = {
        "clutter": partial(covariance_clutter, patches, w, cfg, mode=mode, look_psi=look_psi),
        "jamming": partial(covariance_jamming, scene.jammers, cfg, mode=mode),
    }
    matrix = builders["clutter"]()
    matrix += builders["jamming"]()
    matrix[np.diag_indices_from(matrix)] += NOISE_POWER + loading
    _hermitize(matrix)

    logger.info(
        f"Covariance built: mode={mode}, dim={matrix.shape[0]}, "
        f"{len(patches)} clutter patches, {len(scene.jammers)} jammers"
    )
    return CovarianceModel(matrix=matrix, noise_power=NOISE_POWER, loading=loading, mode=mode, builders=builders)
