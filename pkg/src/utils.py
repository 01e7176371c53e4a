"""Shared helpers: exceptions, seeding, hashing and small numeric utilities."""

import hashlib
import json
from typing import Any, Dict, Iterable, Mapping

import numpy as np


class DomainError(ValueError):
    """Raised when a physical input is outside its valid domain."""


class ValidationError(ValueError):
    """Raised when a run configuration fails schema or feasibility checks."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class SingularCovarianceError(RuntimeError):
    """Raised when a covariance matrix cannot be Cholesky-factored."""


# Fixed labels so that adding a consumer never reshuffles existing streams.
SEED_LABELS = ("chain", "clutter", "jamming", "noise", "selftest", "stap")


def spawn_generators(seed: int, labels: Iterable[str] = SEED_LABELS) -> Dict[str, np.random.Generator]:
    """
    Fan one 64-bit seed out to independent, label-keyed random generators.

    Args:
        seed: Master seed
        labels: Stream names; order is significant

    Returns:
        Dict mapping each label to its own numpy Generator
    """
    labels = list(labels)
    children = np.random.SeedSequence(int(seed)).spawn(len(labels))
    return {label: np.random.default_rng(child) for label, child in zip(labels, children)}


def config_hash(payload: Mapping[str, Any]) -> str:
    """Return the sha256 of a canonical JSON rendering of a config mapping."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def to_db(power: Any, floor: float = 1e-300) -> np.ndarray:
    """Convert linear power to dB, clamping at `floor` to keep values finite."""
    return 10.0 * np.log10(np.maximum(np.abs(np.asarray(power, dtype=float)), floor))


def from_db(value_db: Any) -> np.ndarray:
    """Convert dB to linear power."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


def aligned_relative_error(measured: np.ndarray, reference: np.ndarray) -> float:
    """
    Relative L2 error after the best complex scalar alignment of `reference`.

    Args:
        measured: Vector under test
        reference: Model vector; scaled by the least-squares complex gain

    Returns:
        ||measured - g*reference|| / ||measured||
    """
    measured = np.ravel(measured)
    reference = np.ravel(reference)
    if measured.shape != reference.shape:
        raise DomainError(f"shape mismatch {measured.shape} vs {reference.shape}")
    denom = np.vdot(reference, reference)
    if denom == 0 or not np.any(measured):
        raise DomainError("aligned error undefined for zero vectors")
    gain = np.vdot(reference, measured) / denom
    return float(np.linalg.norm(measured - gain * reference) / np.linalg.norm(measured))


def frange(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive float range with a half-step guard against round-off."""
    if step <= 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if stop < start:
        raise DomainError(f"grid stop {stop} is below start {start}")
    count = int(np.floor((stop - start) / step + 0.5)) + 1
    return start + step * np.arange(count)
