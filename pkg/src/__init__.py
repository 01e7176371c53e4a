"""FDA-STAP - frequency diverse array airborne radar simulator with range-space-time adaptive processing."""

from .version import __version__
__author__ = "FDA-STAP Team"
