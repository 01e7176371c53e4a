"""Version information for FDA-STAP."""

__version__ = "0.2.1"
