"""mfhc: harmonic weak Maaß forms, Harish-Chandra modules and Weil representations."""

from mfhc.config import config
from mfhc.logging import get_logger

__all__ = ["config", "get_logger"]
