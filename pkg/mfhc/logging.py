"""mfhc logging: stderr + optional file per component."""

import logging
from pathlib import Path

from mfhc.config import config


def get_logger(component: str) -> logging.Logger:
    """Return a logger for mfhc.<component>. Writes to stderr, and to
    <MFHC_LOG_DIR>/mfhc_<component>.log when MFHC_LOG_DIR is set."""
    logger = logging.getLogger(f"mfhc.{component}")
    logger.setLevel(getattr(logging, config.LOG_LEVEL.upper(), logging.WARNING))
    if logger.handlers:
        return logger

    fmt = logging.Formatter("%(asctime)s %(levelname)s %(name)s %(message)s")

    sh = logging.StreamHandler()
    sh.setFormatter(fmt)
    logger.addHandler(sh)

    if config.LOG_DIR:
        log_dir = Path(config.LOG_DIR)
        log_dir.mkdir(parents=True, exist_ok=True)
        fh = logging.FileHandler(log_dir / f"mfhc_{component}.log", encoding="utf-8")
        fh.setFormatter(fmt)
        logger.addHandler(fh)

    logger.propagate = False
    return logger
