from __future__ import annotations

import logging
import sys
from typing import Optional


LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def setup_logging(level: Optional[str] = None) -> None:
    """Route package logs to stderr; stdout is reserved for data."""
    name = str(level or "WARNING").upper()
    if name not in LEVELS:
        name = "WARNING"

    root = logging.getLogger("trinomial_paths")
    root.setLevel(getattr(logging, name))
    if not any(getattr(h, "_trinomial_paths", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._trinomial_paths = True  # type: ignore[attr-defined]
        root.addHandler(handler)
