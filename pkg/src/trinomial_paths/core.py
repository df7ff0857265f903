from __future__ import annotations

import json
import os
import platform
import sys
import time
from pathlib import Path
from typing import Any, Dict


DEFAULT_DIR = Path(".trinomial-paths")

# Enumeration beyond these depths is out of reach anyway; counting is not capped.
DEFAULT_MAX_DEPTH = 64
DEFAULT_ORACLE_MAX_DEPTH = 14


class LatticeError(ValueError):
    """Base class for domain errors raised by trinomial_paths."""


class InvalidPath(LatticeError):
    pass


class OutOfRange(LatticeError):
    pass


class DepthCap(LatticeError):
    pass


class NegativeInput(LatticeError):
    pass


class IndexMismatch(LatticeError):
    pass


class MissingWeight(LatticeError):
    pass


class NonzeroNegativePart(LatticeError):
    pass


class EmptyTerminal(LatticeError):
    pass


class EngineUnavailable(LatticeError):
    pass


def check_depth(depth: int, cap: int | None = None) -> int:
    d = int(depth)
    if d < 0:
        raise OutOfRange(f"depth must be >= 0, got {d}")
    if cap is not None and d > int(cap):
        raise DepthCap(f"depth {d} exceeds the configured cap {int(cap)}")
    return d


def check_terminal(depth: int, kstar: int) -> int:
    k = int(kstar)
    if abs(k) > int(depth):
        raise OutOfRange(f"terminal level {k} is unreachable at depth {int(depth)} (need |kstar| <= D)")
    return k


def iso_now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def read_text(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def read_json(path: Path) -> Dict[str, Any]:
    """Read a JSON object from disk; ValueError on malformed or non-object documents."""
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"invalid JSON in {path}: {e}") from e

    if not isinstance(data, dict):
        raise ValueError(f"expected JSON object in {path}, got {type(data).__name__}")

    return data


def write_json(path: Path, data: Dict[str, Any]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(data, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    os.replace(str(tmp), str(path))


def system_info() -> Dict[str, Any]:
    return {
        "platform": platform.platform(),
        "python": sys.version.split("\n")[0],
        "executable": sys.executable,
    }


def default_config() -> Dict[str, Any]:
    return {
        "version": 1,
        "limits": {
            "max_depth": DEFAULT_MAX_DEPTH,
            "oracle_max_depth": DEFAULT_ORACLE_MAX_DEPTH,
        },
        "aggregate": {
            "distinct_value_warning": 100_000,
        },
        "bench": {
            "depths": list(range(4, 17)),
            "fit_depths": [4, 12],
            "holdout_depths": [13, 16],
            "engines": ["count"],
            "kstar_policy": "worst",
            "trace_memory": False,
        },
        "selfcheck": {
            "max_depth": 8,
        },
        "logging": {
            "level": "WARNING",
        },
    }
