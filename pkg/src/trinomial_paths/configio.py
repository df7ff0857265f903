from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Tuple

import yaml

from .core import DEFAULT_DIR, default_config, read_json, read_text, write_json, write_text


logger = logging.getLogger(__name__)

CONFIG_CANDIDATES = [
    Path("trinomial_paths.yml"),
    Path("trinomial_paths.yaml"),
    DEFAULT_DIR / "config.yml",
    DEFAULT_DIR / "config.yaml",
    DEFAULT_DIR / "config.json",
]


def find_config_path(project_root: Path) -> Path:
    for rel in CONFIG_CANDIDATES:
        p = project_root / rel
        if p.exists():
            return p
    # Default to YAML in the state dir.
    return project_root / DEFAULT_DIR / "config.yml"


def _deep_merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for k, v in (overlay or {}).items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_merge(out[k], v)
        else:
            out[k] = v
    return out


def load_config_for_project(project_root: Path) -> Tuple[Dict[str, Any], Path]:
    path = find_config_path(project_root)

    if not path.exists():
        return default_config(), path

    suffix = path.suffix.lower()
    if suffix in (".yml", ".yaml"):
        try:
            data = yaml.safe_load(read_text(path))
            if isinstance(data, dict):
                return _deep_merge(default_config(), data), path
        except (OSError, yaml.YAMLError) as e:
            logger.warning("could not read %s (%s); using defaults", path, e)
            return default_config(), path
        logger.warning("%s is not a mapping; using defaults", path)
        return default_config(), path

    try:
        data = read_json(path)
    except (OSError, ValueError) as e:
        logger.warning("could not read %s (%s); using defaults", path, e)
        return default_config(), path
    return _deep_merge(default_config(), data), path


def write_config(path: Path, cfg: Dict[str, Any]) -> None:
    if path.suffix.lower() in (".yml", ".yaml"):
        write_text(path, yaml.safe_dump(cfg, sort_keys=False, allow_unicode=True))
    else:
        write_json(path, cfg)


def config_int(cfg: Dict[str, Any], section: str, key: str, default: int) -> int:
    block = cfg.get(section)
    if not isinstance(block, dict):
        return int(default)
    try:
        return int(block.get(key, default))
    except (TypeError, ValueError):
        logger.warning("config %s.%s is not an integer; using %s", section, key, default)
        return int(default)
