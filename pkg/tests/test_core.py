import json
from pathlib import Path

import pytest

from trinomial_paths.configio import config_int, find_config_path, load_config_for_project, write_config
from trinomial_paths.core import (
    DepthCap,
    LatticeError,
    OutOfRange,
    check_depth,
    check_terminal,
    default_config,
    read_json,
    write_json,
)


def test_read_json_strict(tmp_path: Path) -> None:
    p = tmp_path / "bad.json"
    p.write_text("{bad json", encoding="utf-8")
    with pytest.raises(ValueError):
        read_json(p)

    p2 = tmp_path / "arr.json"
    p2.write_text("[]", encoding="utf-8")
    with pytest.raises(ValueError):
        read_json(p2)

    p3 = tmp_path / "ok.json"
    write_json(p3, {"a": 1})
    assert read_json(p3) == {"a": 1}
    assert not (tmp_path / "ok.json.tmp").exists()


def test_guards() -> None:
    assert check_depth(5) == 5
    assert check_depth(5, 5) == 5
    with pytest.raises(DepthCap):
        check_depth(6, 5)
    with pytest.raises(OutOfRange):
        check_depth(-1)
    assert check_terminal(3, -3) == -3
    with pytest.raises(OutOfRange):
        check_terminal(3, 4)
    assert issubclass(DepthCap, LatticeError) and issubclass(LatticeError, ValueError)


def test_config_defaults_when_missing(tmp_path: Path) -> None:
    cfg, path = load_config_for_project(tmp_path)
    assert cfg == default_config()
    assert path == tmp_path / ".trinomial-paths" / "config.yml"


def test_config_yaml_deep_merge(tmp_path: Path) -> None:
    (tmp_path / "trinomial_paths.yml").write_text("limits:\n  max_depth: 20\nbench:\n  kstar_policy: sweep\n", encoding="utf-8")
    cfg, path = load_config_for_project(tmp_path)
    assert path.name == "trinomial_paths.yml"
    assert cfg["limits"] == {"max_depth": 20, "oracle_max_depth": 14}
    assert cfg["bench"]["kstar_policy"] == "sweep"
    assert cfg["bench"]["fit_depths"] == [4, 12]


def test_config_json_and_bad_files(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    state = tmp_path / ".trinomial-paths"
    state.mkdir()
    (state / "config.json").write_text(json.dumps({"selfcheck": {"max_depth": 3}}), encoding="utf-8")
    cfg, _ = load_config_for_project(tmp_path)
    assert config_int(cfg, "selfcheck", "max_depth", 8) == 3

    (state / "config.json").write_text("{nope", encoding="utf-8")
    with caplog.at_level("WARNING", logger="trinomial_paths"):
        cfg, _ = load_config_for_project(tmp_path)
    assert cfg == default_config()
    assert any("using defaults" in r.getMessage() for r in caplog.records)


def test_config_int_fallback() -> None:
    cfg = {"limits": {"max_depth": "deep"}}
    assert config_int(cfg, "limits", "max_depth", 64) == 64
    assert config_int(cfg, "missing", "x", 7) == 7


def test_write_config_round_trip(tmp_path: Path) -> None:
    path = find_config_path(tmp_path)
    write_config(path, default_config())
    assert path.exists()
    cfg, found = load_config_for_project(tmp_path)
    assert found == path
    assert cfg == default_config()


def test_config_bad_yaml_falls_back(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    (tmp_path / "trinomial_paths.yml").write_text("limits: [unclosed\n", encoding="utf-8")
    with caplog.at_level("WARNING", logger="trinomial_paths"):
        cfg, path = load_config_for_project(tmp_path)
    assert cfg == default_config()
    assert path.name == "trinomial_paths.yml"
    assert any("using defaults" in r.getMessage() for r in caplog.records)

    (tmp_path / "trinomial_paths.yml").write_text("- just\n- a list\n", encoding="utf-8")
    cfg, _ = load_config_for_project(tmp_path)
    assert cfg == default_config()


def test_write_config_json(tmp_path: Path) -> None:
    path = tmp_path / ".trinomial-paths" / "config.json"
    write_config(path, {"limits": {"max_depth": 9}})
    assert path.read_text(encoding="utf-8").endswith("}\n")
    assert not path.with_suffix(".json.tmp").exists()
    cfg, found = load_config_for_project(tmp_path)
    assert found == path
    assert cfg["limits"]["max_depth"] == 9
