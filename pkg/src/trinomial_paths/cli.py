from __future__ import annotations

import argparse
import contextlib
import csv
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Any, Dict, Iterator, List, Optional, Sequence

from .aggregate import class_aggregate, path_sum_distribution
from .bench import BENCH_ENGINES, KSTAR_POLICIES, decay_report, fit_cost_model, run_bench, totals_by_depth, write_bench_csv
from .configio import config_int, find_config_path, load_config_for_project, write_config
from .core import DEFAULT_MAX_DEPTH, DEFAULT_ORACLE_MAX_DEPTH, EngineUnavailable, LatticeError, default_config, iso_now, system_info, write_json
from .lexgen import enumerate_all
from .logs import LEVELS, setup_logging
from .massshift import ENGINES as COUNT_ENGINES
from .massshift import count_total, iter_states, iter_unique
from .oracle import dfs_enumerate, dfs_enumerate_memo, oracle_classes
from .selfcheck import selfcheck
from .weights import WeightTable, format_value


ENUM_ENGINES = ("dfs", "memo", "lexgen", "unique")


@dataclass(frozen=True)
class CLIError(RuntimeError):
    """CLI failure with an explicit process exit code."""

    message: str
    exit_code: int = 2

    def __str__(self) -> str:
        return self.message


def _config(args: argparse.Namespace) -> Dict[str, Any]:
    cfg = getattr(args, "cfg", None)
    if isinstance(cfg, dict):
        return cfg
    cfg, _path = load_config_for_project(Path.cwd())
    return cfg


@contextlib.contextmanager
def _output(out: str) -> Iterator[IO[str]]:
    if not out:
        yield sys.stdout
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        yield fh


def _emit_json(payload: Dict[str, Any], out: str) -> None:
    if out:
        write_json(Path(out), payload)
    else:
        print(json.dumps(payload, indent=2))


def _limits(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, int]:
    max_depth = getattr(args, "max_depth", None)
    return {
        "max_depth": int(max_depth) if max_depth is not None else config_int(cfg, "limits", "max_depth", DEFAULT_MAX_DEPTH),
        "oracle_max_depth": config_int(cfg, "limits", "oracle_max_depth", DEFAULT_ORACLE_MAX_DEPTH),
    }


def cmd_init(args: argparse.Namespace) -> int:
    root = Path.cwd()
    path = find_config_path(root)
    created = False
    if not path.exists():
        write_config(path, default_config())
        created = True
    print(json.dumps({"config_path": str(path), "created": created}, indent=2))
    return 0


def _path_records(engine: str, D: int, k: int, limits: Dict[str, int]) -> Iterator[Dict[str, Any]]:
    if engine == "dfs":
        paths = dfs_enumerate(D, k, max_depth=limits["oracle_max_depth"])
    elif engine == "memo":
        paths = dfs_enumerate_memo(D, k, max_depth=limits["oracle_max_depth"])
    else:
        paths = enumerate_all(D, k, max_depth=limits["max_depth"])
    for p in paths:
        yield {"path": list(p)}


def cmd_enumerate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    limits = _limits(args, cfg)
    D, k, engine, fmt = int(args.depth), int(args.terminal), str(args.engine), str(args.format)

    if engine == "unique":
        if args.seed_order:
            # negative terminals are enumerated as the mirror of |kstar|
            for state in iter_states(D, abs(k)):
                row = state.to_dict()
                if k < 0:
                    row["mirrored"] = True
                print(json.dumps(row), file=sys.stderr)
        records: Iterator[Dict[str, Any]] = (r.to_dict() for r in iter_unique(D, k, max_depth=limits["max_depth"]))
    else:
        records = _path_records(engine, D, k, limits)

    t0 = time.perf_counter()
    if fmt == "json":
        items = list(records)
        payload: Dict[str, Any] = {
            "schema": "trinomial_paths.enumerate.v1",
            "D": D,
            "kstar": k,
            "engine": engine,
            "count": len(items),
            "items": items,
        }
        if not args.no_timing:
            payload["elapsed_s"] = time.perf_counter() - t0
        _emit_json(payload, args.out)
        return 0

    with _output(args.out) as fh:
        if fmt == "jsonl":
            for rec in records:
                fh.write(json.dumps(rec) + "\n")
        else:
            writer = csv.writer(fh, lineterminator="\n")
            if engine == "unique":
                writer.writerow(["k_minus", "counts", "stage", "m"])
                for rec in records:
                    writer.writerow([rec["k_minus"], ";".join(str(c) for c in rec["counts"]), rec["stage"], rec["m"]])
            else:
                writer.writerow(["path"])
                for rec in records:
                    writer.writerow([";".join(str(x) for x in rec["path"])])
    return 0


def cmd_count(args: argparse.Namespace) -> int:
    cfg = _config(args)
    limits = _limits(args, cfg)
    t0 = time.perf_counter()
    report = count_total(
        int(args.depth),
        int(args.terminal),
        engine=str(args.engine),
        oracle_check=bool(args.oracle_check),
        oracle_max_depth=limits["oracle_max_depth"],
    )
    payload = {"schema": "trinomial_paths.count.v1", **report.to_dict()}
    if not args.no_timing:
        payload["elapsed_s"] = time.perf_counter() - t0
    _emit_json(payload, args.out)
    if report.oracle_checked and not report.oracle_ok:
        return 1
    return 0


def _weights(args: argparse.Namespace) -> WeightTable:
    if args.weights:
        if args.weight_base is not None or args.weight_step is not None:
            raise CLIError("use either --weights or --weight-base/--weight-step, not both")
        path = Path(args.weights)
        if not path.exists():
            raise CLIError(f"weights file not found: {path}")
        return WeightTable.from_csv(path)
    if args.weight_base is None and args.weight_step is None:
        raise CLIError("weights required: pass --weights <csv> or --weight-base/--weight-step")
    return WeightTable.affine(args.weight_base or "0", args.weight_step or "0")


def cmd_aggregate(args: argparse.Namespace) -> int:
    cfg = _config(args)
    limits = _limits(args, cfg)
    w = _weights(args)
    D, k = int(args.depth), int(args.terminal)
    threshold = config_int(cfg, "aggregate", "distinct_value_warning", 100_000)

    t0 = time.perf_counter()
    if args.engine == "classes":
        dist = class_aggregate(oracle_classes(D, k, max_depth=limits["oracle_max_depth"]), w)
    else:
        dist = path_sum_distribution(D, k, w, warn_threshold=threshold)
    avg = dist.mean()

    payload = {
        **dist.to_dict(),
        "D": D,
        "kstar": k,
        "engine": str(args.engine),
        "weights": w.to_dict(),
        "average": format_value(avg),
        "average_float": float(avg),
    }
    if not args.no_timing:
        payload["elapsed_s"] = time.perf_counter() - t0
    _emit_json(payload, args.out)
    return 0


def _parse_depths(text: str) -> List[int]:
    out: List[int] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _config(args)
    limits = _limits(args, cfg)
    bench_cfg = cfg.get("bench") if isinstance(cfg.get("bench"), dict) else {}

    try:
        depths = _parse_depths(args.depths) if args.depths else [int(d) for d in bench_cfg.get("depths", [])]
    except ValueError as e:
        raise CLIError(f"bad --depths value {args.depths!r} ({e})") from e
    engines = [e.strip() for e in args.engines.split(",")] if args.engines else list(bench_cfg.get("engines") or ["count"])
    bad = [e for e in engines if e not in BENCH_ENGINES]
    if bad:
        raise CLIError(f"unknown engine(s) {bad}; expected {list(BENCH_ENGINES)}")
    policy = args.kstar_policy or str(bench_cfg.get("kstar_policy") or "worst")
    trace = bool(args.trace_memory or bench_cfg.get("trace_memory"))

    records = run_bench(
        depths,
        kstar_policy=policy,
        engines=engines,
        max_depth=limits["max_depth"],
        oracle_max_depth=limits["oracle_max_depth"],
        trace_memory=trace,
    )
    timing = not args.no_timing

    if args.format == "csv":
        with _output(args.out) as fh:
            write_bench_csv(records, fh, timing=timing)
        return 0

    payload: Dict[str, Any] = {
        "schema": "trinomial_paths.bench.v1",
        "kstar_policy": policy,
        "records": [r.to_dict(timing=timing) for r in records],
    }
    if timing:
        payload["generated_at"] = iso_now()
        payload["system"] = system_info()
    class_engine = next((e for e in ("count", "unique") if e in engines), None)
    if class_engine is not None:
        fit = tuple(int(x) for x in bench_cfg.get("fit_depths") or (4, 12))
        hold = tuple(int(x) for x in bench_cfg.get("holdout_depths") or (13, 16))
        try:
            model = fit_cost_model(totals_by_depth(records, class_engine), fit_depths=fit, holdout_depths=hold)  # type: ignore[arg-type]
        except ValueError as e:
            payload["cost_model_error"] = str(e)
        else:
            payload["cost_model"] = model.to_dict()
            payload["decay"] = decay_report(max(depths), model.fitted_C)
    _emit_json(payload, args.out)
    return 0


def cmd_selfcheck(args: argparse.Namespace) -> int:
    cfg = _config(args)
    limits = _limits(args, cfg)
    D_max = int(args.depth) if args.depth is not None else config_int(cfg, "selfcheck", "max_depth", 8)
    report = selfcheck(D_max, oracle_max_depth=limits["oracle_max_depth"])
    _emit_json(report, args.out)
    return 0 if report["ok"] else 1


def _add_common(sp: argparse.ArgumentParser, *, terminal: bool = True) -> None:
    sp.add_argument("--depth", type=int, required=True, help="Tree depth D")
    if terminal:
        sp.add_argument("--terminal", type=int, default=0, help="Terminal level kstar (default 0)")
    sp.add_argument("--out", default="", help="Write output to this path instead of stdout")
    sp.add_argument("--no-timing", action="store_true", help="Omit timing fields (byte-stable output)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trinomial-paths", description="trinomial-paths: enumerate, count and aggregate trinomial tree paths")
    p.add_argument("--log-level", default=None, choices=list(LEVELS), help="Override logging.level from config")
    sub = p.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("init", help="Write the default config (.trinomial-paths/config.yml) if none exists")
    sp.set_defaults(func=cmd_init)

    sp = sub.add_parser("enumerate", help="Stream every path, or every class key, ending at (kstar, D)")
    _add_common(sp)
    sp.add_argument("--engine", default="unique", choices=list(ENUM_ENGINES))
    sp.add_argument("--format", default="jsonl", choices=["jsonl", "json", "csv"], help="Output format")
    sp.add_argument("--max-depth", type=int, default=None, help="Override limits.max_depth")
    sp.add_argument("--seed-order", action="store_true", help="Print each stage seed and window to stderr (unique engine)")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("count", help="Exact number of path classes per stage and in total")
    _add_common(sp)
    sp.add_argument("--engine", default="table", choices=list(COUNT_ENGINES))
    sp.add_argument("--oracle-check", action="store_true", help="Also count classes by brute force and compare")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("aggregate", help="Path-sum value distribution and its average")
    _add_common(sp)
    sp.add_argument("--engine", default="dp", choices=["dp", "classes"], help="Value DP, or oracle classes folded by weight")
    sp.add_argument("--weights", default="", help="CSV with header level,weight")
    sp.add_argument("--weight-base", default=None, help="Affine weights: base + step*k")
    sp.add_argument("--weight-step", default=None)
    sp.set_defaults(func=cmd_aggregate)

    sp = sub.add_parser("bench", help="Measure engines over a depth range and fit the cost model")
    sp.add_argument("--depths", default="", help="e.g. 4-16 or 4,6,8 (default bench.depths)")
    sp.add_argument("--engines", default="", help=f"Comma list from {','.join(BENCH_ENGINES)} (default bench.engines)")
    sp.add_argument("--kstar-policy", default="", choices=["", *KSTAR_POLICIES])
    sp.add_argument("--trace-memory", action="store_true", help="Record peak traced memory per run")
    sp.add_argument("--format", default="json", choices=["json", "csv"])
    sp.add_argument("--out", default="")
    sp.add_argument("--no-timing", action="store_true")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("selfcheck", help="Cross-check every engine against the oracle up to a depth")
    sp.add_argument("--depth", type=int, default=None, help="Largest D checked (default selfcheck.max_depth)")
    sp.add_argument("--out", default="")
    sp.set_defaults(func=cmd_selfcheck)

    return p


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    p = build_parser()
    args = p.parse_args(argv)

    cfg, _path = load_config_for_project(Path.cwd())
    args.cfg = cfg
    level = args.log_level or str((cfg.get("logging") or {}).get("level") or "WARNING")
    setup_logging(level)

    try:
        return int(args.func(args))
    except CLIError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except EngineUnavailable as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (LatticeError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
