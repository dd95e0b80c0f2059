"""Command-line front end: one subcommand per pipeline stage.

Stages communicate through files in a run directory, so expensive artifacts
(snapshots, clique enumerations) are reused across experiments with
different thresholds, methods or bins:

    run/
      buckets/day_0000.jsonl        per-day post buckets
      snapshots/day_0000.snapshot   daily co-occurrence graphs
      active/day_0000.active        threshold-filtered graphs
      clusters/day_0000.clusters    maximal cliques
      cores/day_0000.<label>.cores  detected cores per method config
      reports/                      survival / comparison tables + figures
      config/<stage>.json           parameters of each stage run

Exit codes: 0 success, 1 usage or config error, 2 data error, 3 internal
error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import date, datetime
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import __version__
from .cliques import enumerate_maximal_cliques, read_clusters, write_clusters
from .cores import MethodConfig, detect_all, read_cores, write_cores
from .errors import ConfigError, CorestabError, DataError
from .evaluation import comparison_report, survival_report, write_comparison, write_survival
from .fileio import atomic_write_text
from .graph import ActiveGraph, build_snapshot, filter_active, read_active, read_snapshot, write_active, write_snapshot
from .ingest import DEFAULT_EPOCH, IngestStats, bucket_by_day, parse_posts, write_posts_jsonl
from .synth import generate, load_synth_config

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3

DEFAULT_BINS = "2,4,6,8,10"
DEFAULT_HORIZONS = "1-10"
DEFAULT_COMPARE_CONFIGS = ("top_n:3", "top_n:5", "above_average", "edge_threshold:6")

ENV_RUN_DIR = "CORESTAB_RUN_DIR"


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- run layout


def _run_dir(args) -> Path:
    run = args.run_dir or os.environ.get(ENV_RUN_DIR)
    if not run:
        raise ConfigError(f"no run directory: pass --run-dir or set {ENV_RUN_DIR}")
    return Path(run)


def _bucket_path(run: Path, day: int) -> Path:
    return run / "buckets" / f"day_{day:04d}.jsonl"


def _snapshot_path(run: Path, day: int) -> Path:
    return run / "snapshots" / f"day_{day:04d}.snapshot"


def _active_path(run: Path, day: int) -> Path:
    return run / "active" / f"day_{day:04d}.active"


def _clusters_path(run: Path, day: int) -> Path:
    return run / "clusters" / f"day_{day:04d}.clusters"


def _cores_path(run: Path, day: int, label: str) -> Path:
    return run / "cores" / f"day_{day:04d}.{label}.cores"


def _list_days(directory: Path, suffix: str) -> list[int]:
    if not directory.is_dir():
        return []
    days = []
    for entry in sorted(directory.glob(f"day_*{suffix}")):
        stem = entry.name[len("day_"):-len(suffix)]
        try:
            days.append(int(stem))
        except ValueError:
            continue
    return days


def _clear_day_files(directory: Path, suffix: str) -> None:
    # Stale per-day files from an earlier, larger run would silently leak
    # into downstream stages; a stage that rewrites a directory owns it.
    if directory.is_dir():
        for entry in directory.glob(f"day_*{suffix}"):
            entry.unlink()


def _save_stage_config(run: Path, stage: str, params: dict) -> None:
    serializable = {k: (str(v) if isinstance(v, (Path, date)) else v) for k, v in params.items()}
    atomic_write_text(run / "config" / f"{stage}.json", json.dumps(serializable, indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------- arg parsing


def _parse_date(text: str) -> date:
    try:
        return datetime.strptime(text, "%Y-%m-%d").date()
    except ValueError:
        raise ConfigError(f"bad date {text!r}, expected YYYY-MM-DD") from None


def _parse_int_list(text: str, what: str) -> list[int]:
    """Parse '1,2,5' and '1-10' (ranges inclusive), also mixed '0,2-4'."""
    values: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition("-")
        try:
            if sep and lo:
                start, stop = int(lo), int(hi)
                if stop < start:
                    raise ConfigError(f"descending range {chunk!r} in {what}")
                values.extend(range(start, stop + 1))
            else:
                values.append(int(chunk))
        except ValueError:
            raise ConfigError(f"bad integer {chunk!r} in {what}") from None
    if not values:
        raise ConfigError(f"empty {what}")
    return values


def _parse_bins(text: str) -> list[float]:
    try:
        edges = [float(chunk) for chunk in text.split(",") if chunk.strip()]
    except ValueError:
        raise ConfigError(f"bad bin edges {text!r}") from None
    if not edges:
        raise ConfigError("empty bin edges")
    return edges


def _method_config(args) -> MethodConfig:
    if not args.method:
        raise ConfigError("no detection method: pass --method top_n|above_average|edge_threshold")
    return MethodConfig(args.method, n=args.n, threshold=args.threshold).validate()


def _compare_configs(args) -> list[MethodConfig]:
    texts = args.config or list(DEFAULT_COMPARE_CONFIGS)
    configs = [MethodConfig.parse(text) for text in texts]
    labels = [c.label() for c in configs]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"duplicate method configs: {', '.join(labels)}")
    return configs


def _map_days(fn: Callable[[int], None], days: Iterable[int], jobs: int) -> None:
    days = list(days)
    if jobs <= 1 or len(days) <= 1:
        for day in days:
            fn(day)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        list(pool.map(fn, days))


def _require_file(path: Path, what: str) -> Path:
    if not path.is_file():
        raise DataError(f"missing {what} file {path}; run the producing stage first")
    return path


# ------------------------------------------------------------------- stages


def _stage_ingest(run: Path, inputs: Sequence[Path], epoch: date, input_format: str) -> dict[int, int]:
    stats = IngestStats()
    buckets: dict[int, list] = {}
    for path in inputs:
        fmt = input_format
        if fmt == "auto":
            fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
        day_map = bucket_by_day(parse_posts(path, fmt, stats), epoch, stats)
        for day, posts in day_map.items():
            buckets.setdefault(day, []).extend(posts)
    _clear_day_files(run / "buckets", ".jsonl")
    for day in sorted(buckets):
        write_posts_jsonl(_bucket_path(run, day), buckets[day])
    print(
        f"ingest: {stats.parsed} posts parsed, {stats.malformed} malformed, "
        f"{stats.dropped_pre_epoch} pre-epoch dropped -> {len(buckets)} day buckets"
    )
    return {day: len(posts) for day, posts in buckets.items()}


def _stage_build(run: Path, jobs: int) -> list[int]:
    days = _list_days(run / "buckets", ".jsonl")
    if not days:
        raise DataError(f"no bucket files under {run / 'buckets'}; run ingest first")
    _clear_day_files(run / "snapshots", ".snapshot")

    def build_one(day: int) -> None:
        posts = list(parse_posts(_bucket_path(run, day), "jsonl"))
        write_snapshot(build_snapshot(posts, day), _snapshot_path(run, day))

    _map_days(build_one, days, jobs)
    print(f"build: {len(days)} snapshots")
    return days


def _stage_activate(run: Path, thr_v: int, thr_e: int, thr_j: float, jobs: int) -> list[int]:
    if thr_v < 0 or thr_e < 0 or thr_j < 0:
        raise ConfigError("thresholds must be non-negative")
    days = _list_days(run / "snapshots", ".snapshot")
    if not days:
        raise DataError(f"no snapshot files under {run / 'snapshots'}; run build first")
    _clear_day_files(run / "active", ".active")

    def activate_one(day: int) -> None:
        snapshot = read_snapshot(_snapshot_path(run, day))
        write_active(filter_active(snapshot, thr_v, thr_e, thr_j), _active_path(run, day))

    _map_days(activate_one, days, jobs)
    print(f"activate: {len(days)} active graphs (thr_v={thr_v} thr_e={thr_e} thr_j={thr_j})")
    return days


def _stage_cliques(run: Path, days: Sequence[int] | None, jobs: int) -> list[int]:
    if days is None:
        days = _list_days(run / "active", ".active")
        if not days:
            raise DataError(f"no active graph files under {run / 'active'}; run activate first")
        _clear_day_files(run / "clusters", ".clusters")

    def cliques_one(day: int) -> None:
        graph = read_active(_require_file(_active_path(run, day), "active graph"))
        write_clusters(enumerate_maximal_cliques(graph), day, _clusters_path(run, day))

    _map_days(cliques_one, days, jobs)
    print(f"cliques: clusters written for {len(days)} day(s)")
    return list(days)


def _stage_cores(run: Path, day: int, config: MethodConfig) -> int:
    graph = read_active(_require_file(_active_path(run, day), "active graph"))
    file_day, clusters = read_clusters(_require_file(_clusters_path(run, day), "clusters"))
    if file_day != day:
        raise DataError(f"clusters file {_clusters_path(run, day)} is for day {file_day}, not {day}")
    cores = detect_all(clusters, graph, config)
    write_cores(cores, day, config, _cores_path(run, day, config.label()))
    print(f"cores: {len(cores)} {config.label()} core(s) on day {day}")
    return len(cores)


def _load_graphs(run: Path, days: Iterable[int]) -> dict[int, ActiveGraph]:
    graphs = {}
    for day in sorted(set(days)):
        graphs[day] = read_active(_require_file(_active_path(run, day), "active graph"))
    return graphs


def _cores_for(run: Path, day: int, config: MethodConfig, graphs: dict[int, ActiveGraph]) -> list:
    """Reuse the cores file when present and fresh; otherwise detect in memory.

    A cores file older than the clusters or active graph it came from is
    stale (thresholds changed, corpus re-ingested) and is ignored.
    """
    path = _cores_path(run, day, config.label())
    inputs = [_require_file(_clusters_path(run, day), "clusters"), _active_path(run, day)]
    newest_input = max(p.stat().st_mtime for p in inputs if p.is_file())
    if path.is_file() and path.stat().st_mtime >= newest_input:
        file_day, file_config, cores = read_cores(path)
        if file_day != day or file_config != config:
            raise DataError(f"cores file {path} does not match day {day} / {config.label()}")
        return cores
    _, clusters = read_clusters(_clusters_path(run, day))
    return detect_all(clusters, graphs[day], config)


def _stage_eval(
    run: Path,
    base_day: int,
    horizons: Sequence[int],
    bins: Sequence[float],
    config: MethodConfig,
    fmt: str,
    figures: bool,
) -> Path:
    graphs = _load_graphs(run, [base_day] + [base_day + h for h in horizons])
    cores = _cores_for(run, base_day, config, graphs)
    report = survival_report(
        cores, graphs, base_day, horizons, bins, method=config.method, params=config.params_str()
    )
    out = run / "reports" / f"survival_{config.label()}.{fmt}"
    write_survival(report, out, fmt)
    if figures:
        from .plots import render_survival_figure

        render_survival_figure(report, out.with_suffix(".png"))
    print(f"eval: wrote {out}")
    return out


def _stage_compare(
    run: Path,
    base_day: int,
    horizon: int,
    configs: Sequence[MethodConfig],
    fmt: str,
    figures: bool,
) -> Path:
    graphs = _load_graphs(run, [base_day, base_day + horizon])
    detected = [(config, _cores_for(run, base_day, config, graphs)) for config in configs]
    report = comparison_report(detected, graphs, base_day, horizon)
    out = run / "reports" / f"comparison_h{horizon}.{fmt}"
    write_comparison(report, out, fmt)
    if figures:
        from .plots import render_comparison_figures

        render_comparison_figures(report, out.parent / f"comparison_h{horizon}")
    print(f"compare: wrote {out}")
    return out


def _stage_synth(config_path: Path, out: Path) -> int:
    config = load_synth_config(config_path)
    corpus = generate(config)
    posts = [post for day in sorted(corpus) for post in corpus[day]]
    write_posts_jsonl(out, posts)
    print(f"synth: {len(posts)} posts over {config.days} day(s) -> {out}")
    return len(posts)


# ----------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    run = _run_dir(args)
    epoch = _parse_date(args.epoch)
    inputs = [Path(p) for p in args.inputs]
    _save_stage_config(run, "ingest", {"inputs": [str(p) for p in inputs], "epoch": epoch, "input_format": args.input_format})
    _stage_ingest(run, inputs, epoch, args.input_format)
    return EXIT_OK


def cmd_build(args) -> int:
    run = _run_dir(args)
    _save_stage_config(run, "build", {"jobs": args.jobs})
    _stage_build(run, args.jobs)
    return EXIT_OK


def cmd_activate(args) -> int:
    run = _run_dir(args)
    _save_stage_config(run, "activate", {"thr_v": args.thr_v, "thr_e": args.thr_e, "thr_j": args.thr_j, "jobs": args.jobs})
    _stage_activate(run, args.thr_v, args.thr_e, args.thr_j, args.jobs)
    return EXIT_OK


def cmd_cliques(args) -> int:
    run = _run_dir(args)
    days = [args.day] if args.day is not None else None
    _save_stage_config(run, "cliques", {"day": args.day, "jobs": args.jobs})
    _stage_cliques(run, days, args.jobs)
    return EXIT_OK


def cmd_cores(args) -> int:
    run = _run_dir(args)
    config = _method_config(args)
    _save_stage_config(run, "cores", {"day": args.day, "method": config.method, "params": config.params_str()})
    _stage_cores(run, args.day, config)
    return EXIT_OK


def cmd_eval(args) -> int:
    run = _run_dir(args)
    config = _method_config(args)
    horizons = _parse_int_list(args.horizons, "--horizons")
    bins = _parse_bins(args.bins)
    _save_stage_config(
        run,
        "eval",
        {
            "base_day": args.base_day,
            "horizons": horizons,
            "bins": bins,
            "method": config.method,
            "params": config.params_str(),
            "format": args.format,
        },
    )
    _stage_eval(run, args.base_day, horizons, bins, config, args.format, not args.no_figures)
    return EXIT_OK


def cmd_compare(args) -> int:
    run = _run_dir(args)
    configs = _compare_configs(args)
    _save_stage_config(
        run,
        "compare",
        {
            "base_day": args.base_day,
            "horizon": args.horizon,
            "configs": [c.label() for c in configs],
            "format": args.format,
        },
    )
    _stage_compare(run, args.base_day, args.horizon, configs, args.format, not args.no_figures)
    return EXIT_OK


def cmd_synth(args) -> int:
    _stage_synth(Path(args.config), Path(args.out))
    return EXIT_OK


def cmd_pipeline(args) -> int:
    run = _run_dir(args)
    epoch = _parse_date(args.epoch)
    configs = _compare_configs(args)
    horizons = _parse_int_list(args.horizons, "--horizons")
    bins = _parse_bins(args.bins)
    if not args.inputs and not args.synth_config:
        raise ConfigError("pipeline needs post files or --synth-config")
    _save_stage_config(
        run,
        "pipeline",
        {
            "inputs": list(args.inputs),
            "synth_config": args.synth_config,
            "epoch": epoch,
            "input_format": args.input_format,
            "thr_v": args.thr_v,
            "thr_e": args.thr_e,
            "thr_j": args.thr_j,
            "configs": [c.label() for c in configs],
            "base_day": args.base_day,
            "horizons": horizons,
            "horizon": args.horizon,
            "bins": bins,
            "jobs": args.jobs,
            "format": args.format,
        },
    )
    inputs = [Path(p) for p in args.inputs]
    if args.synth_config:
        corpus_path = run / "corpus.jsonl"
        _stage_synth(Path(args.synth_config), corpus_path)
        inputs.append(corpus_path)
    _stage_ingest(run, inputs, epoch, args.input_format)
    _stage_build(run, args.jobs)
    _stage_activate(run, args.thr_v, args.thr_e, args.thr_j, args.jobs)
    _stage_cliques(run, None, args.jobs)
    for config in configs:
        _stage_cores(run, args.base_day, config)
        _stage_eval(run, args.base_day, horizons, bins, config, args.format, not args.no_figures)
    _stage_compare(run, args.base_day, args.horizon, configs, args.format, not args.no_figures)
    print("pipeline: done")
    return EXIT_OK


# ------------------------------------------------------------------- parser


def _add_run_dir(parser) -> None:
    parser.add_argument("--run-dir", default=None, help=f"run directory (default: ${ENV_RUN_DIR})")


def _add_method_args(parser) -> None:
    parser.add_argument("--method", choices=("top_n", "above_average", "edge_threshold"), help="core detection method")
    parser.add_argument("--n", type=int, default=None, help="core size for top_n")
    parser.add_argument("--threshold", type=float, default=None, help="support floor for edge_threshold")


def _add_report_args(parser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="report file format")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corestab", description="Hashtag co-occurrence graphs, clique clusters and stable cores.")
    parser.add_argument("--version", action="version", version=f"corestab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="bucket post files into per-day JSONL files")
    _add_run_dir(p)
    p.add_argument("inputs", nargs="+", help="post files (JSONL or CSV)")
    p.add_argument("--epoch", default=DEFAULT_EPOCH.isoformat(), help="day-0 date, YYYY-MM-DD")
    p.add_argument("--input-format", choices=("auto", "jsonl", "csv"), default="auto")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build", help="build daily snapshots from buckets")
    _add_run_dir(p)
    p.add_argument("--jobs", type=int, default=1, help="parallel day workers")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("activate", help="filter snapshots into active graphs")
    _add_run_dir(p)
    p.add_argument("--thr-v", type=int, default=0, help="vertex support threshold (strict >)")
    p.add_argument("--thr-e", type=int, default=0, help="edge support threshold (strict >)")
    p.add_argument("--thr-j", type=float, default=0.0, help="edge Jaccard threshold (strict >)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_activate)

    p = sub.add_parser("cliques", help="enumerate maximal cliques of active graphs")
    _add_run_dir(p)
    p.add_argument("--day", type=int, default=None, help="single day (default: all active days)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_cliques)

    p = sub.add_parser("cores", help="detect stable cores in one day's clusters")
    _add_run_dir(p)
    p.add_argument("--day", type=int, default=0)
    _add_method_args(p)
    p.set_defaults(func=cmd_cores)

    p = sub.add_parser("eval", help="survival report for one method over horizons")
    _add_run_dir(p)
    p.add_argument("--base-day", type=int, default=0)
    p.add_argument("--horizons", default=DEFAULT_HORIZONS, help="e.g. 1-10 or 1,3,7")
    p.add_argument("--bins", default=DEFAULT_BINS, help="score bin edges, e.g. 2,4,6,8,10")
    _add_method_args(p)
    _add_report_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="compare method configs at one horizon")
    _add_run_dir(p)
    p.add_argument("--base-day", type=int, default=0)
    p.add_argument("--horizon", type=int, default=7)
    p.add_argument(
        "--config",
        action="append",
        default=None,
        help="method config like top_n:3 or edge_threshold:6 (repeatable; default: %s)" % ", ".join(DEFAULT_COMPARE_CONFIGS),
    )
    _add_report_args(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="generate a synthetic post corpus")
    p.add_argument("--config", required=True, help="synth config file (key = value lines)")
    p.add_argument("--out", required=True, help="output JSONL corpus path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("pipeline", help="run every stage end to end")
    _add_run_dir(p)
    p.add_argument("inputs", nargs="*", help="post files (JSONL or CSV)")
    p.add_argument("--synth-config", default=None, help="generate a corpus first from this synth config")
    p.add_argument("--epoch", default=DEFAULT_EPOCH.isoformat())
    p.add_argument("--input-format", choices=("auto", "jsonl", "csv"), default="auto")
    p.add_argument("--thr-v", type=int, default=0)
    p.add_argument("--thr-e", type=int, default=0)
    p.add_argument("--thr-j", type=float, default=0.0)
    p.add_argument("--config", action="append", default=None, help="method config (repeatable)")
    p.add_argument("--base-day", type=int, default=0)
    p.add_argument("--horizons", default=DEFAULT_HORIZONS)
    p.add_argument("--horizon", type=int, default=7, help="comparison horizon")
    p.add_argument("--bins", default=DEFAULT_BINS)
    p.add_argument("--jobs", type=int, default=1)
    _add_report_args(p)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"corestab {args.command}: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"corestab {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CorestabError as exc:
        print(f"corestab {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - map anything unexpected to exit 3
        print(f"corestab {args.command}: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
