"""Core survival evaluation across future active graphs.

A core detected on a base day survives at horizon N when every pair of its
members is still an edge of the active graph N days later; the core is then
a clique there and hence contained in some maximal clique. The real stable
core ratio is the fraction of detected cores that survive. Reports slice
that ratio by average core score bins and by horizon, and a comparison
report lines methods up at a single horizon.

Ratios over zero cores are undefined and reported as explicit nulls (empty
CSV cells), never as 0.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .cliques import Cluster, enumerate_maximal_cliques
from .cores import Core, MethodConfig, detect_all
from .errors import ConfigError, DataError
from .fileio import atomic_write_text, fmt_num
from .graph import ActiveGraph

INF = float("inf")


@dataclass(frozen=True)
class SurvivalCell:
    total: int
    survived: int

    @property
    def ratio(self) -> float | None:
        return None if self.total == 0 else self.survived / self.total


@dataclass(frozen=True)
class SurvivalReport:
    """Per-bin and overall survival of one method's cores over horizons."""

    base_day: int
    method: str
    params: str
    horizons: tuple[int, ...]
    bin_edges: tuple[float, ...]
    per_bin: dict[str, dict[int, SurvivalCell]]
    overall: dict[int, SurvivalCell]


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    params: str
    cores_found: int
    real_core_ratio: float | None
    mean_avg_core_score: float | None


@dataclass(frozen=True)
class ComparisonReport:
    """One row per method configuration, all evaluated at a single horizon."""

    base_day: int
    horizon: int
    rows: tuple[ComparisonRow, ...]


def core_survives(core: Core, future: ActiveGraph) -> bool:
    """True when every member pair of the core is an edge of the future graph."""
    members = core.members
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if not future.has_edge(members[i], members[j]):
                return False
    return True


def real_core_ratio(cores: Sequence[Core], future: ActiveGraph) -> float | None:
    """Fraction of cores surviving in the future graph; None when empty."""
    if not cores:
        return None
    survived = sum(1 for core in cores if core_survives(core, future))
    return survived / len(cores)


def make_bins(bin_edges: Sequence[float]) -> list[tuple[float, float]]:
    """Half-open score bins covering the whole axis.

    Edges [2, 4] give (-inf,2), [2,4), [4,inf): an underflow bin is included
    so every score lands in exactly one bin.
    """
    edges = [float(e) for e in bin_edges]
    if any(b <= a for a, b in zip(edges, edges[1:])):
        raise ConfigError(f"bin edges must be strictly ascending, got {bin_edges!r}")
    if not edges:
        return [(-INF, INF)]
    bounds = [-INF] + edges + [INF]
    return list(zip(bounds, bounds[1:]))


def bin_label(lo: float, hi: float) -> str:
    left = "(-inf" if lo == -INF else f"[{fmt_num(lo)}"
    right = "inf)" if hi == INF else f"{fmt_num(hi)})"
    return f"{left},{right}"


def bin_by_avg_score(cores: Sequence[Core], bin_edges: Sequence[float]) -> dict[str, list[Core]]:
    """Assign each core to the score bin holding its avg_core_score.

    Every bin appears in the result (possibly empty), in ascending order.
    """
    bins = make_bins(bin_edges)
    grouped: dict[str, list[Core]] = {bin_label(lo, hi): [] for lo, hi in bins}
    for core in cores:
        score = core.avg_core_score
        if score is None:
            raise DataError("cannot bin a core without an average score")
        for lo, hi in bins:
            if lo <= score < hi:
                grouped[bin_label(lo, hi)].append(core)
                break
    return grouped


def _require_days(graphs: Mapping[int, ActiveGraph], days: Sequence[int]) -> None:
    missing = sorted({d for d in days if d not in graphs})
    if missing:
        listed = ", ".join(str(d) for d in missing)
        raise DataError(f"no active graph for day(s) {listed}")


def survival_report(
    cores: Sequence[Core],
    graphs: Mapping[int, ActiveGraph],
    base_day: int,
    horizons: Sequence[int],
    bin_edges: Sequence[float],
    method: str = "",
    params: str = "",
) -> SurvivalReport:
    """Aggregate survival of already-detected cores per bin and overall."""
    horizons = tuple(int(h) for h in horizons)
    _require_days(graphs, [base_day] + [base_day + h for h in horizons])
    grouped = bin_by_avg_score(cores, bin_edges)

    def cells_for(group: Sequence[Core]) -> dict[int, SurvivalCell]:
        cells = {}
        for h in horizons:
            future = graphs[base_day + h]
            survived = sum(1 for core in group if core_survives(core, future))
            cells[h] = SurvivalCell(len(group), survived)
        return cells

    per_bin = {label: cells_for(group) for label, group in grouped.items()}
    return SurvivalReport(
        base_day=base_day,
        method=method,
        params=params,
        horizons=horizons,
        bin_edges=tuple(float(e) for e in bin_edges),
        per_bin=per_bin,
        overall=cells_for(list(cores)),
    )


def survival_curves(
    graphs: Mapping[int, ActiveGraph],
    base_day: int,
    horizons: Sequence[int],
    config: MethodConfig,
    bin_edges: Sequence[float],
    clusters: Sequence[Cluster] | None = None,
) -> SurvivalReport:
    """Detect cores on the base day and evaluate their survival per horizon."""
    config.validate()
    _require_days(graphs, [base_day])
    if clusters is None:
        clusters = enumerate_maximal_cliques(graphs[base_day])
    cores = detect_all(clusters, graphs[base_day], config)
    return survival_report(
        cores, graphs, base_day, horizons, bin_edges, method=config.method, params=config.params_str()
    )


def comparison_report(
    detected: Sequence[tuple[MethodConfig, Sequence[Core]]],
    graphs: Mapping[int, ActiveGraph],
    base_day: int,
    horizon: int,
) -> ComparisonReport:
    """Compare already-detected core sets at one horizon."""
    _require_days(graphs, [base_day, base_day + horizon])
    future = graphs[base_day + horizon]
    rows = []
    for config, cores in detected:
        scores = [c.avg_core_score for c in cores if c.avg_core_score is not None]
        mean_score = round(sum(scores) / len(scores), 6) if scores else None
        rows.append(
            ComparisonRow(
                method=config.method,
                params=config.params_str(),
                cores_found=len(cores),
                real_core_ratio=real_core_ratio(cores, future),
                mean_avg_core_score=mean_score,
            )
        )
    return ComparisonReport(base_day=base_day, horizon=horizon, rows=tuple(rows))


def compare_methods(
    graphs: Mapping[int, ActiveGraph],
    base_day: int,
    horizon: int,
    configs: Sequence[MethodConfig],
    clusters: Sequence[Cluster] | None = None,
) -> ComparisonReport:
    """Detect cores per configuration on the base day and compare at one horizon."""
    for config in configs:
        config.validate()
    _require_days(graphs, [base_day, base_day + horizon])
    if clusters is None:
        clusters = enumerate_maximal_cliques(graphs[base_day])
    detected = [(config, detect_all(clusters, graphs[base_day], config)) for config in configs]
    return comparison_report(detected, graphs, base_day, horizon)


def _ratio_text(ratio: float | None) -> str:
    return "" if ratio is None else f"{ratio:.6f}"


def survival_csv(report: SurvivalReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bin", "horizon", "total", "survived", "ratio"])
    for label, cells in report.per_bin.items():
        for h in report.horizons:
            cell = cells[h]
            writer.writerow([label, h, cell.total, cell.survived, _ratio_text(cell.ratio)])
    for h in report.horizons:
        cell = report.overall[h]
        writer.writerow(["overall", h, cell.total, cell.survived, _ratio_text(cell.ratio)])
    return buf.getvalue()


def _cells_json(cells: Mapping[int, SurvivalCell]) -> list[dict]:
    return [
        {"horizon": h, "total": cell.total, "survived": cell.survived, "ratio": cell.ratio}
        for h, cell in cells.items()
    ]


def survival_json(report: SurvivalReport) -> str:
    doc = {
        "base_day": report.base_day,
        "method": report.method,
        "params": report.params,
        "horizons": list(report.horizons),
        "bin_edges": list(report.bin_edges),
        "bins": [
            {"bin": label, "cells": _cells_json(cells)} for label, cells in report.per_bin.items()
        ],
        "overall": _cells_json(report.overall),
    }
    return json.dumps(doc, indent=2) + "\n"


def comparison_csv(report: ComparisonReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["method", "params", "cores_found", "real_core_ratio", "mean_avg_core_score"])
    for row in report.rows:
        writer.writerow(
            [row.method, row.params, row.cores_found, _ratio_text(row.real_core_ratio),
             "" if row.mean_avg_core_score is None else f"{row.mean_avg_core_score:.6f}"]
        )
    return buf.getvalue()


def comparison_json(report: ComparisonReport) -> str:
    doc = {
        "base_day": report.base_day,
        "horizon": report.horizon,
        "rows": [
            {
                "method": row.method,
                "params": row.params,
                "cores_found": row.cores_found,
                "real_core_ratio": row.real_core_ratio,
                "mean_avg_core_score": row.mean_avg_core_score,
            }
            for row in report.rows
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def write_survival(report: SurvivalReport, path: str | Path, fmt: str = "csv") -> Path:
    text = survival_csv(report) if fmt == "csv" else survival_json(report)
    return atomic_write_text(path, text)


def write_comparison(report: ComparisonReport, path: str | Path, fmt: str = "csv") -> Path:
    text = comparison_csv(report) if fmt == "csv" else comparison_json(report)
    return atomic_write_text(path, text)
