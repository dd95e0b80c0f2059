"""Figure rendering for survival and comparison reports.

The CLI report path writes these PNGs next to the delimited output; the
evaluation module itself stays plot-free.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import ComparisonReport, SurvivalReport

# Fixed metadata keeps rendered PNGs byte-identical across reruns.
_PNG_METADATA = {"Software": "corestab"}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fig.savefig(fh, format="png", dpi=130, metadata=_PNG_METADATA)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    finally:
        plt.close(fig)
    return path


def render_survival_figure(report: SurvivalReport, path: str | Path) -> Path:
    """Line chart of real stable core ratio per horizon, one line per bin."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.0, 4.4))
    xs = list(report.horizons)
    for label, cells in report.per_bin.items():
        if all(cells[h].total == 0 for h in xs):
            continue
        ys = [cells[h].ratio if cells[h].ratio is not None else float("nan") for h in xs]
        ax.plot(xs, ys, marker="o", linewidth=1.4, label=f"score {label}")
    overall = [report.overall[h].ratio if report.overall[h].ratio is not None else float("nan") for h in xs]
    ax.plot(xs, overall, marker="s", linewidth=2.2, color="black", label="overall")
    ax.set_xlabel("days after base day")
    ax.set_ylabel("real stable core ratio")
    ax.set_ylim(-0.05, 1.05)
    title = report.method if not report.params or report.params == "none" else f"{report.method} ({report.params})"
    ax.set_title(f"core survival, {title}, base day {report.base_day}")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def _bar_figure(labels: list[str], values: list[float], ylabel: str, title: str) -> "plt.Figure":
    fig, ax = plt.subplots(figsize=(6.6, 4.2))
    xs = range(len(labels))
    ax.bar(xs, values, color="steelblue")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, rotation=20, ha="right", fontsize=8)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    return fig


def render_comparison_figures(report: ComparisonReport, stem: str | Path) -> list[Path]:
    """Three bar charts (cores found, ratio, mean score), one PNG each."""
    stem = Path(stem)
    labels = [
        row.method if row.params == "none" else f"{row.method}\n{row.params}" for row in report.rows
    ]
    metrics = [
        ("cores_found", "cores found", [float(r.cores_found) for r in report.rows]),
        ("real_core_ratio", "real stable core ratio", [r.real_core_ratio or 0.0 for r in report.rows]),
        ("avg_core_score", "mean average core score", [r.mean_avg_core_score or 0.0 for r in report.rows]),
    ]
    written = []
    for suffix, ylabel, values in metrics:
        fig = _bar_figure(labels, values, ylabel, f"{ylabel} at horizon {report.horizon}")
        written.append(_save(fig, stem.parent / f"{stem.name}_{suffix}.png"))
    return written
