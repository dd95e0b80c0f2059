"""corestab: hashtag co-occurrence snapshots, clique clusters and stable cores.

Pipeline: posts -> daily snapshots -> threshold-filtered active graphs ->
maximal-clique clusters -> stable-core detection (top_n, above_average,
edge_threshold) -> survival evaluation across future days.
"""

from .cliques import Cluster, cluster_avg_support, enumerate_maximal_cliques, read_clusters, write_clusters
from .cores import (
    Core,
    MethodConfig,
    above_average_core,
    detect_all,
    detect_core,
    edge_rank_key,
    edge_threshold_core,
    read_cores,
    top_n_core,
    top_scored_edge,
    write_cores,
)
from .errors import ConfigError, CorestabError, DataError, FormatError
from .evaluation import (
    ComparisonReport,
    ComparisonRow,
    SurvivalCell,
    SurvivalReport,
    bin_by_avg_score,
    compare_methods,
    comparison_report,
    core_survives,
    real_core_ratio,
    survival_curves,
    survival_report,
    write_comparison,
    write_survival,
)
from .graph import (
    ActiveGraph,
    Snapshot,
    build_snapshot,
    filter_active,
    jaccard,
    read_active,
    read_snapshot,
    write_active,
    write_snapshot,
)
from .ingest import (
    DEFAULT_EPOCH,
    IngestStats,
    PostRecord,
    bucket_by_day,
    day_index,
    normalize_hashtag,
    parse_posts,
    write_posts_jsonl,
)
from .synth import SynthConfig, generate, load_synth_config

__version__ = "0.1.0"

__all__ = [
    "ActiveGraph",
    "Cluster",
    "ComparisonReport",
    "ComparisonRow",
    "ConfigError",
    "Core",
    "CorestabError",
    "DataError",
    "DEFAULT_EPOCH",
    "FormatError",
    "IngestStats",
    "MethodConfig",
    "PostRecord",
    "Snapshot",
    "SurvivalCell",
    "SurvivalReport",
    "SynthConfig",
    "above_average_core",
    "bin_by_avg_score",
    "bucket_by_day",
    "build_snapshot",
    "cluster_avg_support",
    "compare_methods",
    "comparison_report",
    "core_survives",
    "day_index",
    "detect_all",
    "detect_core",
    "edge_rank_key",
    "edge_threshold_core",
    "enumerate_maximal_cliques",
    "filter_active",
    "generate",
    "jaccard",
    "load_synth_config",
    "normalize_hashtag",
    "parse_posts",
    "read_active",
    "read_clusters",
    "read_cores",
    "read_snapshot",
    "real_core_ratio",
    "survival_curves",
    "survival_report",
    "top_n_core",
    "top_scored_edge",
    "write_active",
    "write_clusters",
    "write_comparison",
    "write_cores",
    "write_posts_jsonl",
    "write_snapshot",
    "write_survival",
]
