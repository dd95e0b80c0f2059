"""Stable-core detection inside clique clusters.

Each detector takes one cluster (a maximal clique of an active graph) and
returns at most one core, the subset of members whose pairwise ties look
persistent. Three strategies are provided:

  top_n           grow the strongest edge into a core of exactly n members
  above_average   admit members whose ties to the whole current core reach
                  the cluster's mean pairwise edge support
  edge_threshold  same growth against a fixed support floor, plus a guard
                  that returns no core when even the strongest edge sits
                  below the floor

Edges are ranked by support, then Jaccard, then the lexicographically
smaller pair; every selection step uses that total order, so detection is
fully deterministic. The threshold-style growth always admits the remaining
candidate whose weakest tie into the current core is strongest. When that
candidate misses the floor every other candidate misses it too, so the loop
stops; the admitted members therefore form a prefix of a sequence that does
not depend on the floor at all, which is what makes edge_threshold cores
shrink or stay equal as the floor rises.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .cliques import Cluster, cluster_avg_support
from .errors import ConfigError, DataError, FormatError
from .fileio import atomic_write_text, fmt_num, header_int, parse_header, read_text_lines
from .graph import ActiveGraph, Pair, canonical_pair

CORES_MAGIC = "CORESTAB-CORES"

METHODS = ("top_n", "above_average", "edge_threshold")

SCORE_DECIMALS = 6


@dataclass(frozen=True)
class Core:
    """A detected stable-core candidate (possibly empty: nothing found)."""

    members: tuple[str, ...]
    method: str
    source_cluster: int
    avg_core_score: float | None

    def is_empty(self) -> bool:
        return not self.members


@dataclass(frozen=True)
class MethodConfig:
    """One detector configuration: method name plus its parameter."""

    method: str
    n: int | None = None
    threshold: float | None = None

    def validate(self) -> "MethodConfig":
        if self.method not in METHODS:
            raise ConfigError(f"unknown core detection method {self.method!r} (expected one of {', '.join(METHODS)})")
        if self.method == "top_n":
            if self.n is None:
                raise ConfigError("method top_n requires a core size n")
            if self.n < 2:
                raise ConfigError("top_n core size must be at least 2")
        elif self.method == "edge_threshold":
            if self.threshold is None:
                raise ConfigError("method edge_threshold requires a support threshold")
            if self.threshold < 0:
                raise ConfigError("edge support threshold must be non-negative")
        return self

    def label(self) -> str:
        if self.method == "top_n":
            return f"top_n_{self.n}"
        if self.method == "edge_threshold":
            return f"edge_threshold_{fmt_num(self.threshold)}"
        return self.method

    def params_str(self) -> str:
        if self.method == "top_n":
            return f"n={self.n}"
        if self.method == "edge_threshold":
            return f"thr={fmt_num(self.threshold)}"
        return "none"

    @classmethod
    def parse(cls, text: str) -> "MethodConfig":
        """Parse 'top_n:3', 'above_average' or 'edge_threshold:6'."""
        method, _, param = text.strip().partition(":")
        try:
            if method == "top_n" and param:
                return cls("top_n", n=int(param)).validate()
            if method == "edge_threshold" and param:
                return cls("edge_threshold", threshold=float(param)).validate()
        except ValueError:
            raise ConfigError(f"bad parameter in method config {text!r}") from None
        if param:
            raise ConfigError(f"method {method!r} takes no parameter (got {text!r})")
        return cls(method).validate()

    @classmethod
    def from_params_str(cls, method: str, params: str) -> "MethodConfig":
        if params in ("none", "", "-"):
            return cls(method).validate()
        key, _, value = params.partition("=")
        try:
            if key == "n":
                return cls(method, n=int(value)).validate()
            if key == "thr":
                return cls(method, threshold=float(value)).validate()
        except ValueError:
            pass
        raise ConfigError(f"bad method params {params!r}")


def edge_rank_key(support: int, jaccard: float, pair: Pair) -> tuple:
    """Sort key of the edge total order: support desc, Jaccard desc, pair asc.

    Minimizing this key picks the top-ranked edge.
    """
    return (-support, -jaccard, pair)


def _tie_key(graph: ActiveGraph, tag: str, member: str) -> tuple:
    pair = canonical_pair(tag, member)
    support, jac = graph.edge(tag, member)
    return edge_rank_key(support, jac, pair)


def _strongest_tie(graph: ActiveGraph, tag: str, core: Sequence[str]) -> tuple:
    return min(_tie_key(graph, tag, member) for member in core)


def _weakest_tie(graph: ActiveGraph, tag: str, core: Sequence[str]) -> tuple:
    return max(_tie_key(graph, tag, member) for member in core)


def top_scored_edge(cluster: Cluster, graph: ActiveGraph) -> Pair:
    """The top-ranked edge among all member pairs of the cluster."""
    members = sorted(cluster.members)
    if len(members) < 2:
        raise DataError("top_scored_edge needs a cluster with at least 2 members")
    return min(
        combinations(members, 2),
        key=lambda pair: edge_rank_key(*graph.edge(*pair), pair),
    )


def _make_core(members: Iterable[str], method: str, cluster: Cluster, graph: ActiveGraph) -> Core:
    members = tuple(sorted(members))
    if not members:
        return Core((), method, cluster.cluster_id, None)
    pairs = list(combinations(members, 2))
    score = round(sum(graph.support(a, b) for a, b in pairs) / len(pairs), SCORE_DECIMALS)
    return Core(members, method, cluster.cluster_id, score)


def top_n_core(cluster: Cluster, graph: ActiveGraph, n: int) -> Core:
    """Grow the top edge by the candidate with the strongest tie into the
    core until exactly n members are reached; clusters smaller than n give
    an empty core."""
    if n < 2:
        raise ConfigError("top_n core size must be at least 2")
    members = sorted(cluster.members)
    if len(members) < 2:
        raise DataError("top_n_core needs a cluster with at least 2 members")
    if len(members) < n:
        return _make_core((), "top_n", cluster, graph)
    core = list(top_scored_edge(cluster, graph))
    remaining = set(members) - set(core)
    while len(core) < n:
        tag = min(remaining, key=lambda t: (_strongest_tie(graph, t, core), t))
        core.append(tag)
        remaining.discard(tag)
    return _make_core(core, "top_n", cluster, graph)


def _grow_by_floor(members: Sequence[str], graph: ActiveGraph, seed: Pair, floor: float) -> list[str]:
    """Admit candidates in strongest-weakest-tie order while they meet the floor.

    The admission test is on the candidate's weakest tie into the current
    core, so once the best candidate fails, all remaining candidates fail.
    """
    core = list(seed)
    remaining = set(members) - set(seed)
    while remaining:
        tag = min(remaining, key=lambda t: (_weakest_tie(graph, t, core), t))
        weakest_support = -_weakest_tie(graph, tag, core)[0]
        if weakest_support < floor:
            break
        core.append(tag)
        remaining.discard(tag)
    return core


def above_average_core(cluster: Cluster, graph: ActiveGraph) -> Core:
    """Grow the top edge, admitting tags whose every tie into the current
    core reaches the cluster's mean pairwise support (non-strict)."""
    if len(cluster.members) < 2:
        raise DataError("above_average_core needs a cluster with at least 2 members")
    avg = cluster_avg_support(cluster, graph)
    seed = top_scored_edge(cluster, graph)
    grown = _grow_by_floor(sorted(cluster.members), graph, seed, avg)
    return _make_core(grown, "above_average", cluster, graph)


def edge_threshold_core(cluster: Cluster, graph: ActiveGraph, threshold: float) -> Core:
    """Same growth as above_average_core against a fixed support floor.

    If even the seed edge's support misses the floor there is no core.
    """
    if threshold < 0:
        raise ConfigError("edge support threshold must be non-negative")
    if len(cluster.members) < 2:
        raise DataError("edge_threshold_core needs a cluster with at least 2 members")
    seed = top_scored_edge(cluster, graph)
    if graph.support(*seed) < threshold:
        return _make_core((), "edge_threshold", cluster, graph)
    grown = _grow_by_floor(sorted(cluster.members), graph, seed, threshold)
    return _make_core(grown, "edge_threshold", cluster, graph)


def detect_core(cluster: Cluster, graph: ActiveGraph, config: MethodConfig) -> Core:
    config.validate()
    if config.method == "top_n":
        return top_n_core(cluster, graph, config.n)
    if config.method == "above_average":
        return above_average_core(cluster, graph)
    return edge_threshold_core(cluster, graph, config.threshold)


def detect_all(clusters: Sequence[Cluster], graph: ActiveGraph, config: MethodConfig) -> list[Core]:
    """Run one detector over every cluster.

    Empty cores are dropped. Clusters can yield identical member sets;
    duplicates are removed keeping the first in cluster order so core counts
    never double-count the same hashtag set.
    """
    config.validate()
    found: list[Core] = []
    seen: set[frozenset[str]] = set()
    for cluster in clusters:
        core = detect_core(cluster, graph, config)
        if core.is_empty():
            continue
        key = frozenset(core.members)
        if key in seen:
            continue
        seen.add(key)
        found.append(core)
    return found


def write_cores(cores: Sequence[Core], day: int, config: MethodConfig, path: str | Path) -> Path:
    header = f"{CORES_MAGIC} v1 day={day} method={config.method} params={config.params_str()}"
    lines = [header]
    for core in cores:
        lines.append(f"{core.source_cluster} {core.avg_core_score:.6f} {','.join(core.members)}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def read_cores(path: str | Path) -> tuple[int, MethodConfig, list[Core]]:
    lines = read_text_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty cores file")
    fields = parse_header(lines[0], CORES_MAGIC, path)
    day = header_int(fields, "day", path)
    if "method" not in fields or "params" not in fields:
        raise FormatError(f"{path}: cores header is missing method= or params=")
    try:
        config = MethodConfig.from_params_str(fields["method"], fields["params"])
    except ConfigError as exc:
        raise FormatError(f"{path}: {exc}") from None
    cores = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"{path}:{lineno}: unrecognized core line {line!r}")
        try:
            source_cluster = int(parts[0])
            score = float(parts[1])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad core numbers in {line!r}") from None
        members = tuple(parts[2].split(","))
        if len(members) < 2:
            raise FormatError(f"{path}:{lineno}: core needs at least 2 members")
        cores.append(Core(members, config.method, source_cluster, score))
    return day, config, cores
