"""Maximal clique enumeration over active graphs.

Clusters are the maximal cliques of size >= 2, using pivoted Bron-Kerbosch
with a degeneracy-order outer loop, the standard combination for sparse
real-world graphs. Output order (and therefore cluster ids) is the
lexicographic order of the sorted member lists, so identical inputs give
identical cluster ids on every run and platform.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError, FormatError
from .fileio import atomic_write_text, header_int, parse_header, read_text_lines
from .graph import ActiveGraph

CLUSTERS_MAGIC = "CORESTAB-CLUSTERS"


@dataclass(frozen=True)
class Cluster:
    """A maximal clique of hashtags with its mean pairwise edge support."""

    cluster_id: int
    members: tuple[str, ...]
    avg_support: float


def _degeneracy_order(adj: dict[str, set[str]]) -> list[str]:
    """Vertices in degeneracy order (repeatedly remove the min-degree vertex).

    Ties break toward the lexicographically smaller vertex so the order is
    deterministic.
    """
    degree = {v: len(ns) for v, ns in adj.items()}
    heap = [(d, v) for v, d in degree.items()]
    heapq.heapify(heap)
    removed: set[str] = set()
    order: list[str] = []
    while heap:
        d, v = heapq.heappop(heap)
        if v in removed or d != degree[v]:
            continue
        removed.add(v)
        order.append(v)
        for u in adj[v]:
            if u not in removed:
                degree[u] -= 1
                heapq.heappush(heap, (degree[u], u))
    return order


def _bron_kerbosch_pivot(adj, clique: set, candidates: set, excluded: set, out: list) -> None:
    if not candidates and not excluded:
        out.append(tuple(sorted(clique)))
        return
    pivot = max(candidates | excluded, key=lambda u: (len(adj[u] & candidates), u))
    for v in sorted(candidates - adj[pivot]):
        _bron_kerbosch_pivot(adj, clique | {v}, candidates & adj[v], excluded & adj[v], out)
        candidates = candidates - {v}
        excluded = excluded | {v}


def enumerate_maximal_cliques(graph: ActiveGraph) -> list[Cluster]:
    """All maximal cliques of size >= 2 as Clusters, each exactly once.

    Isolated vertices cannot reach size 2 and are excluded.
    """
    adj = graph.adjacency()
    order = _degeneracy_order(adj)
    position = {v: i for i, v in enumerate(order)}
    raw: list[tuple[str, ...]] = []
    for v in order:
        later = {u for u in adj[v] if position[u] > position[v]}
        earlier = {u for u in adj[v] if position[u] < position[v]}
        _bron_kerbosch_pivot(adj, {v}, later, earlier, raw)
    member_lists = sorted(members for members in raw if len(members) >= 2)
    return [
        Cluster(cluster_id, members, _avg_pair_support(members, graph))
        for cluster_id, members in enumerate(member_lists)
    ]


def _avg_pair_support(members: Sequence[str], graph: ActiveGraph) -> float:
    pairs = list(combinations(sorted(members), 2))
    if not pairs:
        raise DataError("average support needs at least one member pair")
    return sum(graph.support(a, b) for a, b in pairs) / len(pairs)


def cluster_avg_support(cluster: Cluster, graph: ActiveGraph) -> float:
    """Mean edge support over all member pairs; missing pairs are an error."""
    return _avg_pair_support(cluster.members, graph)


def is_clique(members: Iterable[str], graph: ActiveGraph) -> bool:
    return all(graph.has_edge(a, b) for a, b in combinations(sorted(set(members)), 2))


def write_clusters(clusters: Sequence[Cluster], day: int, path: str | Path) -> Path:
    lines = [f"{CLUSTERS_MAGIC} v1 day={day}"]
    for cluster in clusters:
        lines.append(f"{cluster.cluster_id} {cluster.avg_support:.6f} {','.join(cluster.members)}")
    return atomic_write_text(path, "\n".join(lines) + "\n")


def read_clusters(path: str | Path) -> tuple[int, list[Cluster]]:
    lines = read_text_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty clusters file")
    fields = parse_header(lines[0], CLUSTERS_MAGIC, path)
    day = header_int(fields, "day", path)
    clusters = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FormatError(f"{path}:{lineno}: unrecognized cluster line {line!r}")
        try:
            cluster_id = int(parts[0])
            avg_support = float(parts[1])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: bad cluster numbers in {line!r}") from None
        members = tuple(parts[2].split(","))
        if len(members) < 2:
            raise FormatError(f"{path}:{lineno}: cluster needs at least 2 members")
        clusters.append(Cluster(cluster_id, members, avg_support))
    return day, clusters
