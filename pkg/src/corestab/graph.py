"""Daily hashtag co-occurrence snapshots and threshold-filtered active graphs.

A snapshot weights every hashtag by its user support (distinct users who
posted it that day) and every co-occurring pair by its edge support
(distinct users who posted both tags in one post) plus a Jaccard weight:
edge support divided by the size of the union of the two tags' user sets.

An active graph keeps only vertices and edges strictly above the three
thresholds (vertex support, edge support, Jaccard). Vertices left isolated
by edge filtering are retained; they passed the vertex rule.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping

from .errors import DataError, FormatError
from .fileio import atomic_write_text, fmt_num, header_float, header_int, parse_header, read_text_lines
from .ingest import PostRecord

Pair = tuple[str, str]

SNAPSHOT_MAGIC = "CORESTAB-SNAPSHOT"
ACTIVE_MAGIC = "CORESTAB-ACTIVE"

# Jaccard weights are kept at 6 decimal places from the moment a snapshot is
# finalized, matching the file format, so a graph loaded from disk behaves
# identically to the in-memory graph it was written from.
JACCARD_DECIMALS = 6


def canonical_pair(a: str, b: str) -> Pair:
    """Order an undirected edge key lexicographically; self-loops are invalid."""
    if a == b:
        raise DataError(f"self-loop edge on {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Snapshot:
    """One day's full weighted co-occurrence graph."""

    day: int
    vertex_support: dict[str, int]
    edge_support: dict[Pair, int]
    edge_jaccard: dict[Pair, float]


@dataclass(frozen=True)
class ActiveGraph:
    """A snapshot filtered by the three activity thresholds (recorded here)."""

    day: int
    thr_v: int
    thr_e: int
    thr_j: float
    vertices: frozenset[str]
    edges: dict[Pair, tuple[int, float]]

    def has_edge(self, a: str, b: str) -> bool:
        if a == b:
            return False
        return ((a, b) if a < b else (b, a)) in self.edges

    def edge(self, a: str, b: str) -> tuple[int, float]:
        """(support, jaccard) of an edge; absence signals a construction bug."""
        pair = canonical_pair(a, b)
        try:
            return self.edges[pair]
        except KeyError:
            raise DataError(f"no edge {pair[0]},{pair[1]} in active graph of day {self.day}") from None

    def support(self, a: str, b: str) -> int:
        return self.edge(a, b)[0]

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def jaccard(v1: str, v2: str, vertex_users: Mapping[str, set[str]], edge_users: Mapping[Pair, set[str]]) -> float:
    """Jaccard weight of an edge from the day's distinct-user sets.

    Numerator: users who co-posted both tags in one post. Denominator: union
    of the two tags' user sets. Asking for a pair that never co-occurred is
    an error, not a zero.
    """
    pair = canonical_pair(v1, v2)
    co_users = edge_users.get(pair)
    if not co_users:
        raise DataError(f"jaccard undefined: {pair[0]},{pair[1]} never co-occurred")
    union = len(vertex_users[v1] | vertex_users[v2])
    return round(len(co_users) / union, JACCARD_DECIMALS)


def build_snapshot(posts: Iterable[PostRecord], day: int) -> Snapshot:
    """Build one day's snapshot from that day's posts.

    Supports count distinct users, never posts: a user posting the same pair
    fifty times contributes one. Every post with k >= 2 tags contributes all
    C(k, 2) pairs; single-tag posts contribute vertex support only.
    """
    vertex_users: dict[str, set[str]] = defaultdict(set)
    edge_users: dict[Pair, set[str]] = defaultdict(set)
    for post in posts:
        tags = sorted(set(post.hashtags))
        for tag in tags:
            vertex_users[tag].add(post.user_id)
        for pair in combinations(tags, 2):
            edge_users[pair].add(post.user_id)

    vertex_support = {v: len(users) for v, users in vertex_users.items()}
    edge_support = {pair: len(users) for pair, users in edge_users.items()}
    edge_jaccard = {pair: jaccard(pair[0], pair[1], vertex_users, edge_users) for pair in edge_users}
    return Snapshot(day, vertex_support, edge_support, edge_jaccard)


def filter_active(snapshot: Snapshot, thr_v: int, thr_e: int, thr_j: float) -> ActiveGraph:
    """Filter a snapshot into an active graph. All comparisons are strict."""
    if thr_v < 0 or thr_e < 0 or thr_j < 0:
        raise DataError("activity thresholds must be non-negative")
    vertices = {v for v, sup in snapshot.vertex_support.items() if sup > thr_v}
    edges: dict[Pair, tuple[int, float]] = {}
    for pair in sorted(snapshot.edge_support):
        a, b = pair
        if a not in vertices or b not in vertices:
            continue
        sup = snapshot.edge_support[pair]
        jac = snapshot.edge_jaccard[pair]
        if sup > thr_e and jac > thr_j:
            edges[pair] = (sup, jac)
    return ActiveGraph(snapshot.day, thr_v, thr_e, thr_j, frozenset(vertices), edges)


def _graph_body_lines(vertex_support: Mapping[str, int], edges: Mapping[Pair, tuple[int, float]]) -> list[str]:
    lines = [f"V {v} {vertex_support[v]}" for v in sorted(vertex_support)]
    for a, b in sorted(edges):
        sup, jac = edges[(a, b)]
        lines.append(f"E {a} {b} {sup} {jac:.6f}")
    return lines


def write_snapshot(snapshot: Snapshot, path: str | Path) -> Path:
    edges = {pair: (snapshot.edge_support[pair], snapshot.edge_jaccard[pair]) for pair in snapshot.edge_support}
    lines = [f"{SNAPSHOT_MAGIC} v1 day={snapshot.day}"]
    lines += _graph_body_lines(snapshot.vertex_support, edges)
    return atomic_write_text(path, "\n".join(lines) + "\n")


def write_active(graph: ActiveGraph, path: str | Path) -> Path:
    header = (
        f"{ACTIVE_MAGIC} v1 day={graph.day} thr_v={graph.thr_v} thr_e={graph.thr_e} thr_j={fmt_num(graph.thr_j)}"
    )
    lines = [header] + _graph_body_lines_active(graph)
    return atomic_write_text(path, "\n".join(lines) + "\n")


def _graph_body_lines_active(graph: ActiveGraph) -> list[str]:
    lines = [f"V {v}" for v in sorted(graph.vertices)]
    for a, b in sorted(graph.edges):
        sup, jac = graph.edges[(a, b)]
        lines.append(f"E {a} {b} {sup} {jac:.6f}")
    return lines


def _parse_graph_lines(
    lines: list[str], path: str | Path, vertex_fields: int
) -> tuple[dict[str, list[str]], dict[Pair, tuple[int, float]]]:
    vertices: dict[str, list[str]] = {}
    edges: dict[Pair, tuple[int, float]] = {}
    for lineno, line in enumerate(lines, start=2):
        if not line.strip():
            continue
        parts = line.split()
        if parts[0] == "V" and len(parts) == 1 + vertex_fields:
            vertices[parts[1]] = parts[2:]
        elif parts[0] == "E" and len(parts) == 5:
            try:
                sup = int(parts[3])
                jac = float(parts[4])
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad edge numbers in {line!r}") from None
            pair = (parts[1], parts[2])
            if pair[0] >= pair[1]:
                raise FormatError(f"{path}:{lineno}: edge pair not in canonical order")
            edges[pair] = (sup, jac)
        else:
            raise FormatError(f"{path}:{lineno}: unrecognized line {line!r}")
    for a, b in edges:
        if a not in vertices or b not in vertices:
            raise FormatError(f"{path}: edge {a},{b} references a missing vertex")
    return vertices, edges


def read_snapshot(path: str | Path) -> Snapshot:
    lines = read_text_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty snapshot file")
    fields = parse_header(lines[0], SNAPSHOT_MAGIC, path)
    day = header_int(fields, "day", path)
    vertices, edges = _parse_graph_lines(lines[1:], path, vertex_fields=2)
    try:
        vertex_support = {v: int(extra[0]) for v, extra in vertices.items()}
    except ValueError:
        raise FormatError(f"{path}: bad vertex support value") from None
    edge_support = {pair: sup for pair, (sup, _) in edges.items()}
    edge_jaccard = {pair: jac for pair, (_, jac) in edges.items()}
    return Snapshot(day, vertex_support, edge_support, edge_jaccard)


def read_active(path: str | Path) -> ActiveGraph:
    lines = read_text_lines(path)
    if not lines:
        raise FormatError(f"{path}: empty active graph file")
    fields = parse_header(lines[0], ACTIVE_MAGIC, path)
    day = header_int(fields, "day", path)
    thr_v = header_int(fields, "thr_v", path)
    thr_e = header_int(fields, "thr_e", path)
    thr_j = header_float(fields, "thr_j", path)
    vertices, edges = _parse_graph_lines(lines[1:], path, vertex_fields=1)
    return ActiveGraph(day, thr_v, thr_e, thr_j, frozenset(vertices), edges)
