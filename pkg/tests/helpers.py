"""Shared test fixtures and brute-force oracles.

The oracles here deliberately avoid the library's data structures and
algorithms: subset enumeration for cliques, naive per-user scans for
supports. They stay independent of the code paths they check.
"""

from __future__ import annotations

import random
from itertools import combinations

from corestab.cliques import Cluster
from corestab.graph import ActiveGraph, Pair
from corestab.ingest import PostRecord


def make_active(
    edge_support: dict[Pair, int],
    jaccard: dict[Pair, float] | None = None,
    extra_vertices: tuple[str, ...] = (),
    day: int = 0,
    thresholds: tuple[int, int, float] = (0, 0, 0.0),
) -> ActiveGraph:
    """Build an ActiveGraph directly from an edge-support table."""
    edges = {}
    for pair, sup in edge_support.items():
        a, b = sorted(pair)
        jac = jaccard[pair] if jaccard else round(min(1.0, sup / 20), 6)
        edges[(a, b)] = (sup, jac)
    vertices = {v for pair in edges for v in pair} | set(extra_vertices)
    thr_v, thr_e, thr_j = thresholds
    return ActiveGraph(day, thr_v, thr_e, thr_j, frozenset(vertices), edges)


FIXTURE_F_SUPPORT = {
    ("a", "b"): 10,
    ("a", "c"): 8,
    ("a", "d"): 2,
    ("b", "c"): 7,
    ("b", "d"): 3,
    ("c", "d"): 1,
}


def fixture_f() -> tuple[Cluster, ActiveGraph]:
    graph = make_active(FIXTURE_F_SUPPORT)
    cluster = Cluster(0, ("a", "b", "c", "d"), sum(FIXTURE_F_SUPPORT.values()) / 6)
    return cluster, graph


def post(user: str, *tags: str, ts: int = 0, pid: str | None = None) -> PostRecord:
    return PostRecord(pid or f"{user}-{ts}-{'_'.join(tags)}", ts, user, tuple(sorted(set(tags))))


# ------------------------------------------------------------------ oracles


def grow_in_order(seed, order, graph, floor):
    """Scan candidates in a fixed order, admitting on all-ties >= floor."""
    core = list(seed)
    for tag in order:
        if all(graph.support(tag, m) >= floor for m in core):
            core.append(tag)
    return frozenset(core)


def assert_floor_sound(core, cluster, graph, floor):
    """Order-free soundness for floor-grown cores: the member set must be
    constructible by some admission order, and no excluded tag may tie into
    the final core at or above the floor."""
    from corestab.cores import top_scored_edge

    seed = top_scored_edge(cluster, graph)
    assert set(seed) <= set(core.members)
    placed = list(seed)
    rest = set(core.members) - set(seed)
    while rest:
        admissible = [t for t in sorted(rest) if all(graph.support(t, m) >= floor for m in placed)]
        assert admissible, f"no valid insertion order for {core.members}"
        placed.append(admissible[0])
        rest.discard(admissible[0])
    for tag in set(cluster.members) - set(core.members):
        assert min(graph.support(tag, m) for m in core.members) < floor


def brute_force_cliques(vertices: list[str], edges: set[Pair]) -> set[frozenset[str]]:
    """All maximal cliques of size >= 2 by checking every vertex subset."""
    n = len(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    adj_mask = [0] * n
    for a, b in edges:
        adj_mask[index[a]] |= 1 << index[b]
        adj_mask[index[b]] |= 1 << index[a]

    def is_clique(mask: int) -> bool:
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if (adj_mask[i] & mask) != mask ^ low:
                return False
            m ^= low
        return True

    cliques = [mask for mask in range(1, 1 << n) if bin(mask).count("1") >= 2 and is_clique(mask)]
    maximal = set()
    for mask in cliques:
        extendable = False
        for i in range(n):
            if not (mask >> i) & 1 and (adj_mask[i] & mask) == mask:
                extendable = True
                break
        if not extendable:
            maximal.add(frozenset(vertices[i] for i in range(n) if (mask >> i) & 1))
    return maximal


def naive_snapshot(posts: list[PostRecord]):
    """Supports and Jaccard via per-user post scans (independent of build_snapshot)."""
    tags = sorted({t for p in posts for t in p.hashtags})
    users = sorted({p.user_id for p in posts})

    def user_has_tag(u: str, t: str) -> bool:
        return any(p.user_id == u and t in p.hashtags for p in posts)

    def user_has_pair(u: str, t1: str, t2: str) -> bool:
        return any(p.user_id == u and t1 in p.hashtags and t2 in p.hashtags for p in posts)

    vertex_support = {}
    for t in tags:
        count = sum(1 for u in users if user_has_tag(u, t))
        if count:
            vertex_support[t] = count

    edge_support = {}
    edge_jaccard = {}
    for t1, t2 in combinations(tags, 2):
        co = sum(1 for u in users if user_has_pair(u, t1, t2))
        if co:
            union = sum(1 for u in users if user_has_tag(u, t1) or user_has_tag(u, t2))
            edge_support[(t1, t2)] = co
            edge_jaccard[(t1, t2)] = round(co / union, 6)
    return vertex_support, edge_support, edge_jaccard


# --------------------------------------------------------- random instances


def random_posts(rng: random.Random, max_posts: int = 20, max_users: int = 6, max_tags: int = 6):
    users = [f"u{i}" for i in range(1, max_users + 1)]
    tags = [chr(ord("a") + i) for i in range(max_tags)]
    posts = []
    for i in range(rng.randint(0, max_posts)):
        user = rng.choice(users)
        count = rng.randint(0, min(4, max_tags))
        chosen = rng.sample(tags, count)
        posts.append(PostRecord(f"p{i}", rng.randint(0, 3) * 86400, user, tuple(sorted(chosen))))
    return posts


def random_clique(rng: random.Random, min_size: int = 2, max_size: int = 8):
    """A random cluster (complete graph) with random supports and Jaccards."""
    size = rng.randint(min_size, max_size)
    members = tuple(sorted(rng.sample("abcdefghijkl", size)))
    edge_support = {}
    jaccard = {}
    for pair in combinations(members, 2):
        edge_support[pair] = rng.randint(1, 12)
        jaccard[pair] = round(rng.uniform(0.01, 1.0), 6)
    graph = make_active(edge_support, jaccard)
    avg = sum(edge_support.values()) / len(edge_support)
    return Cluster(0, members, avg), graph


def random_graph(rng: random.Random, max_vertices: int = 12, p_lo: float = 0.3, p_hi: float = 0.7) -> ActiveGraph:
    n = rng.randint(1, max_vertices)
    vertices = [chr(ord("a") + i) for i in range(n)]
    p = rng.uniform(p_lo, p_hi)
    edge_support = {}
    for pair in combinations(vertices, 2):
        if rng.random() < p:
            edge_support[pair] = rng.randint(1, 9)
    return make_active(edge_support, extra_vertices=tuple(vertices))
