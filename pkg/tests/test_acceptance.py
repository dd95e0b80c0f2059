"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with:  pytest tests/test_acceptance.py -v -s
"""

import functools
import random
import time
from itertools import combinations

import pytest

from helpers import (
    assert_floor_sound,
    brute_force_cliques,
    fixture_f,
    naive_snapshot,
    post,
    random_clique,
    random_graph,
    random_posts,
)
from corestab.cliques import cluster_avg_support, enumerate_maximal_cliques
from corestab.cores import (
    MethodConfig,
    above_average_core,
    detect_all,
    edge_threshold_core,
    top_n_core,
    top_scored_edge,
)
from corestab.evaluation import compare_methods, core_survives, real_core_ratio, survival_curves
from corestab.graph import build_snapshot, filter_active
from corestab.synth import SynthConfig, generate, transient_tag


def criterion(number, name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"\nACCEPTANCE {number} {name}: FAIL")
                raise
            print(f"\nACCEPTANCE {number} {name}: PASS")
            return result

        return wrapper

    return decorate


# --------------------------------------------------------------- criterion 1


@criterion(1, "clique oracle equivalence (200 random graphs)")
def test_criterion_1_clique_oracle():
    rng = random.Random(20131002)
    started = time.monotonic()
    for _ in range(200):
        graph = random_graph(rng, max_vertices=12, p_lo=0.3, p_hi=0.7)
        expected = brute_force_cliques(sorted(graph.vertices), set(graph.edges))
        got = {frozenset(c.members) for c in enumerate_maximal_cliques(graph)}
        assert got == expected
    assert time.monotonic() - started < 10.0


# --------------------------------------------------------------- criterion 2


@criterion(2, "snapshot oracle equivalence (100 random post sets)")
def test_criterion_2_snapshot_oracle():
    rng = random.Random(1002)
    for _ in range(100):
        posts = random_posts(rng, max_posts=20, max_users=6, max_tags=6)
        snap = build_snapshot(posts, 0)
        vsup, esup, ejac = naive_snapshot(posts)
        assert snap.vertex_support == vsup
        assert snap.edge_support == esup
        assert snap.edge_jaccard == ejac


# --------------------------------------------------------------- criterion 3


@criterion(3, "hand-trace fixtures (supports 10,8,2,7,3,1)")
def test_criterion_3_hand_traces():
    cluster, graph = fixture_f()
    assert cluster_avg_support(cluster, graph) == pytest.approx(31 / 6)
    assert set(top_n_core(cluster, graph, 3).members) == {"a", "b", "c"}
    assert set(above_average_core(cluster, graph).members) == {"a", "b", "c"}
    assert set(edge_threshold_core(cluster, graph, 6).members) == {"a", "b", "c"}
    assert set(edge_threshold_core(cluster, graph, 11).members) == set()


# --------------------------------------------------------------- criterion 4


@criterion(4, "work/school core survives day 5")
def test_criterion_4_survival_example():
    day0_posts = [post(f"u{i}", "work", "school", "wednesday") for i in (1, 2, 3)]
    day0_posts += [post(f"u{i}", "work", "school") for i in (4, 5)]
    day0 = filter_active(build_snapshot(day0_posts, 0), 0, 0, 0.0)
    clusters = enumerate_maximal_cliques(day0)
    assert [c.members for c in clusters] == [("school", "wednesday", "work")]
    cores = detect_all(clusters, day0, MethodConfig("above_average"))
    assert [c.members for c in cores] == [("school", "work")]

    day5_posts = [post(f"v{i}", "work", "school", "monday") for i in (1, 2)]
    day5 = filter_active(build_snapshot(day5_posts, 5), 0, 0, 0.0)
    assert core_survives(cores[0], day5)


# ------------------------------------------------- planted corpus (5 and 8)


PLANTED_TAGS = tuple(tuple(f"p{i}{c}" for c in "abcd") for i in range(5))
PLANTED_CONFIG = SynthConfig(
    seed=24,
    days=11,
    planted_cliques=tuple((tags, 10) for tags in PLANTED_TAGS),
    transient_rate=0.5,
    transient_support=3,
    noise_posts=60,
)
THRESHOLDS = (2, 2, 0.05)


def planted_pipeline():
    corpus = generate(PLANTED_CONFIG)
    graphs = {
        day: filter_active(build_snapshot(posts, day), *THRESHOLDS) for day, posts in corpus.items()
    }
    clusters = enumerate_maximal_cliques(graphs[0])
    return graphs, clusters


@pytest.fixture(scope="module")
def planted():
    return planted_pipeline()


@criterion(5, "planted-corpus recovery under (2,2,0.05)")
def test_criterion_5_planted_recovery():
    started = time.monotonic()
    graphs, clusters = planted_pipeline()

    # every planted pairwise edge is in every day's active graph
    for day, graph in graphs.items():
        for tags in PLANTED_TAGS:
            for pair in combinations(tags, 2):
                assert graph.has_edge(*pair), f"day {day} missing planted edge {pair}"

    planted_sets = [set(tags) for tags in PLANTED_TAGS]
    all_planted = set().union(*planted_sets)

    # edge_threshold(6) cores restricted to planted tags survive every horizon
    et_cores = detect_all(clusters, graphs[0], MethodConfig("edge_threshold", threshold=6))
    planted_cores = [c for c in et_cores if set(c.members) <= all_planted]
    assert len(planted_cores) == 5
    for horizon in range(1, 11):
        assert real_core_ratio(planted_cores, graphs[horizon]) == 1.0

    # cores containing transient tags do not always survive
    transients = {transient_tag(i) for i in range(5)}
    top5_cores = detect_all(clusters, graphs[0], MethodConfig("top_n", n=5))
    transient_cores = [c for c in top5_cores if set(c.members) & transients]
    assert transient_cores
    for horizon in range(1, 11):
        assert real_core_ratio(transient_cores, graphs[horizon]) < 1.0

    assert time.monotonic() - started < 30.0


# --------------------------------------------------------------- criterion 6


@criterion(6, "method soundness over 500 random clusters")
def test_criterion_6_method_soundness():
    def run(seed):
        rng = random.Random(seed)
        trace = []
        for _ in range(500):
            cluster, graph = random_clique(rng, 2, 8)
            n = rng.randint(2, 9)
            thr = rng.randint(0, 13)

            top = top_n_core(cluster, graph, n)
            if len(cluster.members) < n:
                assert top.is_empty()
            else:
                assert len(top.members) == n
                assert set(top.members) <= set(cluster.members)
                assert set(top_scored_edge(cluster, graph)) <= set(top.members)

            aa = above_average_core(cluster, graph)
            assert_floor_sound(aa, cluster, graph, cluster_avg_support(cluster, graph))

            et = edge_threshold_core(cluster, graph, thr)
            if graph.support(*top_scored_edge(cluster, graph)) < thr:
                assert et.is_empty()
            else:
                assert_floor_sound(et, cluster, graph, thr)

            previous = None
            for grid_thr in range(0, 14):
                members = set(edge_threshold_core(cluster, graph, grid_thr).members)
                if previous is not None:
                    assert members <= previous, "raising the floor grew the core"
                previous = members

            for core in (top, aa, et):
                score = "-" if core.avg_core_score is None else f"{core.avg_core_score:.6f}"
                trace.append(f"{core.method} {score} {','.join(core.members)}")
        return "\n".join(trace)

    # full determinism: two independent runs produce byte-identical results
    assert run(424242) == run(424242)


# --------------------------------------------------------------- criterion 7


@criterion(7, "self-survival and ratio bounds")
def test_criterion_7_self_survival_and_bounds():
    rng = random.Random(7007)
    configs = (
        MethodConfig("top_n", n=2),
        MethodConfig("top_n", n=3),
        MethodConfig("above_average"),
        MethodConfig("edge_threshold", threshold=2),
    )
    checked = 0
    for _ in range(40):
        base = filter_active(build_snapshot(random_posts(rng, 25, 6, 6), 0), 0, 0, 0.0)
        future = filter_active(build_snapshot(random_posts(rng, 25, 6, 6), 1), 0, 0, 0.0)
        graphs = {0: base, 1: future}
        for config in configs:
            report = survival_curves(graphs, 0, [0, 1], config, [2, 4, 6])
            if report.overall[0].total > 0:
                assert report.overall[0].ratio == 1.0
                checked += 1
            for cells in list(report.per_bin.values()) + [report.overall]:
                for cell in cells.values():
                    if cell.ratio is not None:
                        assert 0.0 <= cell.ratio <= 1.0
    assert checked > 50  # plenty of non-trivial self-survival checks happened


# --------------------------------------------------------------- criterion 8


@criterion(8, "threshold-style methods beat top_n(5) at horizon 7")
def test_criterion_8_directional_echo(planted):
    graphs, clusters = planted
    configs = [
        MethodConfig("top_n", n=3),
        MethodConfig("top_n", n=5),
        MethodConfig("above_average"),
        MethodConfig("edge_threshold", threshold=6),
    ]
    report = compare_methods(graphs, 0, 7, configs, clusters=clusters)
    by_label = {(row.method, row.params): row for row in report.rows}
    top5 = by_label[("top_n", "n=5")]
    aa = by_label[("above_average", "none")]
    et = by_label[("edge_threshold", "thr=6")]
    assert top5.real_core_ratio is not None
    assert aa.real_core_ratio is not None and et.real_core_ratio is not None
    assert aa.real_core_ratio > top5.real_core_ratio
    assert et.real_core_ratio > top5.real_core_ratio
