import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from addspanner import (
    build_graph,
    chechik_baseline,
    default_params,
    fast_plus4,
    heavy_edge_set,
    heavy_nodes,
    lightweight_init,
    random_graph,
    verify_additive_stretch,
    verify_weighted_stretch,
    weighted_plus4,
)
from addspanner.graph import Params

from conftest import complete_graph, path_graph


def star(k, weights=None):
    return build_graph(k + 1, [(0, i, 1 if weights is None else weights[i - 1]) for i in range(1, k + 1)])


def test_heavy_nodes_star():
    assert heavy_nodes(star(5), 3).tolist() == [0]


def test_heavy_nodes_mu1_is_non_isolated():
    G = build_graph(5, [(0, 1), (1, 2)])
    assert heavy_nodes(G, 1).tolist() == [0, 1, 2]


def test_heavy_nodes_against_degree_recount():
    G = random_graph(200, 2000, seed=3)
    mu = default_params(G.n).mu
    deg = [0] * G.n
    for u, v, _ in G.edges():
        deg[u] += 1
        deg[v] += 1
    assert set(heavy_nodes(G, mu).tolist()) == {v for v in range(G.n) if deg[v] >= mu}


def test_heavy_edges_examples():
    assert heavy_edge_set(path_graph(3), 2).count == 0
    assert heavy_edge_set(complete_graph(4), 3).count == 6
    # triangle 0-1-2 plus pendant 0-3: degrees 3,2,2,1
    G = build_graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])
    assert heavy_edge_set(G, 2).ids().tolist() == [0, 1, 2]


def test_lightweight_init_triangle():
    # A=0, B=1, C=2: AB=1, BC=2, AC=3
    G = build_graph(3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])
    assert np.flatnonzero(lightweight_init(G, 1)).tolist() == [0, 1]


def test_lightweight_init_low_degree_keeps_everything():
    G = random_graph(30, 40, seed=2, weights=(1, 5))
    d = int(G.degree.max())
    assert lightweight_init(G, d).all()


def test_lightweight_init_star_union():
    assert lightweight_init(star(5), 2).all()


def test_lightweight_init_ties_by_edge_id():
    G = star(4)
    mask = lightweight_init(G, 2)
    # leaves keep their only edge, so the union is everything; the center alone would pick 0, 1
    assert mask.all()
    G = build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4), (1, 3), (2, 4)])
    assert np.flatnonzero(lightweight_init(G, 1)).tolist() == [0, 1, 2, 3]


def test_fast_light_graph_is_identity():
    G = random_graph(60, 100, seed=1)
    p = default_params(G.n, mu=int(G.degree.max()) + 1)
    b = fast_plus4(G, p)
    assert b.spanner_edges.all()
    assert b.stage_counts["light"] == G.m


def test_fast_single_node():
    G = build_graph(1, [])
    b = fast_plus4(G, default_params(1))
    assert b.num_edges == 0


def test_fast_rejects_weighted():
    with pytest.raises(ValueError, match="unweighted"):
        fast_plus4(build_graph(2, [(0, 1, 2.0)]), default_params(2))


def test_fast_plus4_stretch_n400():
    G = random_graph(400, 12000, seed=11)
    b = fast_plus4(G, default_params(G.n, seed=11))
    assert verify_additive_stretch(G, b, 4).violations == 0


def two_clusters():
    # K4 on 0..3 and on 6..9, joined by the light path 3-4-5-6
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    edges += [(i, j) for i in range(6, 10) for j in range(i + 1, 10)]
    edges += [(3, 4), (4, 5), (5, 6)]
    return build_graph(10, edges)


def test_baseline_two_clusters_trace():
    G = two_clusters()
    p = Params(mu=3, g=5)
    b = chechik_baseline(G, p, s1=[], s2=[0, 9])
    assert {c: sorted(v) for c, v in b.clusters.members.items()} == {0: [0, 1, 2, 3], 9: [6, 7, 8, 9]}
    # mu^3/n = 2.7 heavy nodes allowed: only pi(3,6) = 3-4-5-6 qualifies
    assert b.clusters.paths == {(0, 9): [0, 3, 4, 5, 6, 9]}
    assert b.stage_counts["csssp_paths"] == 5
    assert b.stage_counts["light"] == 3
    assert b.stage_counts["cluster_links"] == 6
    expected = {(3, 4), (4, 5), (5, 6), (0, 1), (0, 2), (0, 3), (6, 9), (7, 9), (8, 9)}
    assert {tuple(sorted((u, v))) for u, v, _ in b.subgraph(G).edges()} == expected
    assert verify_additive_stretch(G, b, 4).violations == 0


def test_fast_two_clusters_trace():
    G = two_clusters()
    b = fast_plus4(G, Params(mu=3, g=5), s1=[], s2=[0, 9])
    tree_path = {(3, 4), (4, 5), (5, 6), (0, 3), (6, 9)}
    H = {tuple(sorted((u, v))) for u, v, _ in b.subgraph(G).edges()}
    assert tree_path <= H
    assert b.stage_counts["csssp_paths"] == 10  # 0 -> 9 and 9 -> 0, five edges each
    assert b.max_path_gray <= 5 * 5


def test_baseline_light_graph_is_identity():
    G = random_graph(50, 80, seed=5)
    b = chechik_baseline(G, default_params(G.n, mu=int(G.degree.max()) + 1))
    assert b.spanner_edges.all()


def test_baseline_cap(monkeypatch):
    G = random_graph(30, 60, seed=1)
    with pytest.raises(ValueError, match="APSP cap"):
        chechik_baseline(G, default_params(30), cap=10)
    monkeypatch.setenv("SPANNER_APSP_CAP", "20")
    with pytest.raises(ValueError, match="SPANNER_APSP_CAP"):
        chechik_baseline(G, default_params(30))


def test_baseline_stretch_n300():
    G = random_graph(300, 6000, seed=5)
    b = chechik_baseline(G, default_params(G.n, seed=5))
    assert verify_additive_stretch(G, b, 4).violations == 0


def test_weighted_uniform_light_is_identity():
    G = random_graph(40, 60, seed=3)
    p = default_params(G.n, mu=int(G.degree.max()), epsilon=0.5)
    assert weighted_plus4(G, p).spanner_edges.all()


def test_weighted_single_edge():
    G = build_graph(2, [(0, 1, 3.5)])
    for seed in range(5):
        b = weighted_plus4(G, default_params(2, epsilon=0.3, seed=seed))
        assert b.spanner_edges.all()


def test_weighted_requires_epsilon():
    with pytest.raises(ValueError, match="epsilon"):
        weighted_plus4(build_graph(2, [(0, 1, 1.0)]), default_params(2))


def test_weighted_stretch_n300():
    G = random_graph(300, 6000, seed=9, weights=(1, 10))
    b = weighted_plus4(G, default_params(G.n, epsilon=0.5, seed=9))
    assert verify_weighted_stretch(G, b, 0.5).violations == 0


def test_weighted_gray_is_complement_before_paths():
    G = random_graph(120, 1500, seed=4, weights=(1, 10))
    b = weighted_plus4(G, default_params(G.n, epsilon=0.5, seed=4))
    # every non-gray edge is in H, and H only grows after the gray set is frozen
    assert np.all(b.spanner_edges[~b.gray_frozen.mask])
    assert b.stage_new["csssp_paths"] == int((b.spanner_edges & b.gray_frozen.mask).sum())


@st.composite
def graph_and_params(draw):
    n = draw(st.integers(2, 40))
    m = draw(st.integers(0, n * (n - 1) // 2))
    seed = draw(st.integers(0, 10 ** 6))
    mu = draw(st.integers(1, 8))
    return random_graph(n, m, seed=seed), default_params(n, mu=mu, seed=seed)


@given(graph_and_params())
@settings(max_examples=40, deadline=None)
def test_fast_invariants(gp):
    G, p = gp
    b = fast_plus4(G, p)
    assert b.spanner_edges.shape == (G.m,)
    assert sum(b.stage_counts.values()) >= b.num_edges
    assert sum(b.stage_new.values()) == b.num_edges
    heavy = G.degree >= p.mu
    assert b.stage_counts["light"] == int((~heavy[G.eu] | ~heavy[G.ev]).sum())
    assert b.stage_counts["s1_trees"] <= b.s1.size * max(G.n - 1, 0)
    assert b.max_path_gray <= 5 * p.g
    # coverage: heavy nodes outside the closed S2 neighborhood keep every edge
    in_s2 = np.zeros(G.n, dtype=bool)
    in_s2[b.s2] = True
    for v in np.flatnonzero(heavy):
        if not in_s2[v] and not in_s2[G.neighbors(v)].any():
            assert b.spanner_edges[G.incident_edges(v)].all()
    again = fast_plus4(G, p)
    assert np.array_equal(again.spanner_edges, b.spanner_edges)
    assert again.stage_counts == b.stage_counts


@given(graph_and_params())
@settings(max_examples=25, deadline=None)
def test_small_spanners_keep_stretch(gp):
    G, p = gp
    assert verify_additive_stretch(G, fast_plus4(G, p), 4).violations == 0
    assert verify_additive_stretch(G, chechik_baseline(G, p), 4).violations == 0


@given(st.integers(2, 30), st.integers(0, 10 ** 6), st.sampled_from([0.1, 0.5, 0.9]))
@settings(max_examples=25, deadline=None)
def test_weighted_invariants(n, seed, eps):
    m = seed % (n * (n - 1) // 2 + 1)
    G = random_graph(n, m, seed=seed, weights=(1, 10))
    p = default_params(n, mu=1 + seed % 5, epsilon=eps, seed=seed)
    b = weighted_plus4(G, p)
    assert b.max_path_gray <= 5 * p.g / eps
    assert verify_weighted_stretch(G, b, eps).violations == 0
    assert np.array_equal(weighted_plus4(G, p).spanner_edges, b.spanner_edges)
