import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from addspanner import (
    GraphError,
    Params,
    build_graph,
    default_params,
    parse_edge_list,
    random_graph,
    serialize_edge_list,
)
from addspanner.graph import default_mu, gray_budget


def test_build_path_graph():
    G = build_graph(3, [(0, 1, 1), (1, 2, 1)])
    assert (G.n, G.m, G.W) == (3, 2, 1.0)
    assert G.adjacency(1) == [(0, 0), (2, 1)]
    assert G.is_unit_weight


def test_build_rejects_self_loop():
    with pytest.raises(GraphError, match="self-loop at node 0"):
        build_graph(2, [(0, 0, 1)])


def test_build_rejects_parallel_edge():
    with pytest.raises(GraphError, match=r"parallel edge \(0,1\)"):
        build_graph(3, [(0, 1, 2.5), (0, 1, 3)])
    with pytest.raises(GraphError, match="parallel edge"):
        build_graph(3, [(0, 1), (1, 0)])


@pytest.mark.parametrize("w", [0, -1.5, math.inf])
def test_build_rejects_bad_weight(w):
    with pytest.raises(GraphError):
        build_graph(2, [(0, 1, w)])


def test_build_rejects_out_of_range():
    with pytest.raises(GraphError, match="out of range"):
        build_graph(2, [(0, 2)])


def test_adjacency_sorted_and_symmetric():
    G = build_graph(5, [(4, 0), (2, 0), (0, 1), (3, 2)])
    assert G.neighbors(0).tolist() == [1, 2, 4]
    for e, (u, v, _) in enumerate(G.edges()):
        assert (v, e) in G.adjacency(u)
        assert (u, e) in G.adjacency(v)


def test_default_params_n1024():
    # 1024^0.4 = 16 and ln(1024)^0.2 = 1.4729..., product 23.57
    assert 1024 ** 0.4 * math.log(1024) ** 0.2 == pytest.approx(23.566, abs=1e-3)
    p = default_params(1024)
    assert p.mu == 24
    assert p.g == math.ceil(24 ** 3 / 1024) + 2 == 16


def test_default_params_degenerate():
    p = default_params(1)
    assert (p.mu, p.g) == (1, 3)


def test_default_params_n100000():
    assert default_mu(100000) == 164
    assert gray_budget(100000, 164) == math.ceil(164 ** 3 / 100000) + 2


def test_mu_override_drives_g():
    p = default_params(400, mu=5)
    assert (p.mu, p.g) == (5, 3)


@pytest.mark.parametrize("kw", [dict(mu=0, g=3), dict(mu=2, g=1), dict(mu=2, g=3, epsilon=1.0)])
def test_params_invariants(kw):
    with pytest.raises(ValueError):
        Params(**kw)


def test_random_graph_complete():
    G = random_graph(4, 6, seed=7)
    assert sorted((u, v) for u, v, _ in G.edges()) == [(i, j) for i in range(4) for j in range(i + 1, 4)]


def test_random_graph_deterministic():
    a = random_graph(100, 300, seed=1)
    b = random_graph(100, 300, seed=1)
    assert a == b
    assert serialize_edge_list(a) == serialize_edge_list(b)


def test_random_graph_seed_changes_edges():
    a = random_graph(100, 300, seed=1)
    b = random_graph(100, 300, seed=2)
    assert set(map(tuple, a.edges())) != set(map(tuple, b.edges()))


def test_random_graph_too_many_edges():
    with pytest.raises(GraphError):
        random_graph(4, 7, seed=0)


def test_random_graph_weights_in_range():
    G = random_graph(50, 200, seed=3, weights=(1.0, 10.0))
    assert G.ew.min() >= 1.0 and G.ew.max() <= 10.0
    assert G.W == G.ew.max()


@given(st.integers(2, 40), st.data())
@settings(max_examples=60, deadline=None)
def test_random_graph_simple_with_exact_m(n, data):
    m = data.draw(st.integers(0, n * (n - 1) // 2))
    G = random_graph(n, m, seed=data.draw(st.integers(0, 2 ** 32)))
    assert G.m == m
    assert np.all(G.eu < G.ev)
    assert len({(u, v) for u, v, _ in G.edges()}) == m
    assert int(G.degree.sum()) == 2 * m
    assert G.indptr[-1] == 2 * m


def test_pair_decoding_large_n():
    # pair indices near the end of the triangle are where float decoding slips
    from addspanner.graph import _decode_pairs

    n = 100_000
    total = n * (n - 1) // 2
    idx = np.array([0, 1, n - 2, n - 1, total - 2, total - 1], dtype=np.int64)
    u, v = _decode_pairs(idx, n)
    assert list(zip(u.tolist(), v.tolist())) == [
        (0, 1), (0, 2), (0, n - 1), (1, 2), (n - 3, n - 1), (n - 2, n - 1)
    ]


def test_parse_examples():
    G = parse_edge_list("3 2\n0 1\n1 2\n")
    assert G == build_graph(3, [(0, 1), (1, 2)])
    G = parse_edge_list("3 1\n0 1 2.5\n")
    assert G.W == 2.5 and G.m == 1


def test_parse_comments_and_blank_lines():
    G = parse_edge_list("# header comment\n3 2\n\n0 1\n# mid\n1 2\n")
    assert G.m == 2


@pytest.mark.parametrize(
    "text, msg",
    [
        ("3 1\n0 3\n", "node id out of range, line 2"),
        ("3 1\n0 x\n", "line 2"),
        ("3 2\n0 1\n", "declares 2 edges"),
        ("3\n", "line 1"),
        ("3 1\n1 1\n", "self-loop"),
        ("3 2\n0 1\n1 0 2\n", "parallel edge"),
        ("", "header"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(GraphError, match=msg):
        parse_edge_list(text)


@given(st.integers(1, 30), st.integers(0, 10 ** 6), st.booleans())
@settings(max_examples=60, deadline=None)
def test_round_trip(n, seed, weighted):
    m = (seed % (n * (n - 1) // 2 + 1))
    G = random_graph(n, m, seed=seed, weights=(0.5, 7.25) if weighted else None)
    assert parse_edge_list(serialize_edge_list(G)) == G
