"""Additive spanner constructions.

* :func:`fast_plus4` -- +4 spanner of an unweighted graph; the cluster
  shortest-path stage is a weak CSSSP run from every S2 node.
* :func:`chechik_baseline` -- the same guarantee via canonical all-pairs BFS
  paths between clusters; desk scale only.
* :func:`weighted_plus4` -- +4W(s,t)+eps*W spanner of a weighted graph from a
  mu-lightweight initialization.

A gray ("heavy") edge is one whose two endpoints are both heavy.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .csssp import GrayEdgeSet, unweighted_punished_half
from .graph import Graph, Params

_INT_INF = np.iinfo(np.int64).max
DEFAULT_APSP_CAP = 5000

STAGES_UNWEIGHTED = ("light", "s1_trees", "coverage", "cluster_links", "csssp_paths")
STAGES_WEIGHTED = ("init", "coverage", "s1_trees", "csssp_paths")


def apsp_cap() -> int:
    return int(os.environ.get("SPANNER_APSP_CAP", DEFAULT_APSP_CAP))


@dataclass
class SpannerBuild:
    """Result of a construction.

    ``stage_counts`` counts edge additions attempted per stage (an edge added
    twice counts twice); ``stage_new`` counts edges that were new to the
    spanner when their stage added them, so it sums to the spanner size.
    """

    algorithm: str
    spanner_edges: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    params: Params
    stage_counts: dict[str, int]
    stage_new: dict[str, int]
    gray_frozen: Optional[GrayEdgeSet] = None
    max_path_gray: int = 0
    clusters: Optional["ClusterAssignment"] = field(default=None, repr=False)

    @property
    def num_edges(self) -> int:
        return int(self.spanner_edges.sum())

    def edge_ids(self) -> np.ndarray:
        return np.flatnonzero(self.spanner_edges)

    def subgraph(self, G: Graph) -> Graph:
        return G.subgraph(self.spanner_edges)

    def stats(self, G: Graph) -> dict:
        out = {
            "algorithm": self.algorithm,
            "n": G.n,
            "m": G.m,
            "mu": self.params.mu,
            "g": self.params.g,
            "seed": self.params.seed,
            "s1_size": int(self.s1.size),
            "s2_size": int(self.s2.size),
            "stage_counts": dict(self.stage_counts),
            "stage_new": dict(self.stage_new),
            "spanner_edges": self.num_edges,
            "max_path_gray": self.max_path_gray,
        }
        if self.params.epsilon is not None:
            out["epsilon"] = self.params.epsilon
        return out


@dataclass
class ClusterAssignment:
    """Center (an S2 neighbor, or -1) for each node and the member list of each center.

    ``paths`` maps each connected center pair ``(x1, x2)``, x1 < x2, to the
    node sequence of the path selected for it.
    """

    center: np.ndarray
    members: dict[int, list[int]]
    paths: dict[tuple[int, int], list[int]] = field(default_factory=dict)


class _EdgeSet:
    """Spanner edge mask with per-stage bookkeeping."""

    def __init__(self, m: int, stages):
        self.mask = np.zeros(m, dtype=np.bool_)
        self.counts = {s: 0 for s in stages}
        self.new = {s: 0 for s in stages}

    def add(self, stage: str, edge_ids: np.ndarray) -> None:
        edge_ids = np.asarray(edge_ids, dtype=np.int64)
        self.counts[stage] += int(edge_ids.size)
        fresh = np.unique(edge_ids[~self.mask[edge_ids]])
        self.new[stage] += int(fresh.size)
        self.mask[fresh] = True


def heavy_nodes(G: Graph, mu: int) -> np.ndarray:
    """Ids of nodes with degree >= mu, ascending."""
    return np.flatnonzero(G.degree >= mu)


def heavy_edge_set(G: Graph, mu: int) -> GrayEdgeSet:
    """Edges with both endpoints heavy."""
    heavy = G.degree >= mu
    return GrayEdgeSet(heavy[G.eu] & heavy[G.ev])


def _sample(rng: np.random.Generator, n: int, p: float, given=None) -> np.ndarray:
    # the draw happens even when overridden so the other set sees the same stream
    drawn = np.flatnonzero(rng.random(n) < min(1.0, p))
    if given is None:
        return drawn
    return np.unique(np.asarray(given, dtype=np.int64))


def _closed_nbhd_hits(indptr, nbr, flag: np.ndarray) -> np.ndarray:
    """For each node, whether it or any neighbor has ``flag`` set."""
    n = indptr.size - 1
    owner = np.repeat(np.arange(n), np.diff(indptr))
    hit = flag.copy()
    np.logical_or.at(hit, owner, flag[nbr])
    return hit


def _incident_edges(G: Graph, nodes: np.ndarray) -> np.ndarray:
    if nodes.size == 0:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([G.incident_edges(int(v)) for v in nodes])


def _tree_edge_ids(G: Graph, parent_half: np.ndarray) -> np.ndarray:
    return G.half_eid[parent_half[parent_half >= 0]]


def _add_bfs_trees(G: Graph, edges: _EdgeSet, roots: np.ndarray) -> None:
    for x in roots:
        _, _, parent_half, _ = _kernels.bfs_canonical(G.indptr, G.nbr, int(x))
        edges.add("s1_trees", _tree_edge_ids(G, parent_half))


def _light_and_coverage(G: Graph, params: Params, rng: np.random.Generator, edges: _EdgeSet,
                        s1_given=None, s2_given=None):
    """Stages shared by the two unweighted constructions, up to the cluster links.

    Returns ``(heavy_mask, s1, s2, center)`` where ``center[v]`` is the S2
    node v is linked to (-1 if none).
    """
    n, mu = G.n, params.mu
    heavy = G.degree >= mu
    light_edge = ~(heavy[G.eu] & heavy[G.ev])
    edges.add("light", np.flatnonzero(light_edge))

    s1 = _sample(rng, n, 9.0 * mu / n, s1_given)
    _add_bfs_trees(G, edges, s1)

    s2 = _sample(rng, n, 1.0 / mu, s2_given)
    in_s2 = np.zeros(n, dtype=np.bool_)
    in_s2[s2] = True
    hit = _closed_nbhd_hits(G.indptr, G.nbr, in_s2)
    uncovered = np.flatnonzero(heavy & ~hit)
    edges.add("coverage", _incident_edges(G, uncovered))

    # lowest-id S2 neighbor: neighbors are sorted, so the first hit in each row
    center = np.full(n, -1, dtype=np.int64)
    links = []
    for v in np.flatnonzero(heavy & ~in_s2 & hit):
        lo, hi = G.indptr[v], G.indptr[v + 1]
        j = lo + int(np.argmax(in_s2[G.nbr[lo:hi]]))
        center[v] = G.nbr[j]
        links.append(G.half_eid[j])
    edges.add("cluster_links", np.asarray(links, dtype=np.int64))
    center[s2] = s2
    return heavy, s1, s2, center


def _require_unweighted(G: Graph) -> None:
    if not G.is_unit_weight:
        raise ValueError("construction expects an unweighted graph (all weights 1)")


def fast_plus4(G: Graph, params: Params, *, s1=None, s2=None) -> SpannerBuild:
    """+4 spanner using one weak CSSSP solve per S2 node.

    ``s1``/``s2`` replace the random samples (for hand-built instances).
    """
    _require_unweighted(G)
    rng = np.random.default_rng(params.seed)
    edges = _EdgeSet(G.m, STAGES_UNWEIGHTED)
    heavy, s1, s2, _ = _light_and_coverage(G, params, rng, edges, s1, s2)

    gray = heavy_edge_set(G, params.mu)
    g = params.g
    hw = unweighted_punished_half(G, gray, g)
    gray_half = gray.mask[G.half_eid].astype(np.int64)
    stamp = np.zeros(G.n, dtype=np.int64)
    max_gray = 0
    for i, x1 in enumerate(s2):
        dist, parent, parent_half, order = _kernels.dijkstra(G.indptr, G.nbr, hw, int(x1), _INT_INF)
        targets = s2[(s2 != x1) & (parent_half[s2] >= 0)]
        if targets.size == 0:
            continue
        # scaled dist = g * hops + gray edges on the path
        gc = _kernels.path_sums(order, parent, parent_half, gray_half, -1)
        hops = (dist[targets] - gc[targets]) // g
        max_gray = max(max_gray, int(gc[targets].max()))
        edges.counts["csssp_paths"] += int(hops.sum())
        edges.new["csssp_paths"] += _kernels.mark_tree_paths(
            parent, parent_half, G.half_eid, targets, edges.mask, stamp, i + 1
        )

    return SpannerBuild(
        algorithm="fast",
        spanner_edges=edges.mask,
        s1=s1,
        s2=s2,
        params=params,
        stage_counts=edges.counts,
        stage_new=edges.new,
        gray_frozen=gray,
        max_path_gray=max_gray,
    )


def chechik_baseline(
    G: Graph, params: Params, cap: Optional[int] = None, *, s1=None, s2=None
) -> SpannerBuild:
    """+4 spanner choosing, per cluster pair, the shortest admissible canonical path.

    A candidate for clusters C(x1), C(x2) is (x1,s) + pi(s,t) + (t,x2) with
    s in C(x1), t in C(x2) and pi(s,t) the canonical BFS path from s, kept
    only if pi(s,t) has at most mu^3/n heavy nodes. Runs a BFS from every
    clustered node, so ``G.n`` must not exceed the APSP cap.
    """
    _require_unweighted(G)
    cap = apsp_cap() if cap is None else cap
    if G.n > cap:
        raise ValueError(
            f"baseline needs all-pairs BFS; n={G.n} exceeds the APSP cap {cap}. "
            "Use the 'fast' algorithm or raise SPANNER_APSP_CAP."
        )
    rng = np.random.default_rng(params.seed)
    edges = _EdgeSet(G.m, STAGES_UNWEIGHTED)
    heavy, s1, s2, center = _light_and_coverage(G, params, rng, edges, s1, s2)
    members = {int(x): [int(x)] for x in s2}
    for v in np.flatnonzero((center >= 0) & (center != np.arange(G.n))):
        members[int(center[v])].append(int(v))
    clusters = ClusterAssignment(center=center, members=members, paths={})

    n, mu = G.n, params.mu
    limit = mu ** 3 / n
    k = s2.size
    slot = np.full(n, -1, dtype=np.int64)
    slot[s2] = np.arange(k)
    clustered = np.flatnonzero(center >= 0)
    heavy_i = heavy.astype(np.int64)
    best_len = np.full((k, k), _INT_INF, dtype=np.int64)
    best_st = np.full((k, k, 2), -1, dtype=np.int64)

    trees = {}
    for s in clustered:
        s = int(s)
        dist, parent, parent_half, order = _kernels.bfs_canonical(G.indptr, G.nbr, s)
        hcount = _kernels.node_path_counts(order, parent, heavy_i)
        a = slot[center[s]]
        t = clustered[(dist[clustered] >= 0) & (center[clustered] != center[s])]
        t = t[hcount[t] <= limit]
        if t.size == 0:
            continue
        trees[s] = (parent, parent_half)
        cand = dist[t] + (s != center[s]) + (t != center[t])
        b = slot[center[t]]
        # stable sort keeps the lowest t among equal candidates per cluster
        o = np.lexsort((cand, b))
        b, cand, t = b[o], cand[o], t[o]
        first = np.r_[True, b[1:] != b[:-1]]
        for b2, c, tt in zip(b[first], cand[first], t[first]):
            i, j = (a, b2) if a < b2 else (b2, a)
            if c < best_len[i, j]:
                best_len[i, j] = c
                best_st[i, j] = (s, tt)

    path_edges = []
    for i, j in zip(*np.nonzero(best_len < _INT_INF)):
        s, t = (int(x) for x in best_st[i, j])
        parent, parent_half = trees[s]
        for end in (s, t):
            if center[end] != end:
                path_edges.append(G.edge_id(end, int(center[end])))
        nodes = [t]
        v = t
        while parent[v] >= 0:
            path_edges.append(int(G.half_eid[parent_half[v]]))
            v = int(parent[v])
            nodes.append(v)
        nodes.reverse()
        x1, x2 = int(center[s]), int(center[t])
        nodes = ([x1] if x1 != s else []) + nodes + ([x2] if x2 != t else [])
        if x1 > x2:
            nodes.reverse()
        clusters.paths[(min(x1, x2), max(x1, x2))] = nodes
    edges.add("csssp_paths", np.asarray(path_edges, dtype=np.int64))

    return SpannerBuild(
        algorithm="baseline",
        spanner_edges=edges.mask,
        s1=s1,
        s2=s2,
        params=params,
        stage_counts=edges.counts,
        stage_new=edges.new,
        clusters=clusters,
    )


def lightweight_init(G: Graph, d: int) -> np.ndarray:
    """Edge mask of the union over nodes of each node's d lightest incident edges.

    Ties are broken by lower edge id.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    owner = np.repeat(np.arange(G.n), G.degree)
    w = G.ew[G.half_eid]
    order = np.lexsort((G.half_eid, w, owner))
    rank = np.arange(order.size) - G.indptr[owner[order]]
    mask = np.zeros(G.m, dtype=np.bool_)
    mask[G.half_eid[order[rank < d]]] = True
    return mask


def weighted_plus4(G: Graph, params: Params, *, s1=None, s2=None) -> SpannerBuild:
    """+4W(s,t)+eps*W spanner: lightweight init, coverage, SPTs, then weighted weak CSSSP.

    The gray set is E minus the spanner edges present once the shortest-path
    trees are in; it stays fixed while the S2 sources are processed.
    """
    if params.epsilon is None:
        raise ValueError("weighted construction requires epsilon in (0,1)")
    eps = params.epsilon
    n, mu = G.n, params.mu
    rng = np.random.default_rng(params.seed)
    edges = _EdgeSet(G.m, STAGES_WEIGHTED)

    h0 = lightweight_init(G, mu)
    edges.add("init", np.flatnonzero(h0))

    s2 = _sample(rng, n, 1.0 / mu, s2)
    in_s2 = np.zeros(n, dtype=np.bool_)
    in_s2[s2] = True
    h0_half = h0[G.half_eid]
    owner = np.repeat(np.arange(n), G.degree)
    hit = in_s2.copy()
    np.logical_or.at(hit, owner[h0_half], in_s2[G.nbr[h0_half]])
    edges.add("coverage", _incident_edges(G, np.flatnonzero(~hit)))

    s1 = _sample(rng, n, 9.0 * mu / n, s1)
    w_half = G.half_weights()
    for x in s1:
        _, _, parent_half, _ = _kernels.dijkstra(G.indptr, G.nbr, w_half, int(x), np.inf)
        edges.add("s1_trees", _tree_edge_ids(G, parent_half))

    gray = GrayEdgeSet(~edges.mask)
    gray_half = gray.mask[G.half_eid]
    hw = w_half + np.where(gray_half, eps * G.W / params.g, 0.0)
    gray_half_i = gray_half.astype(np.int64)
    ones = np.ones(G.nbr.size, dtype=np.int64)
    stamp = np.zeros(n, dtype=np.int64)
    max_gray = 0
    for i, x1 in enumerate(s2):
        _, parent, parent_half, order = _kernels.dijkstra(G.indptr, G.nbr, hw, int(x1), np.inf)
        targets = s2[(s2 != x1) & (parent_half[s2] >= 0)]
        if targets.size == 0:
            continue
        gc = _kernels.path_sums(order, parent, parent_half, gray_half_i, -1)
        hops = _kernels.path_sums(order, parent, parent_half, ones, -1)
        max_gray = max(max_gray, int(gc[targets].max()))
        edges.counts["csssp_paths"] += int(hops[targets].sum())
        edges.new["csssp_paths"] += _kernels.mark_tree_paths(
            parent, parent_half, G.half_eid, targets, edges.mask, stamp, i + 1
        )

    return SpannerBuild(
        algorithm="weighted",
        spanner_edges=edges.mask,
        s1=s1,
        s2=s2,
        params=params,
        stage_counts=edges.counts,
        stage_new=edges.new,
        gray_frozen=gray,
        max_path_gray=max_gray,
    )
