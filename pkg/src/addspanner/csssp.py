"""Weak constrained single-source shortest paths by gray-edge punishing.

Gray edges get a small surcharge on top of their weight and a plain Dijkstra
run does the rest. When a source-target pair admits a g-short path the
returned path is (near) optimal among paths with fewer than ``g`` gray edges
and uses at most ``5g`` (``5g/epsilon`` weighted) gray edges.

The ``oracle_*`` functions are exact brute-force references in pure Python.
They share no code with the solvers and are meant for small test instances.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from . import _kernels
from .graph import Graph

_INT_INF = np.iinfo(np.int64).max


class GrayEdgeSet:
    """Membership mask over the edge ids of one graph."""

    __slots__ = ("mask",)

    def __init__(self, mask: np.ndarray):
        self.mask = np.array(mask, dtype=np.bool_)
        self.mask.setflags(write=False)

    @classmethod
    def from_ids(cls, m: int, ids: Iterable[int]) -> "GrayEdgeSet":
        mask = np.zeros(m, dtype=np.bool_)
        mask[list(ids)] = True
        return cls(mask)

    @classmethod
    def empty(cls, m: int) -> "GrayEdgeSet":
        return cls(np.zeros(m, dtype=np.bool_))

    @classmethod
    def full(cls, m: int) -> "GrayEdgeSet":
        return cls(np.ones(m, dtype=np.bool_))

    @property
    def count(self) -> int:
        return int(self.mask.sum())

    def __len__(self) -> int:
        return self.mask.size

    def __contains__(self, edge_id: int) -> bool:
        return bool(self.mask[edge_id])

    def ids(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GrayEdgeSet):
            return NotImplemented
        return np.array_equal(self.mask, other.mask)

    def __repr__(self) -> str:
        return f"GrayEdgeSet(count={self.count}, m={self.mask.size})"


@dataclass
class PathTree:
    """Shortest-path tree from ``source`` under punished weights.

    ``parent_edge`` / ``parent`` are -1 at the source and at unreachable
    nodes. ``true_length`` is the hop count (unweighted) or original weight
    of the tree path, ``inf`` when unreachable; ``gray_count`` is -1 there.
    """

    source: int
    parent: np.ndarray
    parent_edge: np.ndarray
    punished_dist: np.ndarray
    true_length: np.ndarray
    gray_count: np.ndarray
    hops: np.ndarray
    order: np.ndarray = field(repr=False)
    punished_scaled: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def true_weight(self) -> np.ndarray:
        return self.true_length

    def reachable(self, t: int) -> bool:
        return bool(np.isfinite(self.true_length[t]))

    def path(self, t: int) -> list[int]:
        """Nodes of the tree path source -> t (empty if t is unreachable)."""
        if not self.reachable(t):
            return []
        out = [t]
        while out[-1] != self.source:
            out.append(int(self.parent[out[-1]]))
        out.reverse()
        return out

    def path_edges(self, t: int) -> list[int]:
        out = []
        v = t
        while self.parent[v] >= 0:
            out.append(int(self.parent_edge[v]))
            v = int(self.parent[v])
        out.reverse()
        return out


def _check_source(G: Graph, s: int) -> None:
    if not 0 <= s < G.n:
        raise ValueError(f"source {s} out of range for n={G.n}")


def _check_gray(G: Graph, gray: GrayEdgeSet) -> None:
    if len(gray) != G.m:
        raise ValueError(f"gray set covers {len(gray)} edges but graph has m={G.m}")


def _tree(G: Graph, s: int, gray_half: np.ndarray, true_half: np.ndarray, raw) -> PathTree:
    dist, parent, parent_half, order = raw
    parent_edge = np.full(G.n, -1, dtype=np.int64)
    parent_edge[parent_half >= 0] = G.half_eid[parent_half[parent_half >= 0]]
    gray_count = _kernels.path_sums(order, parent, parent_half, gray_half, -1)
    hops = _kernels.path_sums(order, parent, parent_half, np.ones(G.nbr.size, np.int64), -1)
    true_length = _kernels.path_sums(order, parent, parent_half, true_half, np.inf)
    return PathTree(
        source=s,
        parent=parent,
        parent_edge=parent_edge,
        punished_dist=dist,
        true_length=true_length,
        gray_count=gray_count,
        hops=hops,
        order=order,
    )


def unweighted_punished_half(G: Graph, gray: GrayEdgeSet, g: int) -> np.ndarray:
    """Per-half-edge punished weights scaled by g: g for plain edges, g+1 for gray."""
    return np.where(gray.mask[G.half_eid], g + 1, g).astype(np.int64)


def weak_csssp(G: Graph, s: int, gray: GrayEdgeSet, g: int) -> PathTree:
    """Weak CSSSP on an unweighted graph by punishing each gray edge with 1/g.

    Distances run in exact integers scaled by ``g``; ``punished_dist`` is
    divided back out for reporting and ``punished_scaled`` keeps the exact
    value.
    """
    _check_source(G, s)
    _check_gray(G, gray)
    if g < 1:
        raise ValueError(f"g must be a positive integer, got {g}")
    if not G.is_unit_weight:
        raise ValueError("weak_csssp expects an unweighted graph; use weighted_weak_csssp")
    hw = unweighted_punished_half(G, gray, g)
    raw = _kernels.dijkstra(G.indptr, G.nbr, hw, s, _INT_INF)
    gray_half = gray.mask[G.half_eid].astype(np.int64)
    tree = _tree(G, s, gray_half, np.ones(G.nbr.size), raw)
    scaled = raw[0]
    tree.punished_scaled = scaled
    tree.punished_dist = np.where(scaled == _INT_INF, np.inf, scaled / g)
    return tree


def weighted_weak_csssp(
    G: Graph, s: int, gray: GrayEdgeSet, g: int, epsilon: float
) -> PathTree:
    """Weak CSSSP with additive error ``epsilon * W`` on a weighted graph.

    Each gray edge is punished by ``epsilon * W / g`` where W is the largest
    edge weight of ``G``.
    """
    _check_source(G, s)
    _check_gray(G, gray)
    if g < 1:
        raise ValueError(f"g must be a positive integer, got {g}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0,1), got {epsilon}")
    true_half = G.half_weights()
    gray_half = gray.mask[G.half_eid]
    hw = true_half + np.where(gray_half, epsilon * G.W / g, 0.0)
    raw = _kernels.dijkstra(G.indptr, G.nbr, hw, s, np.inf)
    return _tree(G, s, gray_half.astype(np.int64), true_half, raw)


# -- exact oracles (testing scale) -------------------------------------------


def _adj(G: Graph) -> list[list[tuple[int, float, int]]]:
    # plain Python adjacency so oracles stay independent of the CSR kernels
    out: list[list[tuple[int, float, int]]] = [[] for _ in range(G.n)]
    for e, (u, v, w) in enumerate(G.edges()):
        out[u].append((v, w, e))
        out[v].append((u, w, e))
    return out


def oracle_budgeted_csssp(G: Graph, s: int, gray: GrayEdgeSet, budget: int) -> list[float]:
    """Exact constrained distances: best s->t weight using at most ``budget`` gray edges.

    Dijkstra over the product graph (node, gray edges used so far).
    Returns ``inf`` where no such path exists.
    """
    if budget < 0:
        raise ValueError("budget must be non-negative")
    is_gray = gray.mask.tolist()
    # a shortest walk is a simple path, so it never uses more gray edges than exist
    budget = min(budget, sum(is_gray))
    adj = _adj(G)
    best: dict[tuple[int, int], float] = {(s, 0): 0.0}
    heap = [(0.0, s, 0)]
    done: set[tuple[int, int]] = set()
    while heap:
        d, u, used = heapq.heappop(heap)
        if (u, used) in done:
            continue
        done.add((u, used))
        for v, w, e in adj[u]:
            k = used + (1 if is_gray[e] else 0)
            if k > budget:
                continue
            nd = d + w
            if nd < best.get((v, k), math.inf):
                best[(v, k)] = nd
                heapq.heappush(heap, (nd, v, k))
    dist = [math.inf] * G.n
    for (v, _), d in best.items():
        if d < dist[v]:
            dist[v] = d
    return dist


def _lex_dijkstra(adj, is_gray, src: int) -> list[tuple[float, int]]:
    """(distance, fewest gray edges among shortest paths) from ``src``."""
    best = [(math.inf, math.inf)] * len(adj)
    best[src] = (0.0, 0)
    heap = [(0.0, 0, src)]
    while heap:
        d, c, u = heapq.heappop(heap)
        if (d, c) > best[u]:
            continue
        for v, w, e in adj[u]:
            cand = (d + w, c + (1 if is_gray[e] else 0))
            if cand < best[v]:
                best[v] = cand
                heapq.heappush(heap, (cand[0], cand[1], v))
    return best


def oracle_gshort_min_gray(G: Graph, s: int, gray: GrayEdgeSet) -> list[float]:
    """Per target t, the fewest gray edges on a path (s,s') + shortest(s',t') + (t',t).

    s' ranges over s and its neighbors, t' over t and its neighbors, and the
    middle part over all shortest s'-t' paths. ``inf`` if t is unreachable.
    """
    adj = _adj(G)
    is_gray = gray.mask.tolist()
    starts = [(s, 0)] + [(v, 1 if is_gray[e] else 0) for v, _, e in adj[s]]
    # via[t'] = fewest gray edges of (s,s') + shortest(s',t') over s'
    via = [math.inf] * G.n
    for s1, c1 in starts:
        for t1, (d, c) in enumerate(_lex_dijkstra(adj, is_gray, s1)):
            if d < math.inf and c + c1 < via[t1]:
                via[t1] = c + c1
    out = list(via)
    for t in range(G.n):
        for v, _, e in adj[t]:
            c = via[v] + (1 if is_gray[e] else 0)
            if c < out[t]:
                out[t] = c
    return out


def oracle_gshort_exists(G: Graph, s: int, t: int, gray: GrayEdgeSet, g: int) -> bool:
    """Whether some s-t path of the form (s,s') + shortest(s',t') + (t',t) has < g gray edges."""
    return oracle_gshort_min_gray(G, s, gray)[t] < g
