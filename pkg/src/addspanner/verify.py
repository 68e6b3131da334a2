"""Brute-force verification of spanner stretch, size and path structure."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .graph import Graph
from .spanner import SpannerBuild, apsp_cap

MAX_RECORDED = 100


@dataclass
class StretchReport:
    """Outcome of a stretch check; ``max_surplus`` is max(dist_H - bound) over checked pairs."""

    bound_kind: str
    max_surplus: float
    worst_pair: Optional[tuple[int, int]]
    violations: int
    pairs_checked: int
    violating_pairs: list[tuple[int, int, float]] = field(default_factory=list)
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["violating_pairs"] = [list(p) for p in self.violating_pairs[:MAX_RECORDED]]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _as_mask(G: Graph, H) -> np.ndarray:
    """Accept a SpannerBuild, a Graph, a boolean edge mask, edge ids, or (u, v) pairs."""
    if isinstance(H, SpannerBuild):
        H = H.spanner_edges
    if isinstance(H, Graph):
        if H.n != G.n:
            raise ValueError(f"H has {H.n} nodes, G has {G.n}")
        H = np.stack([H.eu, H.ev], axis=1) if H.m else np.zeros(0, dtype=np.int64)
    arr = np.asarray(H)
    if arr.ndim == 2:
        mask = np.zeros(G.m, dtype=np.bool_)
        for u, v in arr.tolist():
            try:
                mask[G.edge_id(int(u), int(v))] = True
            except (KeyError, IndexError):
                raise ValueError(f"H is not a subgraph of G: ({u},{v}) not in E(G)") from None
        return mask
    if arr.dtype == np.bool_:
        if arr.size != G.m:
            raise ValueError(f"edge mask has length {arr.size}, graph has m={G.m}")
        return arr
    ids = arr.astype(np.int64).ravel()
    if ids.size and (ids.min() < 0 or ids.max() >= G.m):
        raise ValueError("H is not a subgraph of G: edge id out of range")
    mask = np.zeros(G.m, dtype=np.bool_)
    mask[ids] = True
    return mask


def _pair_plan(n: int, pair_sample: Optional[int], seed: int, cap: Optional[int]):
    """Sources and per-source targets; all pairs unless sampling is requested or n > cap."""
    cap = apsp_cap() if cap is None else cap
    if pair_sample is None and n > cap:
        pair_sample = 10 * cap
    if pair_sample is None or n < 2:
        empty = np.zeros(1, dtype=np.int64)
        return np.arange(n, dtype=np.int64), empty, empty[:0], True, False
    rng = np.random.default_rng(seed)
    s = rng.integers(0, n, size=pair_sample)
    t = rng.integers(0, n - 1, size=pair_sample)
    t[t >= s] += 1
    o = np.lexsort((t, s))
    s, t = s[o], t[o]
    sources, starts = np.unique(s, return_index=True)
    t_ptr = np.append(starts, s.size).astype(np.int64)
    return sources.astype(np.int64), t_ptr, t.astype(np.int64), False, True


def _report(kind: str, raw, sampled: bool) -> StretchReport:
    checked, violations, worst, ws, wt, rs, rt, rx = raw
    return StretchReport(
        bound_kind=kind,
        max_surplus=float(worst),
        worst_pair=(int(ws), int(wt)) if ws >= 0 else None,
        violations=int(violations),
        pairs_checked=int(checked),
        violating_pairs=[(int(a), int(b), float(x)) for a, b, x in zip(rs, rt, rx)],
        sampled=sampled,
    )


def verify_additive_stretch(
    G: Graph,
    H,
    k: int,
    *,
    pair_sample: Optional[int] = None,
    seed: int = 0,
    cap: Optional[int] = None,
) -> StretchReport:
    """Check dist_H(s,t) <= dist_G(s,t) + k with BFS from every node of an unweighted G.

    ``H`` is a :class:`SpannerBuild`, an edge mask, or edge ids of G. Above
    the APSP cap (or with ``pair_sample``) uniformly random pairs are checked.
    """
    if not G.is_unit_weight:
        raise ValueError("additive stretch check expects an unweighted graph")
    sub = G.subgraph(_as_mask(G, H))
    sources, t_ptr, t_list, all_upper, sampled = _pair_plan(G.n, pair_sample, seed, cap)
    raw = _kernels.additive_sweep(
        G.indptr, G.nbr, sub.indptr, sub.nbr, int(k),
        sources, t_ptr, t_list, all_upper, MAX_RECORDED,
    )
    return _report(f"+{k}", raw, sampled)


def verify_weighted_stretch(
    G: Graph,
    H,
    epsilon: float,
    *,
    strict: bool = True,
    local_k: float = 4.0,
    rtol: float = 1e-12,
    pair_sample: Optional[int] = None,
    seed: int = 0,
    cap: Optional[int] = None,
) -> StretchReport:
    """Check dist_H <= dist_G + 4 W(s,t) + epsilon W over all pairs.

    With ``strict`` W(s,t) is the smallest possible maximum edge weight over
    all shortest s-t paths; otherwise it is the maximum edge weight on the
    verifier's own Dijkstra tree path. Surpluses up to ``1e-9 * W`` are
    treated as rounding.
    """
    sub = G.subgraph(_as_mask(G, H))
    sources, t_ptr, t_list, all_upper, sampled = _pair_plan(G.n, pair_sample, seed, cap)
    raw = _kernels.weighted_sweep(
        G.indptr, G.nbr, G.half_weights(),
        sub.indptr, sub.nbr, sub.half_weights(),
        float(local_k), float(epsilon) * G.W, 1e-9 * G.W, rtol, strict,
        sources, t_ptr, t_list, all_upper, MAX_RECORDED,
    )
    return _report(f"+{local_k:g}W(s,t)+{epsilon:g}W", raw, sampled)


def heavy_dist(G: Graph, path: Sequence[int], mu: int) -> int:
    """Number of nodes on ``path`` with degree >= mu."""
    path = [int(v) for v in path]
    for a, b in zip(path, path[1:]):
        try:
            G.edge_id(a, b)
        except KeyError:
            raise ValueError(f"path is not a walk in G: ({a},{b}) is not an edge") from None
    return int(sum(G.degree[v] >= mu for v in path))


def canonical_path(G: Graph, s: int, t: int) -> list[int]:
    """Canonical BFS shortest path s -> t (lowest-id parent per level); [] if unreachable."""
    _, parent, _, _ = _kernels.bfs_canonical(G.indptr, G.nbr, s)
    if t != s and parent[t] < 0:
        return []
    out = [t]
    while out[-1] != s:
        out.append(int(parent[out[-1]]))
    return out[::-1]


@dataclass
class LemmaCheck:
    passed: bool
    trials: int
    max_neighbors: int
    witness: Optional[dict] = None


def check_three_neighbors_lemma(G: Graph, trials: int, seed: int = 0) -> LemmaCheck:
    """Every node has at most 3 neighbors on a shortest path; checked on random canonical paths."""
    rng = np.random.default_rng(seed)
    worst = 0
    count = np.zeros(G.n, dtype=np.int64)
    for _ in range(trials if G.n else 0):
        s, t = (int(x) for x in rng.integers(0, G.n, size=2))
        path = canonical_path(G, s, t)
        if not path:
            continue
        count[:] = 0
        for p in path:
            count[G.neighbors(p)] += 1
        v = int(np.argmax(count))
        worst = max(worst, int(count[v]))
        if count[v] > 3:
            witness = {"s": s, "t": t, "path": path, "node": v, "neighbors_on_path": int(count[v])}
            return LemmaCheck(False, trials, worst, witness)
    return LemmaCheck(True, trials, worst)


def size_report(build: SpannerBuild, G: Graph) -> dict:
    """Spanner size, its ratio to n*mu, and per-stage counts."""
    edges = build.num_edges
    denom = G.n * build.params.mu
    return {
        "edges": edges,
        "ratio_to_n_mu": edges / denom if denom else 0.0,
        "stage_counts": dict(build.stage_counts),
        "stage_new": dict(build.stage_new),
    }
