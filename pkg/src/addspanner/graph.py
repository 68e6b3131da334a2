"""Undirected simple graphs in CSR form, random generation and edge-list I/O."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

Edge = Tuple[int, int, float]


class GraphError(ValueError):
    """Raised for malformed graph input."""


class Graph:
    """Immutable undirected graph with positive edge weights.

    Edges keep the order they were given in; that order defines edge ids.
    Adjacency is stored as CSR with each node's neighbors sorted by id, so
    every traversal that scans neighbors in order is deterministic.
    """

    __slots__ = ("n", "m", "eu", "ev", "ew", "indptr", "nbr", "half_eid", "degree", "W")

    def __init__(self, n: int, eu: np.ndarray, ev: np.ndarray, ew: np.ndarray):
        self.n = int(n)
        self.m = int(eu.size)
        self.eu = eu
        self.ev = ev
        self.ew = ew
        src = np.concatenate([eu, ev])
        dst = np.concatenate([ev, eu])
        ids = np.concatenate([np.arange(self.m, dtype=np.int64)] * 2)
        order = np.lexsort((dst, src))
        self.nbr = dst[order].astype(np.int32)
        self.half_eid = ids[order]
        self.degree = np.bincount(src, minlength=self.n).astype(np.int64)
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degree, out=self.indptr[1:])
        self.W = float(ew.max()) if self.m else 1.0
        for arr in (self.eu, self.ev, self.ew, self.nbr, self.half_eid, self.degree, self.indptr):
            arr.setflags(write=False)

    @property
    def is_unit_weight(self) -> bool:
        return bool(np.all(self.ew == 1.0))

    def neighbors(self, v: int) -> np.ndarray:
        return self.nbr[self.indptr[v]:self.indptr[v + 1]]

    def incident_edges(self, v: int) -> np.ndarray:
        return self.half_eid[self.indptr[v]:self.indptr[v + 1]]

    def adjacency(self, v: int) -> list[tuple[int, int]]:
        """(neighbor, edge id) pairs of ``v``, sorted by neighbor."""
        return list(zip(self.neighbors(v).tolist(), self.incident_edges(v).tolist()))

    def edges(self) -> list[Edge]:
        return list(zip(self.eu.tolist(), self.ev.tolist(), self.ew.tolist()))

    def edge_id(self, u: int, v: int) -> int:
        """Id of edge (u, v); raises KeyError if absent."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise KeyError(f"no edge ({u},{v})")
        nb = self.neighbors(u)
        i = int(np.searchsorted(nb, v))
        if i < nb.size and nb[i] == v:
            return int(self.half_eid[self.indptr[u] + i])
        raise KeyError(f"no edge ({u},{v})")

    def half_weights(self) -> np.ndarray:
        """Edge weights laid out along the CSR half-edge array."""
        return self.ew[self.half_eid]

    def subgraph(self, edge_mask: np.ndarray) -> "Graph":
        """Spanning subgraph keeping the edges where ``edge_mask`` is set.

        Kept edges are renumbered 0..k-1 in increasing original id order.
        """
        keep = np.flatnonzero(edge_mask)
        return Graph(self.n, self.eu[keep], self.ev[keep], self.ew[keep])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.eu, other.eu)
            and np.array_equal(self.ev, other.ev)
            and np.array_equal(self.ew, other.ew)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.m, self.eu.tobytes(), self.ev.tobytes(), self.ew.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, W={self.W:g})"


def build_graph(n: int, edges: Iterable[Sequence[float]]) -> Graph:
    """Validate an edge list of ``(u, v)`` or ``(u, v, w)`` items and build a Graph."""
    if n < 0:
        raise GraphError("node count must be non-negative")
    us: list[int] = []
    vs: list[int] = []
    ws: list[float] = []
    for e in edges:
        u, v = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) > 2 else 1.0
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"node id out of range in edge ({u},{v})")
        if u == v:
            raise GraphError(f"self-loop at node {u}")
        if not (w > 0.0) or not math.isfinite(w):
            raise GraphError(f"non-positive weight {w} on edge ({u},{v})")
        us.append(u)
        vs.append(v)
        ws.append(w)
    eu = np.asarray(us, dtype=np.int64)
    ev = np.asarray(vs, dtype=np.int64)
    ew = np.asarray(ws, dtype=np.float64)
    if eu.size:
        key = np.minimum(eu, ev) * n + np.maximum(eu, ev)
        uniq, counts = np.unique(key, return_counts=True)
        if uniq.size != key.size:
            dup = int(uniq[np.argmax(counts > 1)])
            raise GraphError(f"parallel edge ({dup // n},{dup % n})")
    return Graph(n, eu, ev, ew)


@dataclass(frozen=True)
class Params:
    """Construction parameters: heaviness threshold, gray budget, error, seed."""

    mu: int
    g: int
    epsilon: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.mu < 1:
            raise ValueError(f"mu must be >= 1, got {self.mu}")
        if self.g < 2:
            raise ValueError(f"g must be >= 2, got {self.g}")
        if self.epsilon is not None and not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"epsilon must lie in (0,1), got {self.epsilon}")


def default_mu(n: int) -> int:
    # natural log; ln(1) = 0 would zero out mu, so it is treated as 1
    log_n = math.log(n) if n > 1 else 1.0
    return max(1, math.ceil(n ** 0.4 * log_n ** 0.2))


def gray_budget(n: int, mu: int) -> int:
    return -(-mu ** 3 // max(n, 1)) + 2


def default_params(
    n: int, *, mu: Optional[int] = None, epsilon: Optional[float] = None, seed: int = 0
) -> Params:
    """Parameters for an n-node graph; ``mu`` may be overridden, g follows from it."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = default_mu(n) if mu is None else int(mu)
    if mu < 1:
        raise ValueError(f"mu must be >= 1, got {mu}")
    return Params(mu=mu, g=gray_budget(n, mu), epsilon=epsilon, seed=seed)


def _decode_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # index k enumerates pairs u < v in row-major order; row u starts at u*(2n-u-1)/2
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(float(b) ** 2 - 8.0 * idx)) / 2).astype(np.int64)
    u = np.clip(u, 0, max(n - 2, 0))
    start = u * (b - u) // 2
    # correct float error by at most one row either way
    over = idx < start
    u[over] -= 1
    start = u * (b - u) // 2
    under = idx >= start + (n - 1 - u)
    u[under] += 1
    start = u * (b - u) // 2
    v = idx - start + u + 1
    return u, v


def random_graph(
    n: int,
    m: int,
    seed: int = 0,
    weights: Optional[Tuple[float, float]] = None,
) -> Graph:
    """Uniform simple graph with exactly ``m`` edges (G(n, m)).

    Edges are sorted by ``(u, v)`` with ``u < v``. With ``weights=(lo, hi)``
    each edge weight is drawn uniformly from ``[lo, hi]``.
    """
    total = n * (n - 1) // 2
    if m < 0 or m > total:
        raise GraphError(f"m={m} exceeds n(n-1)/2={total} for n={n}")
    rng = np.random.default_rng(seed)
    if m == total:
        idx = np.arange(total, dtype=np.int64)
    else:
        idx = np.sort(rng.choice(total, size=m, replace=False).astype(np.int64))
    eu, ev = _decode_pairs(idx, n)
    if weights is None:
        ew = np.ones(m, dtype=np.float64)
    else:
        lo, hi = weights
        if not (0 < lo <= hi):
            raise GraphError(f"weight range must satisfy 0 < lo <= hi, got {lo}:{hi}")
        ew = rng.uniform(lo, hi, size=m)
    return Graph(n, eu, ev, ew)


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v [w]`` line format; ``#`` starts a comment line."""
    header: Optional[tuple[int, int]] = None
    edges: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if header is None:
                if len(parts) != 2:
                    raise ValueError
                header = (int(parts[0]), int(parts[1]))
                if header[0] < 0 or header[1] < 0:
                    raise ValueError
                continue
            if len(parts) not in (2, 3):
                raise ValueError
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphError(f"malformed line, line {lineno}: {raw!r}") from None
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"node id out of range, line {lineno}")
        if u == v:
            raise GraphError(f"self-loop at node {u}, line {lineno}")
        if not (w > 0.0) or not math.isfinite(w):
            raise GraphError(f"non-positive weight, line {lineno}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphError(f"parallel edge ({u},{v}), line {lineno}")
        seen.add(key)
        edges.append((u, v, w))
    if header is None:
        raise GraphError("missing 'n m' header line")
    if len(edges) != header[1]:
        raise GraphError(f"header declares {header[1]} edges but found {len(edges)}")
    return build_graph(header[0], edges)


def serialize_edge_list(G: Graph) -> str:
    """Inverse of :func:`parse_edge_list`; weights are omitted when all equal 1."""
    lines = [f"{G.n} {G.m}"]
    if G.is_unit_weight:
        lines.extend(f"{u} {v}" for u, v in zip(G.eu.tolist(), G.ev.tolist()))
    else:
        lines.extend(
            f"{u} {v} {w!r}" for u, v, w in zip(G.eu.tolist(), G.ev.tolist(), G.ew.tolist())
        )
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(G: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_edge_list(G))
