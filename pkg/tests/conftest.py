"""Shared pure-Python reference routines; none of them touch the compiled kernels."""
import heapq
import math
from collections import deque

import pytest

from addspanner import build_graph

ACCEPTANCE_LINES: list[str] = []


def bfs_all(G, src, edge_ok=None):
    adj = [[] for _ in range(G.n)]
    for e, (u, v, _) in enumerate(G.edges()):
        if edge_ok is None or edge_ok[e]:
            adj[u].append(v)
            adj[v].append(u)
    dist = [math.inf] * G.n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] == math.inf:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def dijkstra_ref(n, weighted_edges, src):
    adj = [[] for _ in range(n)]
    for u, v, w in weighted_edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    dist = [math.inf] * n
    dist[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(heap, (d + w, v))
    return dist


def simple_paths(G, s, t):
    """All simple s-t paths as edge-id lists (tiny graphs only)."""
    adj = [[] for _ in range(G.n)]
    for e, (u, v, _) in enumerate(G.edges()):
        adj[u].append((v, e))
        adj[v].append((u, e))
    out = []

    def walk(u, seen, edges):
        if u == t:
            out.append(list(edges))
            return
        for v, e in adj[u]:
            if v not in seen:
                seen.add(v)
                edges.append(e)
                walk(v, seen, edges)
                edges.pop()
                seen.remove(v)

    walk(s, {s}, [])
    return out


def path_graph(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    def log(number, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return log
