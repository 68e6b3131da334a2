"""Compiled traversal kernels over CSR arrays.

All kernels take ``indptr`` (int64, n+1), ``nbr`` (int32 neighbor per
half-edge) and, where weighted, ``hw`` (weight per half-edge). Parents are
reported both as a node and as the half-edge index in the parent's row.
"""
import numpy as np
from numba import njit

# Heap of (key, node) pairs ordered lexicographically; ties on key go to the
# lower node id, which fixes the settle order of Dijkstra.


@njit(cache=True, inline="always")
def _less(k1, n1, k2, n2):
    return k1 < k2 or (k1 == k2 and n1 < n2)


@njit(cache=True)
def _push(keys, nodes, size, key, node):
    i = size
    while i > 0:
        p = (i - 1) >> 1
        if not _less(key, node, keys[p], nodes[p]):
            break
        keys[i] = keys[p]
        nodes[i] = nodes[p]
        i = p
    keys[i] = key
    nodes[i] = node
    return size + 1


@njit(cache=True)
def _pop(keys, nodes, size):
    top_k = keys[0]
    top_n = nodes[0]
    size -= 1
    lk = keys[size]
    ln = nodes[size]
    i = 0
    while True:
        c = 2 * i + 1
        if c >= size:
            break
        if c + 1 < size and _less(keys[c + 1], nodes[c + 1], keys[c], nodes[c]):
            c += 1
        if not _less(keys[c], nodes[c], lk, ln):
            break
        keys[i] = keys[c]
        nodes[i] = nodes[c]
        i = c
    if size > 0:
        keys[i] = lk
        nodes[i] = ln
    return top_k, top_n, size


@njit(cache=True)
def dijkstra(indptr, nbr, hw, src, inf):
    """Single-source Dijkstra; a node's parent is fixed by the first strict improvement.

    Returns ``(dist, parent, parent_half, order)``; unreachable nodes keep
    ``dist == inf`` and parent -1. ``order`` lists settled nodes by (dist, id).
    """
    n = indptr.size - 1
    dist = np.full(n, inf, dtype=hw.dtype)
    parent = np.full(n, -1, dtype=np.int64)
    parent_half = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.bool_)
    keys = np.empty(nbr.size + 1, dtype=hw.dtype)
    nodes = np.empty(nbr.size + 1, dtype=np.int32)
    order = np.empty(n, dtype=np.int64)
    cnt = 0
    dist[src] = 0
    size = _push(keys, nodes, 0, dist[src], np.int32(src))
    while size > 0:
        d, u, size = _pop(keys, nodes, size)
        if done[u]:
            continue
        done[u] = True
        order[cnt] = u
        cnt += 1
        for j in range(indptr[u], indptr[u + 1]):
            v = nbr[j]
            if done[v]:
                continue
            nd = d + hw[j]
            if nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                parent_half[v] = j
                size = _push(keys, nodes, size, nd, v)
    return dist, parent, parent_half, order[:cnt]


@njit(cache=True)
def bfs_canonical(indptr, nbr, src):
    """BFS whose parent for each node is its lowest-id neighbor one level closer.

    Each frontier is expanded in increasing id order, so the first discoverer
    of a node is that lowest-id neighbor.
    """
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    parent_half = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    order[0] = src
    dist[src] = 0
    head = 0
    tail = 1
    while head < tail:
        level_end = tail
        order[head:level_end].sort()
        for qi in range(head, level_end):
            u = order[qi]
            du = dist[u] + 1
            for j in range(indptr[u], indptr[u + 1]):
                v = nbr[j]
                if dist[v] < 0:
                    dist[v] = du
                    parent[v] = u
                    parent_half[v] = j
                    order[tail] = v
                    tail += 1
        head = level_end
    return dist, parent, parent_half, order[:tail]


@njit(cache=True)
def bfs_dist(indptr, nbr, src):
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    queue[0] = src
    dist[src] = 0
    head = 0
    tail = 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for j in range(indptr[u], indptr[u + 1]):
            v = nbr[j]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1
    return dist


@njit(cache=True)
def path_sums(order, parent, parent_half, half_vals, init):
    """Sum ``half_vals`` along each tree path; nodes outside ``order`` keep ``init``."""
    out = np.full(parent.size, init, dtype=half_vals.dtype)
    if order.size == 0:
        return out
    out[order[0]] = 0
    for i in range(1, order.size):
        v = order[i]
        out[v] = out[parent[v]] + half_vals[parent_half[v]]
    return out


@njit(cache=True)
def node_path_counts(order, parent, node_flag):
    """Number of flagged nodes on each tree path, both endpoints included."""
    out = np.full(parent.size, -1, dtype=np.int64)
    if order.size == 0:
        return out
    out[order[0]] = node_flag[order[0]]
    for i in range(1, order.size):
        v = order[i]
        out[v] = out[parent[v]] + node_flag[v]
    return out


@njit(cache=True)
def mark_tree_paths(parent, parent_half, half_eid, targets, edge_mask, stamp, stamp_val):
    """Add to ``edge_mask`` every edge on the tree paths to ``targets``.

    ``stamp`` marks nodes whose upward path was already walked for this tree
    (value ``stamp_val``) so shared prefixes are walked once. Returns the
    number of edges newly set in ``edge_mask``.
    """
    added = 0
    for t in targets:
        v = t
        while parent[v] >= 0 and stamp[v] != stamp_val:
            stamp[v] = stamp_val
            e = half_eid[parent_half[v]]
            if not edge_mask[e]:
                edge_mask[e] = True
                added += 1
            v = parent[v]
    return added


@njit(cache=True)
def minimax_shortest(indptr, nbr, hw, dist, order, rtol):
    """Smallest bottleneck edge weight over all shortest paths from the source.

    ``dist``/``order`` come from :func:`dijkstra`. An edge (p, t) is on some
    shortest path when dist[p] + w == dist[t] up to ``rtol`` relative error.
    """
    n = dist.size
    out = np.full(n, np.inf)
    if order.size == 0:
        return out
    out[order[0]] = 0.0
    for i in range(1, order.size):
        t = order[i]
        dt = dist[t]
        tol = rtol * max(dt, 1.0)
        best = np.inf
        for j in range(indptr[t], indptr[t + 1]):
            p = nbr[j]
            dp = dist[p]
            if dp < dt and abs(dp + hw[j] - dt) <= tol:
                c = max(out[p], hw[j])
                if c < best:
                    best = c
        out[t] = best
    return out


@njit(cache=True)
def canonical_bottleneck(order, parent, parent_half, hw):
    out = np.full(parent.size, np.inf)
    if order.size == 0:
        return out
    out[order[0]] = 0.0
    for i in range(1, order.size):
        v = order[i]
        out[v] = max(out[parent[v]], hw[parent_half[v]])
    return out


@njit(cache=True)
def _record(max_keep, rec_s, rec_t, rec_x, nrec, s, t, x):
    if nrec < max_keep:
        rec_s[nrec] = s
        rec_t[nrec] = t
        rec_x[nrec] = x
        return nrec + 1
    return nrec


@njit(cache=True)
def additive_sweep(g_ptr, g_nbr, h_ptr, h_nbr, k, sources, t_ptr, t_list, all_upper, max_keep):
    """Compare BFS distances in G and H from each source.

    Targets of source i are ``t_list[t_ptr[i]:t_ptr[i+1]]``, or every node
    with a larger id when ``all_upper`` is set. Pairs unreachable in G are
    skipped; pairs reachable in G but not in H have surplus +inf.
    """
    checked = 0
    violations = 0
    worst = -np.inf
    ws = -1
    wt = -1
    rec_s = np.empty(max_keep, dtype=np.int64)
    rec_t = np.empty(max_keep, dtype=np.int64)
    rec_x = np.empty(max_keep, dtype=np.float64)
    nrec = 0
    n = g_ptr.size - 1
    for i in range(sources.size):
        s = sources[i]
        dg = bfs_dist(g_ptr, g_nbr, s)
        dh = bfs_dist(h_ptr, h_nbr, s)
        if all_upper:
            lo = s + 1
            hi = n
        else:
            lo = t_ptr[i]
            hi = t_ptr[i + 1]
        for q in range(lo, hi):
            t = q if all_upper else t_list[q]
            if t == s or dg[t] < 0:
                continue
            checked += 1
            if dh[t] < 0:
                x = np.inf
            else:
                x = float(dh[t] - dg[t] - k)
            if x > worst:
                worst = x
                ws = s
                wt = t
            if x > 0:
                violations += 1
                nrec = _record(max_keep, rec_s, rec_t, rec_x, nrec, s, t, x)
    return checked, violations, worst, ws, wt, rec_s[:nrec], rec_t[:nrec], rec_x[:nrec]


@njit(cache=True)
def weighted_sweep(g_ptr, g_nbr, g_hw, h_ptr, h_nbr, h_hw, local_k, global_err, tol, rtol,
                   strict, sources, t_ptr, t_list, all_upper, max_keep):
    """Check dist_H <= dist_G + local_k * W(s,t) + global_err from each source.

    W(s,t) is the minimax bottleneck over all shortest paths when ``strict``,
    otherwise the bottleneck of the Dijkstra tree path. Surplus above ``tol``
    counts as a violation.
    """
    checked = 0
    violations = 0
    worst = -np.inf
    ws = -1
    wt = -1
    rec_s = np.empty(max_keep, dtype=np.int64)
    rec_t = np.empty(max_keep, dtype=np.int64)
    rec_x = np.empty(max_keep, dtype=np.float64)
    nrec = 0
    n = g_ptr.size - 1
    for i in range(sources.size):
        s = sources[i]
        dg, par, ph, order = dijkstra(g_ptr, g_nbr, g_hw, s, np.inf)
        if strict:
            bw = minimax_shortest(g_ptr, g_nbr, g_hw, dg, order, rtol)
        else:
            bw = canonical_bottleneck(order, par, ph, g_hw)
        dh = dijkstra(h_ptr, h_nbr, h_hw, s, np.inf)[0]
        if all_upper:
            lo = s + 1
            hi = n
        else:
            lo = t_ptr[i]
            hi = t_ptr[i + 1]
        for q in range(lo, hi):
            t = q if all_upper else t_list[q]
            if t == s or dg[t] == np.inf:
                continue
            checked += 1
            x = dh[t] - (dg[t] + local_k * bw[t] + global_err)
            if x > worst:
                worst = x
                ws = s
                wt = t
            if x > tol:
                violations += 1
                nrec = _record(max_keep, rec_s, rec_t, rec_x, nrec, s, t, x)
    return checked, violations, worst, ws, wt, rec_s[:nrec], rec_t[:nrec], rec_x[:nrec]
