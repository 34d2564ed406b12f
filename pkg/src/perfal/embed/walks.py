"""Random walks over code graphs for the walk-based embeddings.

Walks follow outgoing edges of every kind; parallel edges raise the chance
of picking that neighbor. With p = q = 1 the walk is first-order
(DeepWalk) and whole passes advance in lockstep; otherwise steps are biased
by the node2vec return and in-out parameters and sampled one at a time. A
node with no outgoing edges truncates the walk early.
"""

import numpy as np


def _weighted_out_adjacency(graph):
    """Per-node (neighbors, weights) arrays counting edge multiplicity."""
    counts = [dict() for _ in range(len(graph.nodes))]
    for src, dst, _ in graph.edges:
        d = counts[src]
        d[dst] = d.get(dst, 0) + 1
    adj = []
    for d in counts:
        if d:
            nbrs = np.fromiter(d.keys(), dtype=np.int64, count=len(d))
            wts = np.fromiter(d.values(), dtype=float, count=len(d))
            adj.append((nbrs, wts / wts.sum()))
        else:
            adj.append((None, None))
    return adj


def _flat_sampler(adj):
    """Flat neighbor table with a globally monotone inverse-CDF array.

    Node v's segment of ``cum`` lives in (v, v + 1], so a single
    searchsorted over v + uniform(0, 1) picks a weighted neighbor for
    every walker at once.
    """
    n = len(adj)
    deg = np.array([0 if nbrs is None else len(nbrs) for nbrs, _ in adj])
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    flat_nbrs = np.empty(indptr[-1], dtype=np.int64)
    cum = np.empty(indptr[-1], dtype=float)
    for v, (nbrs, wts) in enumerate(adj):
        if nbrs is None:
            continue
        lo, hi = indptr[v], indptr[v + 1]
        flat_nbrs[lo:hi] = nbrs
        seg = np.minimum(np.cumsum(wts), 1.0)
        seg[-1] = 1.0
        cum[lo:hi] = v + seg
    return deg, indptr, flat_nbrs, cum


def _first_order_pass(deg, indptr, flat_nbrs, cum, walk_length, rng):
    """One lockstep pass starting a walk at every node."""
    n = len(deg)
    buf = np.full((n, walk_length), -1, dtype=np.int64)
    cur = np.arange(n, dtype=np.int64)
    buf[:, 0] = cur
    alive = np.ones(n, dtype=bool)
    for step in range(1, walk_length):
        alive[alive] = deg[cur[alive]] > 0
        if not alive.any():
            break
        r = rng.random(int(alive.sum()))
        j = np.searchsorted(cum, cur[alive] + r, side="right")
        cur[alive] = flat_nbrs[j]
        buf[alive, step] = cur[alive]
    return buf


def _second_order_walk(start, adj, out_sets, walk_length, p, q, rng):
    walk = [start]
    while len(walk) < walk_length:
        cur = walk[-1]
        nbrs, wts = adj[cur]
        if nbrs is None:
            break
        if len(walk) == 1:
            probs = wts
        else:
            prev = walk[-2]
            bias = np.empty(len(nbrs))
            prev_out = out_sets[prev]
            for i, nb in enumerate(nbrs):
                if nb == prev:
                    bias[i] = 1.0 / p
                elif nb in prev_out:
                    bias[i] = 1.0
                else:
                    bias[i] = 1.0 / q
            probs = wts * bias
            probs = probs / probs.sum()
        walk.append(int(nbrs[rng.choice(len(nbrs), p=probs)]))
    return walk


def random_walks(graph, num_walks, walk_length, p, q, seed):
    """Seeded walks as lists of node ids, num_walks per start node.

    The outer loop runs one pass over all nodes per walk index, so walk
    order (and hence the RNG stream) is stable across calls.
    """
    rng = np.random.default_rng(seed)
    adj = _weighted_out_adjacency(graph)
    n = len(graph.nodes)
    walks = []
    if p == 1 and q == 1:
        deg, indptr, flat_nbrs, cum = _flat_sampler(adj)
        for _ in range(num_walks):
            buf = _first_order_pass(deg, indptr, flat_nbrs, cum, walk_length, rng)
            for row in buf:
                end = np.argmax(row < 0) if (row < 0).any() else walk_length
                walks.append(row[:end].tolist())
        return walks
    out_sets = [set(nbrs) if nbrs is not None else set() for nbrs, _ in adj]
    for _ in range(num_walks):
        for start in range(n):
            walks.append(
                _second_order_walk(start, adj, out_sets, walk_length, p, q, rng)
            )
    return walks
