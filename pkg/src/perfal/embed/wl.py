"""Weisfeiler-Lehman relabeling over FA-AST graphs.

Labels are 64-bit digests so features are comparable across graphs without
a shared vocabulary pass. Iteration 0 hashes a node's (kind, token) pair;
iteration k hashes the previous label together with the sorted multiset of
out-neighbor labels over edges of every kind. The salt pins digests across
platforms and runs.
"""

import hashlib
import struct

WL_SALT = b"perfal-wl-v1"


def _digest(*parts):
    h = hashlib.blake2b(digest_size=8, key=WL_SALT)
    for part in parts:
        h.update(part)
        h.update(b"\x1f")
    return struct.unpack("<Q", h.digest())[0]


def _initial_labels(g):
    labels = []
    for n in g.nodes:
        token = n.token if n.token is not None else "⊥"
        labels.append(_digest(b"0", n.kind.encode(), token.encode()))
    return labels


def wl_relabel(g, iterations):
    """Per-iteration node labels: a list of length iterations+1, each entry
    holding one 64-bit label per node (node id order)."""
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    out_neighbors = [[] for _ in g.nodes]
    for s, d, _ in g.edges:
        out_neighbors[s].append(d)
    labels = _initial_labels(g)
    rounds = [labels]
    for _ in range(iterations):
        prev = rounds[-1]
        nxt = []
        for v in range(len(g.nodes)):
            neigh = sorted(prev[u] for u in out_neighbors[v])
            packed = struct.pack(f"<{len(neigh) + 1}Q", prev[v], *neigh)
            nxt.append(_digest(b"k", packed))
        rounds.append(nxt)
    return rounds


def wl_feature_multiset(g, iterations):
    """All WL features of a graph: one label per node per iteration,
    flattened. This is the graph's document for graph2vec."""
    features = []
    for round_labels in wl_relabel(g, iterations):
        features.extend(round_labels)
    return features
