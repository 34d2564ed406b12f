"""Directed-multigraph kernel and the graph metrics of the manual embedding.

Conventions, fixed so every number has one defined value:

- num_edges counts parallel edges; every other metric works on the simple
  projection (parallel edges collapsed, self-loops dropped).
- Distances (characteristic path length, diameter, efficiencies), clustering
  and assortativity use the undirected simple projection; edge density uses
  the directed simple graph, |E| / (|V|(|V|-1)); centralities are directed.
- avg_degree is the mean undirected simple degree.
- Unreachable pairs are excluded from distance averages and contribute 0 to
  efficiency. Degenerate cases (empty graphs, zero variance) map to 0.
- assortativity is the Pearson correlation over symmetrized edge endpoint
  degree pairs: each undirected edge {u,v} contributes (deg u, deg v) and
  (deg v, deg u).
- tree_sim = (|E| - (|V|-1)) / ((|V|-1)(|V|/2 - 1)) on the undirected simple
  projection, clamped to [0,1]; 0 when |V| < 3.
"""

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

METRIC_SLOTS = (
    "char_path_length",
    "global_efficiency",
    "local_efficiency",
    "assortativity",
    "gcc",
    "transitivity",
    "num_nodes",
    "num_edges",
    "diameter",
    "edge_density",
    "avg_degree",
    "tree_sim",
)


class Digraph:
    """Dense-id directed multigraph supporting the metric suite."""

    def __init__(self, n, edges):
        self.n = n
        self.edges = [(u, v) for u, v in edges if u != v]
        self._simple = None
        self._und = None

    @classmethod
    def from_code_graph(cls, g):
        return cls(len(g.nodes), [(s, d) for s, d, _ in g.edges])

    @property
    def simple_edges(self):
        if self._simple is None:
            self._simple = sorted(set(self.edges))
        return self._simple

    @property
    def undirected_edges(self):
        if self._und is None:
            self._und = sorted({(min(u, v), max(u, v)) for u, v in self.edges})
        return self._und

    def undirected_adjacency_sets(self):
        adj = [set() for _ in range(self.n)]
        for u, v in self.undirected_edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def out_adjacency(self):
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
        return adj

    def _csr(self, directed):
        edges = self.simple_edges if directed else self.undirected_edges
        if not edges:
            return csr_matrix((self.n, self.n))
        rows = [u for u, _ in edges]
        cols = [v for _, v in edges]
        data = np.ones(len(edges))
        return csr_matrix((data, (rows, cols)), shape=(self.n, self.n))


def shortest_path_lengths(g, directed=True):
    """All-pairs hop distances; unreachable pairs are inf."""
    if g.n == 0:
        return np.zeros((0, 0))
    return shortest_path(
        g._csr(directed), method="D", directed=directed, unweighted=True
    )


def _finite_offdiag(dist):
    n = dist.shape[0]
    mask = np.isfinite(dist)
    np.fill_diagonal(mask, False)
    return dist[mask]


def characteristic_path_length(g):
    if g.n <= 1:
        return 0.0
    vals = _finite_offdiag(shortest_path_lengths(g, directed=False))
    if vals.size == 0:
        return 0.0
    return float(vals.mean())


def global_efficiency(g):
    if g.n <= 1:
        return 0.0
    dist = shortest_path_lengths(g, directed=False)
    n = g.n
    with np.errstate(divide="ignore"):
        inv = 1.0 / dist
    inv[~np.isfinite(inv)] = 0.0
    np.fill_diagonal(inv, 0.0)
    return float(inv.sum() / (n * (n - 1)))


def local_efficiency(g):
    if g.n == 0:
        return 0.0
    adj = g.undirected_adjacency_sets()
    total = 0.0
    for v in range(g.n):
        neigh = sorted(adj[v])
        if len(neigh) < 2:
            continue
        idx = {u: i for i, u in enumerate(neigh)}
        sub_edges = [
            (idx[a], idx[b])
            for i, a in enumerate(neigh)
            for b in neigh[i + 1 :]
            if b in adj[a]
        ]
        sub = Digraph(len(neigh), sub_edges)
        total += global_efficiency(sub)
    return float(total / g.n)


def assortativity(g):
    edges = g.undirected_edges
    if not edges:
        return 0.0
    deg = np.zeros(g.n)
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    xs = np.array([deg[u] for u, v in edges] + [deg[v] for u, v in edges])
    ys = np.array([deg[v] for u, v in edges] + [deg[u] for u, v in edges])
    sx = xs.std()
    sy = ys.std()
    if sx == 0.0 or sy == 0.0:
        return 0.0
    return float(((xs - xs.mean()) * (ys - ys.mean())).mean() / (sx * sy))


def clustering(g):
    """(gcc, transitivity) on the undirected simple projection."""
    if g.n == 0:
        return 0.0, 0.0
    adj = g.undirected_adjacency_sets()
    coeffs = np.zeros(g.n)
    triangles = 0
    triads = 0
    for v in range(g.n):
        neigh = sorted(adj[v])
        k = len(neigh)
        if k < 2:
            continue
        links = sum(
            1
            for i, a in enumerate(neigh)
            for b in neigh[i + 1 :]
            if b in adj[a]
        )
        coeffs[v] = 2.0 * links / (k * (k - 1))
        triangles += links  # each triangle counted once per corner
        triads += k * (k - 1) // 2
    gcc = float(coeffs.mean())
    transitivity = float(triangles / triads) if triads else 0.0
    return gcc, transitivity


def basic_metrics(g):
    """(num_nodes, num_edges, diameter, edge_density, avg_degree)."""
    n = g.n
    num_edges = len(g.edges)
    if n <= 1:
        return n, num_edges, 0.0, 0.0, 0.0
    dist = _finite_offdiag(shortest_path_lengths(g, directed=False))
    diameter = float(dist.max()) if dist.size else 0.0
    density = len(g.simple_edges) / (n * (n - 1))
    avg_degree = 2.0 * len(g.undirected_edges) / n
    return n, num_edges, diameter, float(density), float(avg_degree)


def tree_sim(g):
    n = g.n
    if n < 3:
        return 0.0
    m = len(g.undirected_edges)
    value = (m - (n - 1)) / ((n - 1) * (n / 2.0 - 1.0))
    return float(min(1.0, max(0.0, value)))


def betweenness(g, directed=True):
    """Exact Brandes betweenness; undirected mode halves pair contributions."""
    n = g.n
    score = np.zeros(n)
    if directed:
        adj = [[] for _ in range(n)]
        for u, v in g.simple_edges:
            adj[u].append(v)
    else:
        adj = [sorted(s) for s in g.undirected_adjacency_sets()]
    for s in range(n):
        stack = []
        preds = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1)
        dist[s] = 0
        queue = [s]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                score[w] += delta[w]
    if not directed:
        score /= 2.0
    return score


def closeness(g):
    """Directed closeness over incoming paths with Wasserman-Faust scaling."""
    n = g.n
    if n <= 1:
        return np.zeros(n)
    dist = shortest_path_lengths(g, directed=True)
    out = np.zeros(n)
    for u in range(n):
        col = dist[:, u]
        finite = np.isfinite(col)
        finite[u] = False
        r = int(finite.sum())
        total = float(col[finite].sum())
        if r == 0 or total == 0.0:
            continue
        out[u] = (r / (n - 1)) * (r / total)
    return out


def pagerank(g, damping=0.85, tol=1e-9, max_iter=200):
    n = g.n
    if n == 0:
        return np.zeros(0)
    rank = np.full(n, 1.0 / n)
    out_neighbors = [[] for _ in range(n)]
    for u, v in g.simple_edges:
        out_neighbors[u].append(v)
    out_deg = np.array([len(x) for x in out_neighbors], dtype=float)
    cols = g._csr(True)
    for _ in range(max_iter):
        dangling = rank[out_deg == 0].sum()
        with np.errstate(divide="ignore", invalid="ignore"):
            weights = np.where(out_deg > 0, rank / out_deg, 0.0)
        new = (1.0 - damping) / n + damping * (cols.T @ weights + dangling / n)
        if np.abs(new - rank).sum() < tol:
            rank = new
            break
        rank = new
    return rank


def centralities(g, directed=True):
    return betweenness(g, directed=directed), closeness(g), pagerank(g)


def metric_vector(g):
    """All 12 slots, in METRIC_SLOTS order, for a Digraph."""
    cpl = characteristic_path_length(g)
    geff = global_efficiency(g)
    leff = local_efficiency(g)
    assort = assortativity(g)
    gcc, trans = clustering(g)
    n, m, diameter, density, avg_deg = basic_metrics(g)
    ts = tree_sim(g)
    return np.array(
        [cpl, geff, leff, assort, gcc, trans, float(n), float(m), diameter, density, avg_deg, ts]
    )


def manual_embed(code_graph):
    """The fixed 12-metric vector of an FA-AST graph."""
    return metric_vector(Digraph.from_code_graph(code_graph))
