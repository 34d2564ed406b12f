"""Log-transition-matrix factorization over multiple step counts.

For each step count k up to k_steps, the positive part of
log(T^k) - log(1/n) is factored with a truncated SVD; the per-step factors
are concatenated. Rows of T for nodes without outgoing edges fall back to
the uniform distribution.
"""

import numpy as np

from ..errors import ConfigError


def transition_matrix(graph):
    """Row-stochastic simple directed adjacency; isolated rows uniform."""
    n = len(graph.nodes)
    A = np.zeros((n, n))
    for src, dst, _ in graph.edges:
        A[src, dst] = 1.0
    out = A.sum(axis=1)
    T = np.full((n, n), 1.0 / n) if n else A
    nz = out > 0
    T[nz] = A[nz] / out[nz, None]
    return T


def grarep_fit(graph, dim, k_steps):
    """Node vectors: k_steps blocks of dim/k_steps columns each."""
    if k_steps < 1:
        raise ConfigError(f"k_steps must be >= 1, got {k_steps}")
    if dim % k_steps != 0:
        raise ConfigError(f"dim {dim} is not divisible by k_steps {k_steps}")
    n = len(graph.nodes)
    if n == 0:
        return np.zeros((0, dim))
    sub = dim // k_steps
    T = transition_matrix(graph)
    Tk = np.eye(n)
    parts = []
    for _ in range(k_steps):
        Tk = Tk @ T
        # log(0) -> -inf would poison the clamp; floor keeps it finite
        X = np.log(np.maximum(Tk, 1e-300)) + np.log(n)
        np.maximum(X, 0.0, out=X)
        U, s, _ = np.linalg.svd(X)
        k = min(sub, n)
        part = U[:, :k] * np.sqrt(s[:k])
        if k < sub:
            part = np.pad(part, ((0, 0), (0, sub - k)))
        parts.append(part)
    return np.concatenate(parts, axis=1)
