"""Katz-proximity factorization for directed graphs.

The similarity matrix S = (I - beta*A)^{-1} beta*A sums walks of every
length, discounted by beta per step. A truncated SVD splits S into source
and target halves, so edge direction survives in the embedding.
"""

import numpy as np

from ..errors import BetaTooLarge, ConfigError


def _adjacency(graph):
    n = len(graph.nodes)
    A = np.zeros((n, n))
    for src, dst, _ in graph.edges:
        A[src, dst] = 1.0
    return A


def spectral_radius(A, iters=200, tol=1e-12):
    """Power-iteration estimate; exact 0 for nilpotent (acyclic) matrices."""
    n = A.shape[0]
    if n == 0 or not A.any():
        return 0.0
    x = np.ones(n)
    r = 0.0
    for _ in range(iters):
        y = A @ x
        norm = float(np.linalg.norm(y))
        if norm < 1e-300:
            return 0.0
        r_new = norm / float(np.linalg.norm(x))
        x = y / norm
        if abs(r_new - r) <= tol * max(1.0, r_new):
            return r_new
        r = r_new
    return r


def default_beta(graph):
    """0.5 / max simple out-degree: inside the Katz convergence region."""
    A = _adjacency(graph)
    max_out = A.sum(axis=1).max() if A.size else 0.0
    return 0.5 / max_out if max_out > 0 else 0.5


def katz_matrix(A, beta):
    n = A.shape[0]
    return np.linalg.solve(np.eye(n) - beta * A, beta * A)


def hope_fit(graph, dim, beta=None):
    """Node vectors: source half U*sqrt(s) next to target half V*sqrt(s)."""
    if dim % 2 != 0:
        raise ConfigError(f"hope embedding dim must be even, got {dim}")
    A = _adjacency(graph)
    n = A.shape[0]
    if beta is None:
        max_out = A.sum(axis=1).max() if n else 0.0
        beta = 0.5 / max_out if max_out > 0 else 0.5
    rho = spectral_radius(A)
    if rho > 0 and beta * rho >= 1.0 - 1e-9:
        raise BetaTooLarge(
            f"beta={beta:g} outside Katz convergence (needs < {1.0 / rho:g})"
        )
    S = katz_matrix(A, beta)
    U, s, Vt = np.linalg.svd(S)
    half = dim // 2
    k = min(half, n)
    root = np.sqrt(s[:k])
    src = U[:, :k] * root
    dst = Vt[:k].T * root
    if k < half:
        pad = ((0, 0), (0, half - k))
        src = np.pad(src, pad)
        dst = np.pad(dst, pad)
    return np.concatenate([src, dst], axis=1)
