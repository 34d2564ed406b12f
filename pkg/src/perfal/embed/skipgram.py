"""Negative-sampling skip-gram over integer token streams.

A single vectorized SGD loop shared by the walk-based embeddings and, in
document flavor, by graph2vec. Training is single-threaded and seeded, so
identical inputs give bit-identical vectors.
"""

import numpy as np


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -30.0, 30.0)))


def build_noise_distribution(counts):
    """Unigram^0.75 sampling distribution over token ids."""
    freq = np.asarray(counts, dtype=float) ** 0.75
    total = freq.sum()
    if total == 0:
        return np.full(len(freq), 1.0 / max(len(freq), 1))
    return freq / total


def walk_pairs(walks, window):
    """(center, context) id pairs from walks with a fixed symmetric window."""
    centers = []
    contexts = []
    for walk in walks:
        x = np.asarray(walk, dtype=np.int64)
        for d in range(1, min(window, x.size - 1) + 1):
            centers.append(x[:-d])
            contexts.append(x[d:])
            centers.append(x[d:])
            contexts.append(x[:-d])
    if not centers:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    return np.concatenate(centers), np.concatenate(contexts)


# Cap on how many same-row gradients one chunk may effectively sum. Rare
# rows keep true per-pair SGD steps; a token hitting a chunk hundreds of
# times takes one bounded aggregate step instead of a divergent summed one.
MAX_ROW_ACCUM = 32


def _apply_row_update(table, rows, grads, step):
    """table[rows] -= step * mean-grad * min(multiplicity, MAX_ROW_ACCUM)."""
    order = np.argsort(rows, kind="stable")
    sorted_rows = rows[order]
    starts = np.concatenate(
        [[0], np.flatnonzero(np.diff(sorted_rows)) + 1]
    )
    acc = np.add.reduceat(grads[order], starts, axis=0)
    mult = np.diff(np.concatenate([starts, [sorted_rows.size]]))[:, None]
    scale = (np.minimum(mult, MAX_ROW_ACCUM) / mult).astype(np.float32)
    table[sorted_rows[starts]] -= np.float32(step) * scale * acc


def train_pairs(
    centers,
    contexts,
    vocab_size,
    dim,
    negatives,
    epochs,
    lr,
    seed,
    noise=None,
    context_size=None,
    chunk=8192,
):
    """SGD over (center, context) pairs with negative sampling.

    Center vectors live in one table, context vectors in another (sizes may
    differ: graph2vec trains graph rows against feature columns). Returns
    (center_table, context_table, epoch_losses). lr decays linearly per
    chunk to 1e-4 of its start value.
    """
    rng = np.random.default_rng(seed)
    if context_size is None:
        context_size = vocab_size
    # float32 tables: SGD noise dwarfs the precision loss, bandwidth halves
    W = ((rng.random((vocab_size, dim)) - 0.5) / dim).astype(np.float32)
    C = np.zeros((context_size, dim), dtype=np.float32)
    if noise is None:
        counts = np.bincount(contexts, minlength=context_size)
        noise = build_noise_distribution(counts)
    n_pairs = len(centers)
    if n_pairs == 0 or epochs == 0:
        return W, C, []
    centers = np.ascontiguousarray(centers, dtype=np.int32)
    contexts = np.ascontiguousarray(contexts, dtype=np.int32)
    noise_cdf = np.cumsum(noise)
    noise_cdf[-1] = 1.0
    total_chunks = max(1, epochs * ((n_pairs + chunk - 1) // chunk))
    step = 0
    losses = []
    for _ in range(epochs):
        order = rng.permutation(n_pairs)
        epoch_loss = 0.0
        for lo in range(0, n_pairs, chunk):
            idx = order[lo : lo + chunk]
            cur_lr = lr * max(1e-4, 1.0 - step / total_chunks)
            step += 1
            ctr = centers[idx]
            pos = contexts[idx]
            neg = np.searchsorted(
                noise_cdf, rng.random((len(idx), negatives))
            ).astype(np.int32)
            w = W[ctr]  # (b, d)
            cpos = C[pos]  # (b, d)
            cneg = C[neg]  # (b, k, d)
            s_pos = _sigmoid((w * cpos).sum(axis=1))
            s_neg = _sigmoid((cneg @ w[:, :, None]).squeeze(-1))  # (b, k)
            epoch_loss -= np.log(np.maximum(s_pos, 1e-12)).sum()
            epoch_loss -= np.log(np.maximum(1.0 - s_neg, 1e-12)).sum()
            g_pos = (s_pos - 1.0)[:, None]  # d/d(score)
            g_neg = s_neg[:, :, None]
            grad_w = g_pos * cpos + (g_neg * cneg).sum(axis=1)
            _apply_row_update(W, ctr, grad_w, cur_lr)
            c_idx = np.concatenate([pos, neg.reshape(-1)])
            c_grad = np.concatenate(
                [g_pos * w, (g_neg * w[:, None, :]).reshape(-1, w.shape[1])]
            )
            _apply_row_update(C, c_idx, c_grad, cur_lr)
        losses.append(epoch_loss / n_pairs)
    return W, C, losses


def skipgram_fit(walks, dim, window, negatives, epochs, lr, seed, vocab_size=None):
    """Node vectors from random walks. Returns (vectors, epoch_losses)."""
    if not walks:
        raise ValueError("no walks to train on")
    if vocab_size is None:
        vocab_size = max(max(w) for w in walks if w) + 1
    centers, contexts = walk_pairs(walks, window)
    W, _, losses = train_pairs(
        centers, contexts, vocab_size, dim, negatives, epochs, lr, seed
    )
    return W, losses
