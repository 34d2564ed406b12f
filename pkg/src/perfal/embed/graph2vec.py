"""Whole-graph vectors from Weisfeiler-Lehman subtree features.

Each graph is a document whose words are its WL labels from every
iteration (including iteration 0). Document vectors are trained against
feature vectors with negative-sampling skip-gram, so graphs sharing many
subtree shapes end up close in the latent space.
"""

import numpy as np

from .skipgram import train_pairs
from .wl import wl_feature_multiset


def graph2vec_fit(corpus, dim, wl_iterations, negatives, epochs, lr, seed):
    """One row per graph, in corpus order. Deterministic per seed."""
    if not corpus:
        raise ValueError("empty corpus")
    docs = [wl_feature_multiset(g, wl_iterations) for g in corpus]
    vocab = sorted({f for doc in docs for f in doc})
    index = {f: i for i, f in enumerate(vocab)}
    centers = np.fromiter(
        (gi for gi, doc in enumerate(docs) for _ in doc),
        dtype=np.int64,
        count=sum(len(d) for d in docs),
    )
    contexts = np.fromiter(
        (index[f] for doc in docs for f in doc),
        dtype=np.int64,
        count=len(centers),
    )
    rows, _, _ = train_pairs(
        centers,
        contexts,
        len(docs),
        dim,
        negatives,
        epochs,
        lr,
        seed,
        context_size=len(vocab),
    )
    return rows
