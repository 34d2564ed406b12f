"""Corpus-level embedding under an information scope.

The scope controls which graphs each fit is allowed to see relative to a
labeled/unlabeled/test split. A single fit over everything tags every row
"full"; split-space runs one fit on the train pool for train rows and a
second fit that adds the test graphs for test rows, so the two groups live
in different feature spaces and carry different tags.
"""

import numpy as np

from ..errors import ConfigError
from ..fa_ast import build_vocabulary
from ..graph_core import manual_embed
from .base import SCOPE_FULL, SCOPE_SPLIT, EmbeddingMatrix, aggregate
from .graph2vec import graph2vec_fit
from .grarep import grarep_fit
from .hope import hope_fit
from .skipgram import skipgram_fit
from .walks import random_walks


def _node_key(node):
    return (node.kind, node.token if node.token is not None else "⊥")


def _fit_walk_method(graphs, cfg):
    """Shared-vocabulary skip-gram over walks from every graph."""
    vocab = build_vocabulary(graphs)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(graphs))
    walks = []
    for g, seed in zip(graphs, seeds):
        node_ids = [vocab[_node_key(n)] for n in g.nodes]
        for walk in random_walks(
            g, cfg.walks_per_node, cfg.walk_length, cfg.p, cfg.q, seed
        ):
            walks.append([node_ids[v] for v in walk])
    vectors, _ = skipgram_fit(
        walks,
        cfg.dim,
        cfg.window,
        cfg.negatives,
        cfg.epochs,
        cfg.lr,
        cfg.seed,
        vocab_size=vocab.size,
    )
    out = np.empty((len(graphs), cfg.dim))
    for i, g in enumerate(graphs):
        node_vecs = vectors[[vocab[_node_key(n)] for n in g.nodes]]
        out[i] = aggregate(node_vecs, g, cfg.aggregation)
    return out


def _fit_per_graph(graphs, cfg):
    out = np.empty((len(graphs), cfg.dim))
    for i, g in enumerate(graphs):
        if cfg.method == "hope":
            node_vecs = hope_fit(g, cfg.dim, cfg.beta)
        else:
            node_vecs = grarep_fit(g, cfg.dim, cfg.k_steps)
        out[i] = aggregate(node_vecs, g, cfg.aggregation)
    return out


def _fit(graphs, cfg):
    """Rows for exactly these graphs, in the given order."""
    if cfg.method == "graph2vec":
        return graph2vec_fit(
            graphs,
            cfg.dim,
            cfg.wl_iterations,
            cfg.negatives,
            cfg.epochs,
            cfg.lr,
            cfg.seed,
        )
    if cfg.method in ("deepwalk", "node2vec"):
        return _fit_walk_method(graphs, cfg)
    return _fit_per_graph(graphs, cfg)


def embed_corpus(corpus, split, cfg):
    """EmbeddingMatrix over the corpus, honoring the configured scope.

    ``split`` is the (labeled, unlabeled, test) triple of corpus positions;
    together the three parts must cover every graph exactly once.
    """
    cfg = cfg.validate()
    corpus = list(corpus)
    n = len(corpus)
    L, U, T = (sorted(part) for part in split)
    counts = np.zeros(n, dtype=int)
    for part in (L, U, T):
        for i in part:
            if not 0 <= i < n:
                raise ConfigError(f"split id {i} outside corpus of size {n}")
            counts[i] += 1
    if not (counts == 1).all():
        raise ConfigError("split must partition the corpus")
    ids = tuple(g.source_path for g in corpus)

    if cfg.method == "manual":
        rows = np.stack([manual_embed(g) for g in corpus]) if n else np.zeros((0, 12))
        return EmbeddingMatrix(ids=ids, rows=rows, config=cfg, tags=("full",) * n)

    if cfg.scope == SCOPE_FULL:
        rows = _fit(corpus, cfg)
        return EmbeddingMatrix(ids=ids, rows=rows, config=cfg, tags=("full",) * n)

    if cfg.scope == SCOPE_SPLIT:
        rows = np.zeros((n, cfg.dim))
        tags = ["train"] * n
        train = sorted(L + U)
        if train:
            rows[train] = _fit([corpus[i] for i in train], cfg)
        full = _fit(corpus, cfg)
        for i in T:
            rows[i] = full[i]
            tags[i] = "test"
        return EmbeddingMatrix(ids=ids, rows=rows, config=cfg, tags=tuple(tags))

    # train-unlabeled scope reaches here only for methods validate() rejects
    raise ConfigError(f"scope {cfg.scope!r} unsupported for {cfg.method}")
