"""Unsupervised whole-graph embeddings.

Methods: fixed metric vectors ("manual"), WL-feature document vectors
(graph2vec), walk-based node vectors (deepwalk, node2vec), and
factorization node vectors (hope, grarep), with mean/sum aggregation from
nodes to graphs and scope control over which graphs each fit may see.
"""

from .base import (
    AGGREGATIONS,
    METHODS,
    NODE_LEVEL,
    SCOPE_FULL,
    SCOPE_SPLIT,
    SCOPE_TRAIN,
    SCOPES,
    TRANSDUCTIVE,
    EmbeddingConfig,
    EmbeddingMatrix,
    aggregate,
)
from .graph2vec import graph2vec_fit
from .grarep import grarep_fit, transition_matrix
from .hope import default_beta, hope_fit, katz_matrix, spectral_radius
from .pipeline import embed_corpus
from .skipgram import skipgram_fit, train_pairs, walk_pairs
from .walks import random_walks
from .wl import wl_feature_multiset, wl_relabel

__all__ = [
    "AGGREGATIONS",
    "METHODS",
    "NODE_LEVEL",
    "SCOPE_FULL",
    "SCOPE_SPLIT",
    "SCOPE_TRAIN",
    "SCOPES",
    "TRANSDUCTIVE",
    "EmbeddingConfig",
    "EmbeddingMatrix",
    "aggregate",
    "graph2vec_fit",
    "grarep_fit",
    "transition_matrix",
    "default_beta",
    "hope_fit",
    "katz_matrix",
    "spectral_radius",
    "embed_corpus",
    "skipgram_fit",
    "train_pairs",
    "walk_pairs",
    "random_walks",
    "wl_feature_multiset",
    "wl_relabel",
]
