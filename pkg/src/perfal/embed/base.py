"""Embedding configuration, the corpus-level matrix type, and aggregation.

A configuration names the method, latent dimension, node-to-graph
aggregation, and the information scope controlling which graphs a fit may
see. Method-dependent defaults (epochs, aggregation) are filled by
``resolved()`` so a config can be built from sparse CLI flags.
"""

import csv
import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from ..errors import ConfigError, ShapeError

METHODS = ("manual", "graph2vec", "deepwalk", "node2vec", "hope", "grarep")
SCOPE_FULL = "train-unlabeled-test"
SCOPE_TRAIN = "train-unlabeled"
SCOPE_SPLIT = "split-space"
SCOPES = (SCOPE_FULL, SCOPE_TRAIN, SCOPE_SPLIT)
AGGREGATIONS = ("none", "mean", "sum")

# methods whose unit of embedding is the node, needing aggregation
NODE_LEVEL = ("deepwalk", "node2vec", "hope", "grarep")
# methods fit on a specific graph set, unable to embed unseen graphs
TRANSDUCTIVE = ("graph2vec", "deepwalk", "node2vec", "hope", "grarep")


@dataclass(frozen=True)
class EmbeddingConfig:
    method: str = "graph2vec"
    dim: int = 128
    scope: str = SCOPE_FULL
    aggregation: str | None = None
    seed: int = 0
    wl_iterations: int = 3
    negatives: int = 5
    epochs: int | None = None
    lr: float = 0.025
    walks_per_node: int = 10
    walk_length: int = 40
    window: int = 5
    p: float = 1.0
    q: float = 1.0
    beta: float | None = None
    k_steps: int = 4

    def resolved(self):
        """Config with method-dependent defaults made concrete."""
        agg = self.aggregation
        if agg is None:
            agg = "mean" if self.method in NODE_LEVEL else "none"
        epochs = self.epochs
        if epochs is None:
            epochs = 50 if self.method == "graph2vec" else 5
        p, q = (1.0, 1.0) if self.method == "deepwalk" else (self.p, self.q)
        return replace(self, aggregation=agg, epochs=epochs, p=p, q=q)

    def validate(self):
        cfg = self.resolved()
        if cfg.method not in METHODS:
            raise ConfigError(f"unknown embedding method {cfg.method!r}")
        if cfg.scope not in SCOPES:
            raise ConfigError(f"unknown scope {cfg.scope!r}")
        if cfg.aggregation not in AGGREGATIONS:
            raise ConfigError(f"unknown aggregation {cfg.aggregation!r}")
        if cfg.dim < 1:
            raise ConfigError(f"dim must be positive, got {cfg.dim}")
        if cfg.method in NODE_LEVEL and cfg.aggregation == "none":
            raise ConfigError(f"{cfg.method} needs mean or sum aggregation")
        if cfg.method not in NODE_LEVEL and cfg.aggregation != "none":
            raise ConfigError(f"{cfg.method} is graph-level; aggregation must be none")
        if cfg.method in TRANSDUCTIVE and cfg.scope == SCOPE_TRAIN:
            raise ConfigError(
                f"{cfg.method} cannot embed test graphs it never saw; "
                f"use {SCOPE_SPLIT} or {SCOPE_FULL}"
            )
        if cfg.method == "hope" and cfg.dim % 2 != 0:
            raise ConfigError(f"hope dim must be even, got {cfg.dim}")
        if cfg.method == "grarep" and cfg.dim % cfg.k_steps != 0:
            raise ConfigError(
                f"grarep dim {cfg.dim} not divisible by k_steps {cfg.k_steps}"
            )
        return cfg


@dataclass
class EmbeddingMatrix:
    """Row-per-graph matrix with per-row feature-space tags.

    Tags record which fit produced a row: "full" for a single fit over the
    whole corpus, "train"/"test" for the two fits of split-space scope.
    """

    ids: tuple = ()
    rows: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))
    config: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    tags: tuple = ()

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        if self.rows.ndim != 2 or self.rows.shape[0] != len(self.ids):
            raise ShapeError(
                f"rows {self.rows.shape} do not match {len(self.ids)} graph ids"
            )
        if len(self.tags) != len(self.ids):
            raise ShapeError("one feature-space tag required per row")
        if self.rows.size and not np.isfinite(self.rows).all():
            raise ShapeError("embedding rows must be finite")

    @property
    def dim(self):
        return self.rows.shape[1]

    def save(self, path):
        """CSV of rows plus a JSON sidecar with config, seed, and tags."""
        path = Path(path)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["graph_id"] + [f"dim_{i}" for i in range(self.dim)])
            for gid, row in zip(self.ids, self.rows):
                writer.writerow([gid] + ["%.17g" % v for v in row])
        sidecar = {"config": asdict(self.config), "tags": list(self.tags)}
        path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")

    @classmethod
    def load(cls, path):
        path = Path(path)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            ids = []
            data = []
            for rec in reader:
                ids.append(rec[0])
                data.append([float(v) for v in rec[1:]])
        sidecar = json.loads(path.with_suffix(".json").read_text())
        cfg = EmbeddingConfig(**sidecar["config"])
        dim = len(header) - 1
        rows = np.asarray(data, dtype=float).reshape(len(ids), dim)
        return cls(
            ids=tuple(ids), rows=rows, config=cfg, tags=tuple(sidecar["tags"])
        )


def aggregate(node_vectors, graph, mode):
    """Element-wise mean or sum of a graph's node vectors."""
    if mode not in ("mean", "sum"):
        raise ConfigError(f"aggregation must be mean or sum, got {mode!r}")
    V = np.asarray(node_vectors, dtype=float)
    if V.ndim != 2:
        raise ShapeError("node vectors must form a 2-D matrix")
    n = len(graph.nodes)
    if V.shape[0] != n:
        raise ShapeError(f"{V.shape[0]} vectors for {n} nodes")
    if n == 0:
        return np.zeros(V.shape[1])
    return V.mean(axis=0) if mode == "mean" else V.sum(axis=0)
