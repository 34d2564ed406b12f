"""Experiment harness: corpus ingestion, synthetic data, grid runs, reports."""

from .experiment import (
    DEFAULT_SEEDS,
    ExperimentConfig,
    IngestResult,
    cache_dir,
    corpus_fingerprint,
    embedding_labels,
    ingest,
    load_corpus,
    run_experiment,
)
from .report import report
from .synth import gen_synthetic

__all__ = [
    "DEFAULT_SEEDS",
    "ExperimentConfig",
    "IngestResult",
    "cache_dir",
    "corpus_fingerprint",
    "embedding_labels",
    "ingest",
    "load_corpus",
    "run_experiment",
    "report",
    "gen_synthetic",
]
