"""Experiment orchestration: ingestion, the passive/active grid, caching.

run_experiment walks the (embedding x strategy x seed) grid over a parsed,
labeled corpus: embeddings are computed once per (config, seed) and shared
across strategies, every run lands in its own CSV, per-cell aggregates and
plots are derived from those files, and failures are isolated per cell.
Everything downstream of the config is seeded, so re-running a config
reproduces every CSV byte for byte.
"""

import csv
import hashlib
import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from ..al import (
    STRATEGIES,
    LabelStore,
    make_passive_split,
    make_splits,
    run_active,
    run_passive,
)
from ..embed import SCOPE_FULL, EmbeddingConfig, EmbeddingMatrix, embed_corpus
from ..errors import ConfigError, MissingFile, MissingLabel, PerfalError
from ..fa_ast import CodeGraph, parse_corpus

DEFAULT_SEEDS = tuple(range(15))
LABEL_AGGREGATIONS = ("mean", "median")


@dataclass
class IngestResult:
    """Parsed graphs with aligned labels plus the drop report."""

    graphs: list
    labels: np.ndarray
    report: dict

    def __iter__(self):
        yield self.graphs
        yield self.labels


def _read_labels_table(labels_file):
    """path -> list of durations, validated positive and finite."""
    rows = {}
    with open(labels_file, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "path" not in reader.fieldnames:
            raise ConfigError(f"{labels_file}: expected header path,duration_ms")
        for lineno, rec in enumerate(reader, start=2):
            try:
                value = float(rec["duration_ms"])
            except (KeyError, TypeError, ValueError):
                raise ConfigError(f"{labels_file}:{lineno}: bad duration")
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(
                    f"{labels_file}:{lineno}: durations must be positive, got {value}"
                )
            rows.setdefault(rec["path"], []).append(value)
    return rows


def ingest(corpus_dir, labels_file, depth="file", aggregation="mean", use_cache=False):
    """Graphs and per-path labels for the parseable/labeled intersection.

    Files that parse but have no label row, label rows without a source
    file, and unparseable files are dropped and listed in the report; an
    empty intersection is a hard error.
    """
    if aggregation not in LABEL_AGGREGATIONS:
        raise ConfigError(f"label aggregation must be one of {LABEL_AGGREGATIONS}")
    table = _read_labels_table(labels_file)
    graphs, parse_failures = load_corpus(corpus_dir, depth, use_cache=use_cache)
    if not graphs:
        raise MissingFile(f"no parseable source files under {corpus_dir}")
    agg = np.mean if aggregation == "mean" else np.median
    kept = [g for g in graphs if g.source_path in table]
    if not kept:
        raise MissingLabel(
            f"no overlap between {labels_file} paths and parseable files"
        )
    parsed_paths = {g.source_path for g in graphs}
    failed_paths = {p for p, _ in parse_failures}
    report = {
        "missing_label": sorted(parsed_paths - set(table)),
        "missing_file": sorted(set(table) - parsed_paths - failed_paths),
        "parse_failures": [[p, msg] for p, msg in parse_failures],
    }
    labels = np.array([agg(table[g.source_path]) for g in kept], dtype=float)
    return IngestResult(graphs=kept, labels=labels, report=report)


@dataclass(frozen=True)
class ExperimentConfig:
    corpus_dir: str = ""
    labels_file: str = ""
    parse_depth: str = "file"
    embeddings: tuple = (
        EmbeddingConfig(method="manual"),
        EmbeddingConfig(method="graph2vec"),
    )
    strategies: tuple = STRATEGIES
    l0_size: int = 30
    batch_size: int = 20
    budget: int = None
    test_frac: float = 0.2
    seeds: tuple = DEFAULT_SEEDS
    output_dir: str = "results"
    label_aggregation: str = "mean"
    log_labels: bool = False
    committee: int = 10
    use_cache: bool = True

    def validate(self):
        embeddings = tuple(
            e if isinstance(e, EmbeddingConfig) else EmbeddingConfig(**e)
            for e in self.embeddings
        )
        for e in embeddings:
            e.validate()
        seeds = tuple(int(s) for s in self.seeds)
        if not seeds or len(set(seeds)) != len(seeds):
            raise ConfigError("seeds must be non-empty and distinct")
        strategies = tuple(self.strategies)
        for s in strategies:
            if s not in STRATEGIES:
                raise ConfigError(f"unknown strategy {s!r}")
        if self.parse_depth not in ("file", "system"):
            raise ConfigError("parse depth must be file or system")
        if self.label_aggregation not in LABEL_AGGREGATIONS:
            raise ConfigError(
                f"label aggregation must be one of {LABEL_AGGREGATIONS}"
            )
        if not embeddings:
            raise ConfigError("at least one embedding config required")
        if self.l0_size < 1 or self.batch_size < 1:
            raise ConfigError("l0 size and batch size must be positive")
        return replace(self, embeddings=embeddings, seeds=seeds, strategies=strategies)

    def to_dict(self):
        doc = asdict(self)
        doc["embeddings"] = [
            asdict(e) if isinstance(e, EmbeddingConfig) else dict(e)
            for e in self.embeddings
        ]
        doc["strategies"] = list(self.strategies)
        doc["seeds"] = list(self.seeds)
        return doc

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc)
        if "embeddings" in doc:
            doc["embeddings"] = tuple(
                e if isinstance(e, EmbeddingConfig) else EmbeddingConfig(**e)
                for e in doc["embeddings"]
            )
        for key in ("strategies", "seeds"):
            if key in doc:
                doc[key] = tuple(doc[key])
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)


def embedding_labels(configs):
    """Short unique name per embedding config, method-based."""
    labels = []
    for cfg in configs:
        base = cfg.method
        if cfg.method != "manual" and cfg.scope != SCOPE_FULL:
            base += "-split" if cfg.scope == "split-space" else "-train"
        label, k = base, 2
        while label in labels:
            label = f"{base}-{k}"
            k += 1
        labels.append(label)
    return labels


def cache_dir():
    env = os.environ.get("PERFAL_CACHE_DIR")
    return Path(env) if env else Path.home() / ".cache" / "perfal"


def _hash_obj(obj):
    payload = json.dumps(obj, sort_keys=True).encode()
    return hashlib.blake2b(payload, digest_size=16).hexdigest()


def corpus_fingerprint(corpus_dir, depth, suffix=".java"):
    """Content hash over every source file plus the parse depth."""
    corpus_dir = Path(corpus_dir)
    entries = []
    for p in sorted(corpus_dir.rglob(f"*{suffix}")):
        if p.is_file():
            digest = hashlib.blake2b(p.read_bytes(), digest_size=16).hexdigest()
            entries.append([p.relative_to(corpus_dir).as_posix(), digest])
    return _hash_obj([depth, entries])


def load_corpus(corpus_dir, depth, use_cache=False):
    """parse_corpus with an optional content-addressed disk cache."""
    if not use_cache:
        return parse_corpus(corpus_dir, depth=depth)
    key = corpus_fingerprint(corpus_dir, depth)
    path = cache_dir() / f"graphs_{key}.json"
    if path.exists():
        doc = json.loads(path.read_text())
        graphs = [CodeGraph.from_dict(d) for d in doc["graphs"]]
        return graphs, [tuple(f) for f in doc["failures"]]
    graphs, failures = parse_corpus(corpus_dir, depth=depth)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "graphs": [g.to_dict() for g in graphs],
        "failures": [list(f) for f in failures],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(doc))
    tmp.replace(path)
    return graphs, failures


def _embedding_for(graphs, split, emb_cfg, seed, use_cache, corpus_key):
    """Embedding matrix for one (config, seed) cell, disk-cached."""
    if emb_cfg.method == "manual":
        seeded = emb_cfg  # output ignores seed and scope
        split_key = None
    else:
        seeded = replace(emb_cfg, seed=seed)
        split_key = [list(split.L), list(split.U), list(split.T)]
    split_arg = (split.L, split.U, split.T)
    if not use_cache or corpus_key is None:
        return embed_corpus(graphs, split_arg, seeded)
    key = _hash_obj([corpus_key, asdict(seeded.validate()), split_key])
    path = cache_dir() / f"emb_{key}.npz"
    if path.exists():
        with np.load(path, allow_pickle=False) as data:
            return EmbeddingMatrix(
                ids=tuple(str(i) for i in data["ids"]),
                rows=data["rows"],
                config=seeded.validate(),
                tags=tuple(str(t) for t in data["tags"]),
            )
    matrix = embed_corpus(graphs, split_arg, seeded)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".npz.tmp")
    with open(tmp, "wb") as fh:
        np.savez(
            fh,
            ids=np.array(matrix.ids, dtype=str),
            rows=matrix.rows,
            tags=np.array(matrix.tags, dtype=str),
        )
    tmp.replace(path)
    return matrix


def _write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def run_experiment(cfg):
    """Run the full grid; returns the result directory path.

    Output layout: config.json, ingest_report.json, runs/<embedding>/
    <strategy>/seed<k>.csv, aggregates/<embedding>__<strategy>.csv,
    passive.csv, passive_summary.csv, plots/*.svg (+ .csv data twins),
    failures.json.
    """
    cfg = cfg.validate()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(
        json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    ing = ingest(
        cfg.corpus_dir,
        cfg.labels_file,
        cfg.parse_depth,
        cfg.label_aggregation,
        use_cache=cfg.use_cache,
    )
    (out / "ingest_report.json").write_text(
        json.dumps(ing.report, indent=2, sort_keys=True) + "\n"
    )
    graphs = ing.graphs
    y = np.log(ing.labels) if cfg.log_labels else ing.labels
    n = len(graphs)
    labels = embedding_labels(cfg.embeddings)
    corpus_key = (
        corpus_fingerprint(cfg.corpus_dir, cfg.parse_depth) if cfg.use_cache else None
    )
    failures = []
    passive_rows = []
    runs_dir = out / "runs"
    for seed in cfg.seeds:
        split = make_splits(n, cfg.test_frac, cfg.l0_size, seed)
        for emb_label, emb_cfg in zip(labels, cfg.embeddings):
            try:
                matrix = _embedding_for(
                    graphs, split, emb_cfg, seed, cfg.use_cache, corpus_key
                )
            except PerfalError as exc:
                failures.append(
                    {"cell": f"{emb_label}/embed/seed{seed}", "error": str(exc)}
                )
                continue
            try:
                score = run_passive(
                    matrix,
                    LabelStore(y, split.T),
                    make_passive_split(split),
                    seed=seed,
                )
                passive_rows.append((emb_label, seed, score))
            except PerfalError as exc:
                failures.append(
                    {"cell": f"{emb_label}/passive/seed{seed}", "error": str(exc)}
                )
            for strategy in cfg.strategies:
                try:
                    run = run_active(
                        matrix,
                        LabelStore(y, split.T),
                        split,
                        strategy,
                        b=cfg.batch_size,
                        budget=cfg.budget,
                        seed=seed,
                        committee=cfg.committee,
                    )
                except PerfalError as exc:
                    failures.append(
                        {
                            "cell": f"{emb_label}/{strategy}/seed{seed}",
                            "error": str(exc),
                        }
                    )
                    continue
                cell_dir = runs_dir / emb_label / strategy
                cell_dir.mkdir(parents=True, exist_ok=True)
                run.save(cell_dir / f"seed{seed}.csv")

    aggregates = _write_aggregates(out, labels, cfg.strategies)
    _write_passive(out, labels, passive_rows)
    _write_plots(out, labels, cfg.strategies, aggregates)
    (out / "failures.json").write_text(
        json.dumps(failures, indent=2, sort_keys=True) + "\n"
    )
    return out


def _load_runs(out, emb_label, strategy):
    from ..al import AlRun

    cell_dir = out / "runs" / emb_label / strategy
    if not cell_dir.is_dir():
        return []
    return [AlRun.load(p) for p in sorted(cell_dir.glob("seed*.csv"))]


def _write_aggregates(out, labels, strategies):
    """Per-cell mean/std curves; returns {(embedding, strategy): rows}."""
    aggregates = {}
    for emb_label in labels:
        for strategy in strategies:
            runs = _load_runs(out, emb_label, strategy)
            if not runs:
                continue
            points = {}
            for run in runs:
                for used, score, _ in run.records:
                    points.setdefault(used, []).append(score)
            rows = []
            for used in sorted(points):
                scores = points[used]
                rows.append(
                    (
                        used,
                        float(np.mean(scores)),
                        float(np.std(scores)),
                        len(scores),
                    )
                )
            aggregates[(emb_label, strategy)] = rows
            _write_csv(
                out / "aggregates" / f"{emb_label}__{strategy}.csv",
                ["labels_used", "mean_pearson", "std_pearson", "n_seeds"],
                [
                    (used, "%.10g" % m, "%.10g" % s, k)
                    for used, m, s, k in rows
                ],
            )
    return aggregates


def _write_passive(out, labels, passive_rows):
    order = {label: i for i, label in enumerate(labels)}
    rows = sorted(passive_rows, key=lambda r: (order[r[0]], r[1]))
    _write_csv(
        out / "passive.csv",
        ["embedding", "seed", "pearson"],
        [(emb, seed, "%.10g" % r) for emb, seed, r in rows],
    )
    summary = []
    for label in labels:
        scores = [r for emb, _, r in rows if emb == label]
        if scores:
            summary.append(
                (
                    label,
                    "%.10g" % np.mean(scores),
                    "%.10g" % np.std(scores),
                    len(scores),
                )
            )
    _write_csv(
        out / "passive_summary.csv",
        ["embedding", "mean_pearson", "std_pearson", "n_seeds"],
        summary,
    )


def _write_plots(out, labels, strategies, aggregates):
    from .plots import learning_curves

    for emb_label in labels:
        series = {
            strategy: aggregates[(emb_label, strategy)]
            for strategy in strategies
            if (emb_label, strategy) in aggregates
        }
        if series:
            learning_curves(
                out / "plots" / f"embedding_{emb_label}.svg",
                series,
                title=f"{emb_label}: query strategies",
            )
    for strategy in strategies:
        series = {
            emb_label: aggregates[(emb_label, strategy)]
            for emb_label in labels
            if (emb_label, strategy) in aggregates
        }
        if series:
            learning_curves(
                out / "plots" / f"strategy_{strategy}.svg",
                series,
                title=f"{strategy}: embeddings",
            )
