"""Markdown summary of an experiment result directory.

Pulls the passive baseline table, the best strategy per embedding at each
label budget, and (when the config carries both scopes of one method) the
full-scope vs split-space comparison out of the aggregate CSVs.
"""

import csv
import json
from pathlib import Path


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _fmt(x, digits=3):
    return f"{float(x):.{digits}f}"


def report(result_dir, filename="report.md"):
    """Write and return the markdown summary; 'no runs found' when empty."""
    rd = Path(result_dir)
    agg_dir = rd / "aggregates"
    agg_files = sorted(agg_dir.glob("*.csv")) if agg_dir.is_dir() else []
    passive_path = rd / "passive_summary.csv"
    passive = _read_csv(passive_path) if passive_path.exists() else []
    lines = ["# Experiment report", ""]
    config = {}
    config_path = rd / "config.json"
    if config_path.exists():
        config = json.loads(config_path.read_text())
        lines += [
            f"- corpus: `{config.get('corpus_dir', '?')}` "
            f"(depth: {config.get('parse_depth', '?')})",
            f"- labels: `{config.get('labels_file', '?')}`",
            f"- seeds: {len(config.get('seeds', []))}, "
            f"l0={config.get('l0_size', '?')}, "
            f"batch={config.get('batch_size', '?')}",
            "",
        ]
    if not agg_files and not passive:
        lines += ["no runs found", ""]
        text = "\n".join(lines)
        (rd / filename).write_text(text)
        return text

    if passive:
        lines += [
            "## Passive baseline (full train pool)",
            "",
            "| embedding | Pearson r (mean ± std) | seeds |",
            "|---|---|---|",
        ]
        for row in passive:
            lines.append(
                f"| {row['embedding']} | {_fmt(row['mean_pearson'])} ± "
                f"{_fmt(row['std_pearson'])} | {row['n_seeds']} |"
            )
        lines.append("")

    # aggregates keyed (embedding, strategy) from <emb>__<strat>.csv names
    curves = {}
    for path in agg_files:
        emb, _, strat = path.stem.rpartition("__")
        curves[(emb, strat)] = _read_csv(path)
    embeddings = sorted({emb for emb, _ in curves})
    for emb in embeddings:
        strategies = sorted(s for e, s in curves if e == emb)
        budgets = sorted(
            {int(r["labels_used"]) for s in strategies for r in curves[(emb, s)]}
        )
        lines += [
            f"## Best strategy per budget: {emb}",
            "",
            "| labels used | best strategy | mean Pearson r |",
            "|---|---|---|",
        ]
        for used in budgets:
            candidates = []
            for s in strategies:
                for r in curves[(emb, s)]:
                    if int(r["labels_used"]) == used:
                        candidates.append((-float(r["mean_pearson"]), s))
            if not candidates:
                continue
            neg_score, best = min(candidates)
            lines.append(f"| {used} | {best} | {_fmt(-neg_score)} |")
        lines.append("")

    # Appendix-style scope comparison when one method ran under both scopes
    if passive and config:
        from .experiment import embedding_labels
        from ..embed import EmbeddingConfig

        cfgs = [EmbeddingConfig(**e) for e in config.get("embeddings", [])]
        labels = embedding_labels(cfgs)
        by_label = dict(zip(labels, cfgs))
        means = {row["embedding"]: float(row["mean_pearson"]) for row in passive}
        rows = []
        for label, cfg in by_label.items():
            if cfg.scope != "split-space" or label not in means:
                continue
            partner = next(
                (
                    l2
                    for l2, c2 in by_label.items()
                    if c2.method == cfg.method
                    and c2.scope == "train-unlabeled-test"
                    and l2 in means
                ),
                None,
            )
            if partner:
                rows.append(
                    (cfg.method, means[partner], means[label], means[partner] - means[label])
                )
        if rows:
            lines += [
                "## Feature-space scopes (full vs split-space)",
                "",
                "| method | full scope | split-space | degradation |",
                "|---|---|---|---|",
            ]
            for method, full, split_r, delta in rows:
                lines.append(
                    f"| {method} | {_fmt(full)} | {_fmt(split_r)} | {_fmt(delta)} |"
                )
            lines.append("")

    failures_path = rd / "failures.json"
    if failures_path.exists():
        failures = json.loads(failures_path.read_text())
        if failures:
            lines += ["## Failed cells", ""]
            for f in failures:
                lines.append(f"- `{f['cell']}`: {f['error']}")
            lines.append("")

    text = "\n".join(lines)
    (rd / filename).write_text(text)
    return text
