"""Command-line interface.

Subcommands: parse, metrics, embed, passive, active, synth, report. Every
subcommand accepts --config FILE (JSON); explicitly passed flags override
config values, which override built-in defaults. Exit codes: 0 success,
1 partial failure, 2 configuration error.
"""

import argparse
import csv
import json
import sys
from pathlib import Path

from .errors import ConfigError, PerfalError


def _load_config(path):
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return doc


def _resolve(args, config, key, default=None, required=False):
    """Flag value if given, else config value, else default."""
    value = getattr(args, key, None)
    if value is None:
        value = config.get(key, default)
    if required and value is None:
        raise ConfigError(f"missing required option --{key.replace('_', '-')}")
    return value


def _int_list(text):
    return tuple(int(v) for v in str(text).split(",") if str(v).strip() != "")


def _str_list(text):
    if isinstance(text, (list, tuple)):
        return tuple(text)
    return tuple(v.strip() for v in str(text).split(",") if v.strip())


def cmd_parse(args, config):
    from .fa_ast import parse_corpus

    src = _resolve(args, config, "src", required=True)
    depth = _resolve(args, config, "depth", "file")
    out = Path(_resolve(args, config, "out", required=True))
    graphs, failures = parse_corpus(src, depth=depth)
    for g in graphs:
        path = out / (g.source_path + ".json")
        path.parent.mkdir(parents=True, exist_ok=True)
        g.save(path)
    print(f"parsed {len(graphs)} files into {out} ({len(failures)} failures)")
    for path, message in failures:
        print(f"  FAILED {path}: {message}", file=sys.stderr)
    return 1 if failures else 0


def _load_graph_dir(graphs_dir):
    from .fa_ast import CodeGraph

    paths = sorted(Path(graphs_dir).rglob("*.json"))
    if not paths:
        raise ConfigError(f"no graph JSON files under {graphs_dir}")
    return [CodeGraph.load(p) for p in paths]


def cmd_metrics(args, config):
    from .graph_core import METRIC_SLOTS, manual_embed

    graphs = _load_graph_dir(_resolve(args, config, "graphs", required=True))
    out = Path(_resolve(args, config, "out", required=True))
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["path"] + list(METRIC_SLOTS))
        for g in graphs:
            row = manual_embed(g)
            writer.writerow([g.source_path] + ["%.10g" % v for v in row])
    print(f"wrote {len(graphs)} metric rows to {out}")
    return 0


def cmd_embed(args, config):
    from .embed import EmbeddingConfig, embed_corpus

    graphs = _load_graph_dir(_resolve(args, config, "graphs", required=True))
    out = Path(_resolve(args, config, "out", required=True))
    n = len(graphs)
    split_file = _resolve(args, config, "split")
    if split_file:
        doc = json.loads(Path(split_file).read_text())
        split = (doc.get("L", []), doc.get("U", []), doc.get("T", []))
    else:
        split = ((), tuple(range(n)), ())
    cfg_fields = set(EmbeddingConfig.__dataclass_fields__)
    base = {k: v for k, v in config.items() if k in cfg_fields}
    for key in ("method", "dim", "scope", "seed", "aggregation"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    cfg = EmbeddingConfig(**base)
    matrix = embed_corpus(graphs, split, cfg)
    out.parent.mkdir(parents=True, exist_ok=True)
    matrix.save(out)
    print(f"wrote {matrix.rows.shape[0]}x{matrix.rows.shape[1]} embedding to {out}")
    return 0


def cmd_synth(args, config):
    from .harness import gen_synthetic

    n = int(_resolve(args, config, "n", required=True))
    seed = int(_resolve(args, config, "seed", 0))
    out = _resolve(args, config, "out", required=True)
    paths, labels_path = gen_synthetic(n, seed, out)
    print(f"wrote {len(paths)} files and {labels_path}")
    return 0


def _experiment_config(args, config, passive_only):
    from .embed import EmbeddingConfig
    from .harness import ExperimentConfig

    merged = dict(config)
    flag_map = {
        "corpus": "corpus_dir",
        "labels": "labels_file",
        "depth": "parse_depth",
        "out": "output_dir",
        "l0": "l0_size",
        "batch": "batch_size",
        "budget": "budget",
        "test_frac": "test_frac",
        "committee": "committee",
        "label_agg": "label_aggregation",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "seeds", None) is not None:
        merged["seeds"] = _int_list(args.seeds)
    if getattr(args, "strategies", None) is not None:
        merged["strategies"] = _str_list(args.strategies)
    if getattr(args, "embeddings", None) is not None:
        merged["embeddings"] = [
            {"method": m} for m in _str_list(args.embeddings)
        ]
    if getattr(args, "log_labels", None) is not None:
        merged["log_labels"] = args.log_labels
    if getattr(args, "no_cache", None):
        merged["use_cache"] = False
    if passive_only:
        merged["strategies"] = ()
    merged.setdefault("embeddings", [{"method": "manual"}, {"method": "graph2vec"}])
    merged["embeddings"] = [
        e if isinstance(e, (dict, EmbeddingConfig)) else {"method": e}
        for e in merged["embeddings"]
    ]
    cfg = ExperimentConfig.from_dict(merged)
    if not cfg.corpus_dir or not cfg.labels_file:
        raise ConfigError("both --corpus and --labels are required")
    return cfg


def _run_experiment_command(args, config, passive_only):
    from .harness import run_experiment

    cfg = _experiment_config(args, config, passive_only)
    out = run_experiment(cfg)
    failures = json.loads((out / "failures.json").read_text())
    print(f"results in {out}")
    if failures:
        print(f"{len(failures)} cells failed:", file=sys.stderr)
        for f in failures:
            print(f"  {f['cell']}: {f['error']}", file=sys.stderr)
        return 1
    return 0


def cmd_passive(args, config):
    return _run_experiment_command(args, config, passive_only=True)


def cmd_active(args, config):
    return _run_experiment_command(args, config, passive_only=False)


def cmd_report(args, config):
    from .harness import report

    results = _resolve(args, config, "results", required=True)
    text = report(results, filename=_resolve(args, config, "out", "report.md"))
    print(text)
    return 0


def _add_experiment_flags(sub, with_strategies):
    sub.add_argument("--corpus", help="directory of source files")
    sub.add_argument("--labels", help="CSV of path,duration_ms rows")
    sub.add_argument("--depth", choices=["file", "system"])
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--embeddings", help="comma-separated embedding methods")
    if with_strategies:
        sub.add_argument("--strategies", help="comma-separated query strategies")
        sub.add_argument("--budget", type=int, help="total label budget")
    sub.add_argument("--l0", type=int, help="initial labeled-set size")
    sub.add_argument("--batch", type=int, help="batch size per query round")
    sub.add_argument("--test-frac", dest="test_frac", type=float)
    sub.add_argument("--seeds", help="comma-separated seeds")
    sub.add_argument("--committee", type=int, help="qbc committee size")
    sub.add_argument("--label-agg", dest="label_agg", choices=["mean", "median"])
    sub.add_argument(
        "--log-labels",
        dest="log_labels",
        action="store_const",
        const=True,
        help="regress log duration",
    )
    sub.add_argument(
        "--no-cache",
        dest="no_cache",
        action="store_const",
        const=True,
        help="recompute graphs and embeddings",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="perfal",
        description="Source-code performance prediction with active learning",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    sub = subparsers.add_parser("parse", help="Java sources to FA-AST graph JSON")
    sub.add_argument("--src", help="source file or directory")
    sub.add_argument("--depth", choices=["file", "system"])
    sub.add_argument("--out", help="output directory for graph JSON")
    sub.set_defaults(func=cmd_parse)

    sub = subparsers.add_parser("metrics", help="12-slot metric vectors per graph")
    sub.add_argument("--graphs", help="directory of graph JSON files")
    sub.add_argument("--out", help="output CSV path")
    sub.set_defaults(func=cmd_metrics)

    sub = subparsers.add_parser("embed", help="whole-graph embeddings")
    sub.add_argument("--graphs", help="directory of graph JSON files")
    sub.add_argument("--method")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--scope")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--aggregation", choices=["none", "mean", "sum"])
    sub.add_argument("--split", help="JSON file with L/U/T id lists")
    sub.add_argument("--out", help="output CSV path")
    sub.set_defaults(func=cmd_embed)

    sub = subparsers.add_parser("passive", help="passive-learning baseline")
    _add_experiment_flags(sub, with_strategies=False)
    sub.set_defaults(func=cmd_passive)

    sub = subparsers.add_parser("active", help="active-learning experiment grid")
    _add_experiment_flags(sub, with_strategies=True)
    sub.set_defaults(func=cmd_active)

    sub = subparsers.add_parser("synth", help="generate a synthetic corpus")
    sub.add_argument("--n", type=int, help="number of files (>= 20)")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--out", help="output directory")
    sub.set_defaults(func=cmd_synth)

    sub = subparsers.add_parser("report", help="summarize a result directory")
    sub.add_argument("--results", help="directory from a previous run")
    sub.add_argument("--out", help="report filename inside the directory")
    sub.set_defaults(func=cmd_report)

    for sub_action in subparsers.choices.values():
        sub_action.add_argument("--config", help="JSON config file")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config) if args.config else {}
        return args.func(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PerfalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
