"""Java sources to flow-augmented AST graphs.

Pipeline: strip_comments -> parse_ast -> (resolve_system_level) ->
augment_flow. parse_source runs the file-level pipeline in one call;
parse_corpus handles a directory tree at either depth.
"""

from pathlib import Path

from .graph import (
    AST_CHILD,
    AST_PARENT,
    EDGE_KINDS,
    ELSE_FLOW,
    FLOW_KINDS,
    FOR_FLOW,
    IF_FLOW,
    NEXT_SIBLING,
    NEXT_STATEMENT,
    NEXT_TOKEN,
    NEXT_USE,
    WHILE_FLOW,
    AstNode,
    CodeGraph,
    Vocabulary,
    build_vocabulary,
)
from .lexer import strip_comments, tokenize
from .parser import parse_ast
from .flow import augment_flow
from .resolve import build_declaration_index, resolve_system_level

__all__ = [
    "AST_CHILD",
    "AST_PARENT",
    "EDGE_KINDS",
    "ELSE_FLOW",
    "FLOW_KINDS",
    "FOR_FLOW",
    "IF_FLOW",
    "NEXT_SIBLING",
    "NEXT_STATEMENT",
    "NEXT_TOKEN",
    "NEXT_USE",
    "WHILE_FLOW",
    "AstNode",
    "CodeGraph",
    "Vocabulary",
    "augment_flow",
    "build_declaration_index",
    "build_vocabulary",
    "parse_ast",
    "parse_corpus",
    "parse_source",
    "resolve_system_level",
    "strip_comments",
    "tokenize",
]


def parse_source(source, path=""):
    """File-level FA-AST of one source text."""
    return augment_flow(parse_ast(strip_comments(source), path))


def parse_corpus(src_dir, depth="file", suffix=".java"):
    """Parse every matching file under src_dir into FA-AST graphs.

    Returns (graphs, failures): graphs sorted by path, failures as a list of
    (path, error message) for files the parser rejected.
    """
    src_dir = Path(src_dir)
    paths = sorted(p for p in src_dir.rglob(f"*{suffix}") if p.is_file())
    asts = []
    failures = []
    for p in paths:
        rel = p.relative_to(src_dir).as_posix()
        try:
            text = p.read_text(encoding="utf-8", errors="replace")
            asts.append(parse_ast(strip_comments(text), rel))
        except Exception as e:  # surface the file, keep going
            failures.append((rel, str(e)))
    if depth == "system":
        index = build_declaration_index(asts)
        resolved = [resolve_system_level(asts, g, index) for g in asts]
        graphs = [augment_flow(g) for g in resolved]
    elif depth == "file":
        graphs = [augment_flow(g) for g in asts]
    else:
        raise ValueError(f"unknown parse depth {depth!r}")
    return graphs, failures
