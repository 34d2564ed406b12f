"""Graph model for flow-augmented ASTs.

A CodeGraph starts life as a plain AST (AstChild edges plus their AstParent
reverses) and is later enriched with flow edges. Node ids are dense and
assigned in preorder, so iterating nodes in id order visits the tree in
source order. Parallel edges of different kinds between the same pair are
expected; parallel edges of the same kind are not produced.
"""

import json

AST_CHILD = "AstChild"
AST_PARENT = "AstParent"
NEXT_TOKEN = "NextToken"
NEXT_SIBLING = "NextSibling"
NEXT_USE = "NextUse"
IF_FLOW = "IfFlow"
ELSE_FLOW = "ElseFlow"
WHILE_FLOW = "WhileFlow"
FOR_FLOW = "ForFlow"
NEXT_STATEMENT = "NextStatement"

EDGE_KINDS = (
    AST_CHILD,
    AST_PARENT,
    NEXT_TOKEN,
    NEXT_SIBLING,
    NEXT_USE,
    IF_FLOW,
    ELSE_FLOW,
    WHILE_FLOW,
    FOR_FLOW,
    NEXT_STATEMENT,
)

FLOW_KINDS = tuple(k for k in EDGE_KINDS if k not in (AST_CHILD, AST_PARENT))


class AstNode:
    __slots__ = ("id", "kind", "token", "span")

    def __init__(self, id, kind, token=None, span=None):
        self.id = id
        self.kind = kind
        self.token = token
        self.span = span

    def __repr__(self):
        if self.token is None:
            return f"AstNode({self.id}, {self.kind})"
        return f"AstNode({self.id}, {self.kind}, {self.token!r})"


class CodeGraph:
    """Directed multigraph over AstNodes with typed edges."""

    def __init__(self, source_path="", parse_depth="file"):
        self.source_path = source_path
        self.parse_depth = parse_depth
        self.nodes = []
        self.edges = []
        self._children = {}
        self.resolution_cycles = []

    def add_node(self, kind, token=None, span=None):
        nid = len(self.nodes)
        self.nodes.append(AstNode(nid, kind, token, span))
        return nid

    def add_edge(self, src, dst, kind):
        if src == dst:
            raise ValueError(f"self-loop on node {src} ({kind})")
        self.edges.append((src, dst, kind))
        if kind == AST_CHILD:
            self._children.setdefault(src, []).append(dst)

    def add_child(self, parent, child):
        """Tree edge plus its reverse, keeping the two kinds in lockstep."""
        self.add_edge(parent, child, AST_CHILD)
        self.add_edge(child, parent, AST_PARENT)

    def children(self, nid):
        return self._children.get(nid, [])

    def is_terminal(self, nid):
        return nid not in self._children

    def kind_counts(self):
        counts = {k: 0 for k in EDGE_KINDS}
        for _, _, kind in self.edges:
            counts[kind] += 1
        return counts

    def edges_of_kind(self, kind):
        return [(s, d) for s, d, k in self.edges if k == kind]

    def preorder(self, root=0):
        """Node ids in depth-first source order under AstChild."""
        order = []
        stack = [root]
        while stack:
            nid = stack.pop()
            order.append(nid)
            stack.extend(reversed(self.children(nid)))
        return order

    def terminals(self, root=0):
        return [n for n in self.preorder(root) if self.is_terminal(n)]

    def copy(self):
        g = CodeGraph(self.source_path, self.parse_depth)
        for n in self.nodes:
            g.add_node(n.kind, n.token, n.span)
        for s, d, k in self.edges:
            g.add_edge(s, d, k)
        g.resolution_cycles = list(self.resolution_cycles)
        return g

    def to_dict(self):
        return {
            "path": self.source_path,
            "depth": self.parse_depth,
            "nodes": [
                {"id": n.id, "kind": n.kind, "token": n.token} for n in self.nodes
            ],
            "edges": [[s, d, k] for s, d, k in self.edges],
        }

    @classmethod
    def from_dict(cls, data):
        g = cls(data["path"], data["depth"])
        nodes = sorted(data["nodes"], key=lambda n: n["id"])
        for i, n in enumerate(nodes):
            if n["id"] != i:
                raise ValueError(f"node ids not dense at {n['id']}")
            g.add_node(n["kind"], n.get("token"))
        for s, d, k in data["edges"]:
            if k not in EDGE_KINDS:
                raise ValueError(f"unknown edge kind {k!r}")
            g.add_edge(s, d, k)
        return g

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fp:
            json.dump(self.to_dict(), fp, ensure_ascii=False)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fp:
            return cls.from_dict(json.load(fp))


class Vocabulary:
    """Dense integer ids for the (kind, token) pairs of a corpus.

    Ids are assigned in lexicographic key order, so two passes over the
    same corpus produce the same mapping.
    """

    def __init__(self, ids):
        self.ids = ids
        self.size = len(ids)

    def __getitem__(self, key):
        return self.ids[key]

    def __contains__(self, key):
        return key in self.ids


def build_vocabulary(corpus):
    keys = set()
    for g in corpus:
        for n in g.nodes:
            keys.add((n.kind, n.token if n.token is not None else "⊥"))
    ordered = sorted(keys)
    return Vocabulary({k: i for i, k in enumerate(ordered)})
