"""System-level resolution: inline corpus-local declarations at call sites.

Works on AST-only graphs, before flow augmentation, so the flow pass runs
once over the final tree. A method call matches a MethodDecl by simple name
and arity; `new T(...)` matches a ConstructorDecl of class T by arity. The
first declaration in corpus order (sorted source path, then preorder) wins.
Each matching call site receives a fresh copy of the declaration subtree as
an extra child; the copy is resolved recursively. A declaration already on
the current expansion path is not expanded again: the cycle is recorded on
the graph and the edge cut. Unmatched references stay leaves.
"""

from .graph import CodeGraph


def _method_name_and_arity(g, nid):
    kids = g.children(nid)
    for i, kid in enumerate(kids):
        if g.nodes[kid].kind == "MethodName":
            return g.nodes[kid].token, len(kids) - i - 1, i
    return None, 0, -1


def _decl_arity(g, nid):
    return sum(1 for k in g.children(nid) if g.nodes[k].kind == "Parameter")


def _creator_info(g, nid):
    kids = g.children(nid)
    type_node = g.nodes[kids[0]]
    if type_node.token is not None:
        name = type_node.token
    else:
        head = g.nodes[g.children(kids[0])[0]]
        name = head.token or ""
    name = name.split("<")[0].rstrip("[]").split(".")[-1]
    arity = sum(
        1 for k in kids[1:] if g.nodes[k].kind != "AnonymousClassBody"
    )
    return name, arity


def build_declaration_index(corpus):
    """Map ('m'|'c', simple-name, arity) -> (graph, decl node id)."""
    index = {}
    for g in sorted(corpus, key=lambda x: x.source_path):
        class_stack = []
        stack = [(0, None)]
        order = []
        while stack:
            nid, cls = stack.pop()
            order.append((nid, cls))
            node = g.nodes[nid]
            if node.kind in ("ClassDecl", "InterfaceDecl", "EnumDecl"):
                name = next(
                    (
                        g.nodes[k].token
                        for k in g.children(nid)
                        if g.nodes[k].kind == "TypeName"
                    ),
                    None,
                )
                cls = name
            for kid in reversed(g.children(nid)):
                stack.append((kid, cls))
        for nid, cls in order:
            node = g.nodes[nid]
            if node.kind == "MethodDecl":
                name, _, _ = _method_name_and_arity(g, nid)
                key = ("m", name, _decl_arity(g, nid))
                index.setdefault(key, (g, nid))
            elif node.kind == "ConstructorDecl" and cls:
                key = ("c", cls, _decl_arity(g, nid))
                index.setdefault(key, (g, nid))
    return index


def _clone_subtree(src, root, dst, parent):
    """Copy the AstChild subtree of src rooted at root under dst's parent."""
    mapping = {}
    order = []
    stack = [root]
    while stack:
        nid = stack.pop()
        order.append(nid)
        stack.extend(reversed(src.children(nid)))
    for nid in order:
        n = src.nodes[nid]
        mapping[nid] = dst.add_node(n.kind, n.token, n.span)
    dst.add_child(parent, mapping[root])
    for nid in order:
        for kid in src.children(nid):
            dst.add_child(mapping[nid], mapping[kid])
    return mapping[root]


def resolve_system_level(corpus, g, index=None):
    """Return the system-level version of g given its file-level corpus.

    The corpus must contain AST-only graphs (parse_ast output). The returned
    graph is a fresh AST-only graph with parse_depth "system"; run
    augment_flow on it afterwards.
    """
    if index is None:
        index = build_declaration_index(corpus)
    out = g.copy()
    out.parse_depth = "system"
    out.resolution_cycles = []

    def expand(nid, path):
        node = out.nodes[nid]
        key = None
        if node.kind == "MethodInvocation":
            name, arity, mpos = _method_name_and_arity(out, nid)
            if mpos >= 0:
                key = ("m", name, arity)
        if key is not None and key in index:
            if key in path:
                out.resolution_cycles.append((tuple(sorted(path)), key))
            else:
                src, decl = index[key]
                new_root = _clone_subtree(src, decl, out, nid)
                expand_subtree(new_root, path | {key})

    def expand_subtree(root, path):
        stack = [root]
        while stack:
            nid = stack.pop()
            pre_kids = list(out.children(nid))
            expand(nid, path)
            stack.extend(reversed(pre_kids))

    expand_subtree(0, frozenset())
    return out
