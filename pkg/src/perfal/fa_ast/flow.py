"""Flow augmentation: turn a plain AST into a flow-augmented AST.

Edges added on top of AstChild/AstParent:

- NextToken: each terminal to the next terminal in source (preorder) order,
  forming a single path over all terminals.
- NextSibling: each child to the next child of the same parent.
- NextUse: a variable occurrence to the place the same name is used next,
  resolved lexically with innermost-declaration-wins shadowing. Names never
  declared in the file chain at file scope. Qualified accesses chain by
  their full dotted text. Additionally, every while/for/foreach loop gets a
  reverse NextUse edge from its body to its condition (the loop feeds the
  variables of its condition), which is the one place a NextUse edge joins
  nodes with differing text.
- IfFlow / ElseFlow: if-condition to then-branch / else-branch.
- WhileFlow / ForFlow: loop condition (the iterable for foreach) to body.
- NextStatement: consecutive statements within one Block.

switch and do-while contribute no flow edges. The pass recomputes flow from
the tree alone, so applying it twice yields the same edge multiset.
"""

from .graph import (
    AST_CHILD,
    AST_PARENT,
    ELSE_FLOW,
    FOR_FLOW,
    IF_FLOW,
    NEXT_SIBLING,
    NEXT_STATEMENT,
    NEXT_TOKEN,
    NEXT_USE,
    WHILE_FLOW,
    CodeGraph,
)

# Scopes for name resolution. Block covers method bodies and nested blocks;
# the loop statements scope their own init/iteration variables.
SCOPE_KINDS = frozenset(
    {
        "CompilationUnit",
        "ClassDecl",
        "InterfaceDecl",
        "EnumDecl",
        "AnonymousClassBody",
        "MethodDecl",
        "ConstructorDecl",
        "InitializerBlock",
        "Lambda",
        "Block",
        "ForStatement",
        "ForEachStatement",
        "TryStatement",
        "CatchClause",
        "SwitchStatement",
    }
)

# Kinds whose terminals count as variable occurrences.
OCCURRENCE_KINDS = frozenset({"Identifier", "MemberReference"})

# Parent kinds whose Identifier children are labels, not variables.
LABEL_PARENTS = frozenset({"LabeledStatement", "BreakStatement", "ContinueStatement"})

def augment_flow(g):
    """Return a new CodeGraph with all flow edges over g's tree.

    Any flow edges already present on g are discarded and recomputed.
    """
    out = CodeGraph(g.source_path, g.parse_depth)
    for n in g.nodes:
        out.add_node(n.kind, n.token, n.span)
    for s, d, k in g.edges:
        if k == AST_CHILD:
            out.add_child(s, d)
    out.resolution_cycles = list(g.resolution_cycles)

    _add_next_token(out)
    _add_next_sibling(out)
    _add_statement_and_branch_flow(out)
    _add_next_use(out)
    return out


def _add_next_token(g):
    terms = g.terminals()
    for a, b in zip(terms, terms[1:]):
        g.add_edge(a, b, NEXT_TOKEN)


def _add_next_sibling(g):
    for nid in range(len(g.nodes)):
        kids = g.children(nid)
        for a, b in zip(kids, kids[1:]):
            g.add_edge(a, b, NEXT_SIBLING)


def _add_statement_and_branch_flow(g):
    for nid in range(len(g.nodes)):
        node = g.nodes[nid]
        kids = g.children(nid)
        if node.kind == "Block":
            for a, b in zip(kids, kids[1:]):
                g.add_edge(a, b, NEXT_STATEMENT)
        elif node.kind == "IfStatement":
            cond, then = kids[0], kids[1]
            g.add_edge(cond, then, IF_FLOW)
            if len(kids) > 2:
                g.add_edge(cond, kids[2], ELSE_FLOW)
        elif node.kind == "WhileStatement":
            cond, body = kids[0], kids[1]
            g.add_edge(cond, body, WHILE_FLOW)
            g.add_edge(body, cond, NEXT_USE)
        elif node.kind == "ForStatement":
            cond = next(
                (k for k in kids if g.nodes[k].kind == "ForCond"), None
            )
            body = kids[-1]
            if cond is not None:
                g.add_edge(cond, body, FOR_FLOW)
                g.add_edge(body, cond, NEXT_USE)
        elif node.kind == "ForEachStatement":
            iterable, body = kids[1], kids[2]
            g.add_edge(iterable, body, FOR_FLOW)
            g.add_edge(body, iterable, NEXT_USE)


def _add_next_use(g):
    """Chain variable occurrences with an explicit-stack preorder scope walk."""
    scopes = [{}]
    EXIT = object()
    stack = [(0, None, 0)]
    while stack:
        item = stack.pop()
        if item[0] is EXIT:
            scopes.pop()
            continue
        nid, parent_kind, child_index = item
        node = g.nodes[nid]
        kids = g.children(nid)
        if node.kind in SCOPE_KINDS:
            scopes.append({})
            stack.append((EXIT, None, 0))

        if not kids and node.kind in OCCURRENCE_KINDS and node.token:
            name = node.token
            # VarDeclarator declares only via its first child; the
            # initializer may itself be a bare Identifier use.
            declares = node.kind == "Identifier" and (
                parent_kind in ("Parameter", "CatchClause")
                or (parent_kind == "VarDeclarator" and child_index == 0)
            )
            is_label = parent_kind in LABEL_PARENTS and child_index == 0
            if declares:
                scopes[-1][name] = nid
            elif not is_label:
                for frame in reversed(scopes):
                    if name in frame:
                        g.add_edge(frame[name], nid, NEXT_USE)
                        frame[name] = nid
                        break
                else:
                    scopes[0][name] = nid

        for idx in range(len(kids) - 1, -1, -1):
            stack.append((kids[idx], node.kind, idx))
