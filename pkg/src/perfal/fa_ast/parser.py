"""Recursive-descent parser for the Java subset the corpus exercises.

The produced tree is normalized for downstream graph work rather than for
round-tripping source text:

- Keywords and punctuation do not become nodes; operators do (as Operator
  leaves), so the terminal sequence tracks the meaningful token order.
- Dotted plain names collapse into a single leaf: one segment is an
  Identifier, several segments a MemberReference ("Flags.FREEZE"). Field
  accesses on computed receivers keep their own MemberName leaf instead.
- A method call is MethodInvocation[receiver?, MethodName, arg...]; the
  receiver child is absent for unqualified calls.
- Declared names are Identifier leaves in fixed positions (first child of
  VarDeclarator, the Identifier child of Parameter / CatchClause), which is
  how the flow pass tells declarations from uses.
- Types without generics are single TypeRef leaves whose token carries the
  dotted name plus any "[]" suffixes; generic types become TypeRef nodes
  with a TypeName head child and argument subtrees.
- A childless construct that has no natural token (an empty block, an empty
  array initializer) is given the empty-string token so that exactly the
  terminal nodes carry tokens.

switch and do-while parse into ordinary nodes; they simply receive no flow
edges later. Unsupported constructs (text blocks, annotation declarations,
explicit generic call arguments) raise ParseError with a position.
"""

from .graph import CodeGraph
from .lexer import PRIMITIVE_TYPES, Token, tokenize
from ..errors import ParseError

MODIFIER_WORDS = frozenset(
    """
    public private protected static final abstract native synchronized
    transient volatile strictfp default
    """.split()
)

ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
)

# Binary operator precedence, loosest first.
BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
]

# Tokens that may start the operand of a cast like (Foo) x.
CAST_FOLLOW_TYPES = frozenset({"ident", "num", "str", "char"})
CAST_FOLLOW_TEXTS = frozenset({"(", "!", "~", "this", "super", "new"})
PRIMITIVE_CAST_FOLLOW = frozenset({"+", "-", "++", "--"})


class Node:
    __slots__ = ("kind", "children", "token", "line")

    def __init__(self, kind, children=None, token=None, line=None):
        self.kind = kind
        self.children = children if children is not None else []
        self.token = token
        self.line = line


def leaf(kind, token, line=None):
    return Node(kind, token=token, line=line)


class Parser:
    def __init__(self, tokens, path=""):
        self.toks = tokens
        self.i = 0
        self.path = path
        self.class_stack = []
        self._splits = []  # (index, original token) undo log for angle splits

    def _mark(self):
        return (self.i, len(self._splits))

    def _rewind(self, mark):
        i, n = mark
        while len(self._splits) > n:
            idx, tok = self._splits.pop()
            self.toks[idx] = tok
        self.i = i

    # token plumbing

    def cur(self):
        return self.toks[self.i]

    def peek(self, k=1):
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def at(self, text):
        return self.cur().text == text and self.cur().type != "str"

    def at_kw(self, word):
        t = self.cur()
        return t.type == "kw" and t.text == word

    def advance(self):
        t = self.toks[self.i]
        if t.type != "eof":
            self.i += 1
        return t

    def accept(self, text):
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text):
        if self.at(text):
            return self.advance()
        self.error(f"expected {text!r}, found {self.cur().text!r}")

    def expect_ident(self):
        t = self.cur()
        if t.type != "ident":
            self.error(f"expected identifier, found {t.text!r}")
        return self.advance()

    def error(self, message):
        t = self.cur()
        raise ParseError(message, t.line, t.col)

    def expect_close_angle(self):
        """Consume one '>' even when the lexer glued several together."""
        t = self.cur()
        if t.type == "op" and t.text.startswith(">"):
            if t.text == ">":
                self.advance()
            else:
                self._splits.append((self.i, t))
                self.toks[self.i] = Token("op", t.text[1:], t.line, t.col + 1)
            return
        self.error(f"expected '>', found {t.text!r}")

    # compilation unit

    def parse_compilation_unit(self):
        unit = Node("CompilationUnit", line=1)
        if self.at("@") or self.at_kw("package"):
            mods = self.parse_modifiers()
            if self.at_kw("package"):
                ln = self.advance().line
                name = self.parse_dotted_name()
                self.expect(";")
                unit.children.append(
                    Node("PackageDecl", mods + [leaf("PackageName", name, ln)], line=ln)
                )
            else:
                # annotations actually belonged to the first type declaration
                unit.children.append(self.parse_type_decl(mods))
        while self.at_kw("import"):
            ln = self.advance().line
            imp = []
            if self.at_kw("static"):
                imp.append(leaf("Modifier", self.advance().text, ln))
            name = self.parse_dotted_name()
            if self.accept("."):
                self.expect("*")
                name += ".*"
            self.expect(";")
            imp.append(leaf("ImportName", name, ln))
            unit.children.append(Node("ImportDecl", imp, line=ln))
        while not self.at(""):
            if self.accept(";"):
                continue
            unit.children.append(self.parse_type_decl(self.parse_modifiers()))
        return unit

    def parse_dotted_name(self):
        parts = [self.expect_ident().text]
        while self.at(".") and self.peek().type == "ident":
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    # modifiers and annotations

    def parse_modifiers(self):
        mods = []
        while True:
            t = self.cur()
            if t.type == "kw" and t.text in MODIFIER_WORDS:
                mods.append(leaf("Modifier", t.text, t.line))
                self.advance()
            elif self.at("@") and self.peek().text != "interface":
                mods.append(self.parse_annotation())
            else:
                return mods

    def parse_annotation(self):
        ln = self.expect("@").line
        name = self.parse_dotted_name()
        children = [leaf("TypeRef", name, ln)]
        if self.accept("("):
            while not self.at(")"):
                if self.cur().type == "ident" and self.peek().text == "=":
                    key = self.advance()
                    self.advance()
                    value = self.parse_annotation_value()
                    children.append(
                        Node(
                            "AnnotationArg",
                            [leaf("MemberName", key.text, key.line), value],
                            line=key.line,
                        )
                    )
                else:
                    children.append(self.parse_annotation_value())
                if not self.accept(","):
                    break
            self.expect(")")
        return Node("Annotation", children, line=ln)

    def parse_annotation_value(self):
        if self.at("{"):
            return self.parse_array_init()
        if self.at("@"):
            return self.parse_annotation()
        return self.parse_ternary()

    # type declarations

    def parse_type_decl(self, mods):
        if self.at_kw("class"):
            return self.parse_class(mods, "ClassDecl")
        if self.at_kw("interface"):
            return self.parse_class(mods, "InterfaceDecl")
        if self.at_kw("enum"):
            return self.parse_enum(mods)
        self.error(f"expected type declaration, found {self.cur().text!r}")

    def parse_class(self, mods, kind):
        ln = self.advance().line
        name = self.expect_ident()
        children = mods + [leaf("TypeName", name.text, name.line)]
        if self.at("<"):
            children.extend(self.parse_type_params())
        if self.at_kw("extends"):
            self.advance()
            children.append(self.parse_type())
            while self.accept(","):  # interfaces may extend several
                children.append(self.parse_type())
        if self.at_kw("implements"):
            self.advance()
            children.append(self.parse_type())
            while self.accept(","):
                children.append(self.parse_type())
        self.expect("{")
        self.class_stack.append(name.text)
        children.extend(self.parse_members())
        self.class_stack.pop()
        self.expect("}")
        return Node(kind, children, line=ln)

    def parse_enum(self, mods):
        ln = self.advance().line
        name = self.expect_ident()
        children = mods + [leaf("TypeName", name.text, name.line)]
        if self.at_kw("implements"):
            self.advance()
            children.append(self.parse_type())
            while self.accept(","):
                children.append(self.parse_type())
        self.expect("{")
        self.class_stack.append(name.text)
        while not self.at("}") and not self.at(";"):
            cmods = self.parse_modifiers()
            cname = self.expect_ident()
            cchildren = cmods + [leaf("MemberName", cname.text, cname.line)]
            if self.accept("("):
                cchildren.extend(self.parse_arguments())
            children.append(Node("EnumConstant", cchildren, line=cname.line))
            if not self.accept(","):
                break
        if self.accept(";"):
            children.extend(self.parse_members())
        self.class_stack.pop()
        self.expect("}")
        return Node("EnumDecl", children, line=ln)

    def parse_type_params(self):
        self.expect("<")
        params = []
        while True:
            name = self.expect_ident()
            children = [leaf("TypeName", name.text, name.line)]
            if self.at_kw("extends"):
                self.advance()
                children.append(self.parse_type())
                while self.accept("&"):
                    children.append(self.parse_type())
            params.append(Node("TypeParameter", children, line=name.line))
            if not self.accept(","):
                break
        self.expect_close_angle()
        return params

    # class members

    def parse_members(self):
        members = []
        while not self.at("}") and not self.at(""):
            if self.accept(";"):
                continue
            members.append(self.parse_member())
        return members

    def parse_member(self):
        mods = self.parse_modifiers()
        if self.at_kw("class") or self.at_kw("interface") or self.at_kw("enum"):
            return self.parse_type_decl(mods)
        if self.at("{"):
            return Node("InitializerBlock", mods + [self.parse_block()])
        type_params = self.parse_type_params() if self.at("<") else []
        if (
            self.cur().type == "ident"
            and self.class_stack
            and self.cur().text == self.class_stack[-1]
            and self.peek().text == "("
        ):
            name = self.advance()
            children = mods + type_params + [leaf("MethodName", name.text, name.line)]
            children.extend(self.parse_param_list())
            children.extend(self.parse_throws())
            children.append(self.parse_block())
            return Node("ConstructorDecl", children, line=name.line)
        rtype = self.parse_type()
        name = self.expect_ident()
        if self.at("("):
            children = (
                mods + type_params + [rtype, leaf("MethodName", name.text, name.line)]
            )
            children.extend(self.parse_param_list())
            children.extend(self.parse_throws())
            if self.at("{"):
                children.append(self.parse_block())
            else:
                self.expect(";")
            return Node("MethodDecl", children, line=name.line)
        # field declaration
        children = mods + [rtype, self.parse_declarator(name)]
        while self.accept(","):
            children.append(self.parse_declarator(self.expect_ident()))
        self.expect(";")
        return Node("FieldDecl", children, line=name.line)

    def parse_declarator(self, name):
        children = [leaf("Identifier", name.text, name.line)]
        while self.accept("["):
            self.expect("]")
        if self.accept("="):
            if self.at("{"):
                children.append(self.parse_array_init())
            else:
                children.append(self.parse_expression())
        return Node("VarDeclarator", children, line=name.line)

    def parse_param_list(self):
        self.expect("(")
        params = []
        while not self.at(")"):
            mods = self.parse_modifiers()
            ptype = self.parse_type()
            self.accept("...")
            name = self.expect_ident()
            while self.accept("["):
                self.expect("]")
            params.append(
                Node(
                    "Parameter",
                    mods + [ptype, leaf("Identifier", name.text, name.line)],
                    line=name.line,
                )
            )
            if not self.accept(","):
                break
        self.expect(")")
        return params

    def parse_throws(self):
        if not self.at_kw("throws"):
            return []
        self.advance()
        types = [self.parse_type()]
        while self.accept(","):
            types.append(self.parse_type())
        return types

    # types

    def parse_type(self):
        t = self.cur()
        if t.type == "kw" and (t.text in PRIMITIVE_TYPES or t.text == "var"):
            self.advance()
            base = t.text
            ln = t.line
            args = None
        else:
            ln = t.line
            base = self.parse_dotted_name()
            args = None
            if self.at("<"):
                args = self.parse_type_args()
        dims = 0
        while self.at("[") and self.peek().text == "]":
            self.advance()
            self.advance()
            dims += 1
        suffix = "[]" * dims
        if args is None:
            return leaf("TypeRef", base + suffix, ln)
        return Node("TypeRef", [leaf("TypeName", base + suffix, ln)] + args, line=ln)

    def parse_type_args(self):
        self.expect("<")
        args = []
        if not (self.cur().type == "op" and self.cur().text.startswith(">")):
            while True:
                if self.at("?"):
                    q = self.advance()
                    if self.at_kw("extends") or self.at_kw("super"):
                        bound_kw = self.advance().text
                        args.append(
                            Node(
                                "Wildcard",
                                [leaf("Modifier", bound_kw, q.line), self.parse_type()],
                                line=q.line,
                            )
                        )
                    else:
                        args.append(leaf("Wildcard", "?", q.line))
                else:
                    args.append(self.parse_type())
                if not self.accept(","):
                    break
        self.expect_close_angle()
        return args

    def try_parse_type(self):
        """Speculative type parse; restores position and returns None on failure."""
        mark = self._mark()
        try:
            return self.parse_type()
        except ParseError:
            self._rewind(mark)
            return None

    # statements

    def parse_block(self):
        ln = self.expect("{").line
        stmts = []
        while not self.at("}") and not self.at(""):
            s = self.parse_statement()
            if s is not None:
                stmts.append(s)
        self.expect("}")
        node = Node("Block", stmts, line=ln)
        if not stmts:
            node.token = "{}"
        return node

    def parse_statement(self):
        t = self.cur()
        if self.at("{"):
            return self.parse_block()
        if self.accept(";"):
            return None
        if t.type == "kw":
            handler = {
                "if": self.parse_if,
                "while": self.parse_while,
                "do": self.parse_do,
                "for": self.parse_for,
                "switch": self.parse_switch,
                "try": self.parse_try,
                "return": self.parse_return,
                "throw": self.parse_throw,
                "break": self.parse_break_continue,
                "continue": self.parse_break_continue,
                "assert": self.parse_assert,
            }.get(t.text)
            if handler is not None:
                return handler()
            if t.text == "synchronized" and self.peek().text == "(":
                ln = self.advance().line
                self.expect("(")
                expr = self.parse_expression()
                self.expect(")")
                return Node("SynchronizedStatement", [expr, self.parse_block()], line=ln)
            if t.text in ("class", "interface", "enum", "final", "abstract", "static"):
                mods = self.parse_modifiers()
                if self.at_kw("class") or self.at_kw("interface") or self.at_kw("enum"):
                    return self.parse_type_decl(mods)
                return self.parse_local_decl(mods)
            if t.text in PRIMITIVE_TYPES or t.text == "var":
                return self.parse_local_decl([])
        if self.at("@"):
            return self.parse_local_decl(self.parse_modifiers())
        if t.type == "ident" and self.peek().text == ":" and self.peek(2).text != ":":
            name = self.advance()
            self.advance()
            body = self.parse_statement()
            children = [leaf("Identifier", name.text, name.line)]
            if body is not None:
                children.append(body)
            return Node("LabeledStatement", children, line=name.line)
        if t.type == "ident":
            mark = self._mark()
            typ = self.try_parse_type()
            if typ is not None and self.cur().type == "ident":
                return self.parse_local_decl([], typ)
            self._rewind(mark)
        expr = self.parse_expression()
        self.expect(";")
        return Node("ExpressionStatement", [expr], line=expr.line)

    def parse_local_decl(self, mods, typ=None, terminated=True):
        if typ is None:
            typ = self.parse_type()
        children = mods + [typ, self.parse_declarator(self.expect_ident())]
        while self.accept(","):
            children.append(self.parse_declarator(self.expect_ident()))
        if terminated:
            self.expect(";")
        return Node("LocalVarDecl", children, line=typ.line)

    def parse_body_statement(self):
        """Loop/branch body: an empty statement still yields a Block node so
        control-flow edges always have a target."""
        s = self.parse_statement()
        if s is None:
            s = Node("Block", token="{}")
        return s

    def parse_if(self):
        ln = self.advance().line
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        children = [cond, self.parse_body_statement()]
        if self.at_kw("else"):
            self.advance()
            children.append(self.parse_body_statement())
        return Node("IfStatement", children, line=ln)

    def parse_while(self):
        ln = self.advance().line
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        return Node("WhileStatement", [cond, self.parse_body_statement()], line=ln)

    def parse_do(self):
        ln = self.advance().line
        body = self.parse_body_statement()
        if not self.at_kw("while"):
            self.error("expected 'while' after do body")
        self.advance()
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        self.expect(";")
        return Node("DoStatement", [body, cond], line=ln)

    def parse_for(self):
        ln = self.advance().line
        self.expect("(")
        if self._foreach_ahead():
            mods = self.parse_modifiers()
            ptype = self.parse_type()
            name = self.expect_ident()
            var = Node(
                "Parameter",
                mods + [ptype, leaf("Identifier", name.text, name.line)],
                line=name.line,
            )
            self.expect(":")
            iterable = self.parse_expression()
            self.expect(")")
            return Node(
                "ForEachStatement", [var, iterable, self.parse_body_statement()], line=ln
            )
        children = []
        if not self.at(";"):
            init = self._parse_for_init()
            children.append(Node("ForInit", init, line=ln))
        self.expect(";")
        if not self.at(";"):
            children.append(Node("ForCond", [self.parse_expression()], line=ln))
        self.expect(";")
        if not self.at(")"):
            updates = [self.parse_expression()]
            while self.accept(","):
                updates.append(self.parse_expression())
            children.append(Node("ForUpdate", updates, line=ln))
        self.expect(")")
        children.append(self.parse_body_statement())
        return Node("ForStatement", children, line=ln)

    def _parse_for_init(self):
        t = self.cur()
        if (t.type == "kw" and (t.text in PRIMITIVE_TYPES or t.text in ("final", "var"))) or self.at("@"):
            return [self.parse_local_decl(self.parse_modifiers(), terminated=False)]
        if t.type == "ident":
            mark = self._mark()
            typ = self.try_parse_type()
            if typ is not None and self.cur().type == "ident":
                return [self.parse_local_decl([], typ, terminated=False)]
            self._rewind(mark)
        exprs = [self.parse_expression()]
        while self.accept(","):
            exprs.append(self.parse_expression())
        return exprs

    def _foreach_ahead(self):
        """True when the for parens hold a ':' before any top-level ';'."""
        depth = 0
        ternaries = 0
        j = self.i
        while j < len(self.toks):
            text = self.toks[j].text
            if text in "([":
                depth += 1
            elif text in ")]":
                if text == ")" and depth == 0:
                    return False
                depth -= 1
            elif depth == 0:
                if text == ";":
                    return False
                if text == "?":
                    ternaries += 1
                elif text == ":":
                    if ternaries == 0:
                        return True
                    ternaries -= 1
            j += 1
        return False

    def parse_switch(self):
        ln = self.advance().line
        self.expect("(")
        selector = self.parse_expression()
        self.expect(")")
        self.expect("{")
        cases = []
        while not self.at("}") and not self.at(""):
            cases.append(self.parse_switch_case())
        self.expect("}")
        return Node("SwitchStatement", [selector] + cases, line=ln)

    def parse_switch_case(self):
        children = []
        ln = self.cur().line
        if self.at_kw("default"):
            self.advance()
        elif self.at_kw("case"):
            self.advance()
            children.append(self.parse_ternary())
            while self.accept(","):
                children.append(self.parse_ternary())
        else:
            self.error("expected 'case' or 'default'")
        if self.accept("->"):
            if self.at("{"):
                children.append(self.parse_block())
            elif self.at_kw("throw"):
                children.append(self.parse_throw())
            else:
                expr = self.parse_expression()
                self.expect(";")
                children.append(Node("ExpressionStatement", [expr], line=ln))
        else:
            self.expect(":")
            while not (
                self.at("}") or self.at_kw("case") or self.at_kw("default") or self.at("")
            ):
                s = self.parse_statement()
                if s is not None:
                    children.append(s)
        node = Node("SwitchCase", children, line=ln)
        if not children:
            node.token = "default"
        return node

    def parse_try(self):
        ln = self.advance().line
        children = []
        if self.accept("("):
            while not self.at(")"):
                mods = self.parse_modifiers()
                typ = self.parse_type()
                name = self.expect_ident()
                self.expect("=")
                init = self.parse_expression()
                children.append(
                    Node(
                        "LocalVarDecl",
                        mods
                        + [
                            typ,
                            Node(
                                "VarDeclarator",
                                [leaf("Identifier", name.text, name.line), init],
                                line=name.line,
                            ),
                        ],
                        line=name.line,
                    )
                )
                if not self.accept(";"):
                    break
            self.expect(")")
        children.append(self.parse_block())
        while self.at_kw("catch"):
            cln = self.advance().line
            self.expect("(")
            cmods = self.parse_modifiers()
            ctypes = [self.parse_type()]
            while self.accept("|"):
                ctypes.append(self.parse_type())
            cname = self.expect_ident()
            self.expect(")")
            children.append(
                Node(
                    "CatchClause",
                    cmods
                    + ctypes
                    + [leaf("Identifier", cname.text, cname.line), self.parse_block()],
                    line=cln,
                )
            )
        if self.at_kw("finally"):
            fln = self.advance().line
            children.append(Node("FinallyClause", [self.parse_block()], line=fln))
        return Node("TryStatement", children, line=ln)

    def parse_return(self):
        ln = self.advance().line
        children = []
        if not self.at(";"):
            children.append(self.parse_expression())
        self.expect(";")
        return Node("ReturnStatement", children, line=ln)

    def parse_throw(self):
        ln = self.advance().line
        expr = self.parse_expression()
        self.expect(";")
        return Node("ThrowStatement", [expr], line=ln)

    def parse_break_continue(self):
        t = self.advance()
        kind = "BreakStatement" if t.text == "break" else "ContinueStatement"
        children = []
        if self.cur().type == "ident":
            lab = self.advance()
            children.append(leaf("Identifier", lab.text, lab.line))
        self.expect(";")
        node = Node(kind, children, line=t.line)
        if not children:
            node.token = t.text
        return node

    def parse_assert(self):
        ln = self.advance().line
        children = [self.parse_expression()]
        if self.accept(":"):
            children.append(self.parse_expression())
        self.expect(";")
        return Node("AssertStatement", children, line=ln)

    # expressions

    def parse_expression(self):
        expr = self.parse_ternary()
        t = self.cur()
        if t.type == "op" and t.text in ASSIGN_OPS:
            op = self.advance()
            if self.at("{"):
                rhs = self.parse_array_init()
            else:
                rhs = self.parse_expression()
            return Node(
                "Assignment",
                [expr, leaf("Operator", op.text, op.line), rhs],
                line=expr.line,
            )
        return expr

    def parse_ternary(self):
        cond = self.parse_binary(0)
        if self.at("?"):
            self.advance()
            then = self.parse_expression()
            self.expect(":")
            other = self.parse_ternary()
            return Node("Conditional", [cond, then, other], line=cond.line)
        return cond

    def parse_binary(self, level):
        if level >= len(BINARY_LEVELS):
            return self.parse_unary()
        ops = BINARY_LEVELS[level]
        node = self.parse_binary(level + 1)
        while True:
            t = self.cur()
            if t.text == "instanceof" and "instanceof" in ops:
                self.advance()
                node = Node("InstanceOf", [node, self.parse_type()], line=node.line)
                continue
            if t.type == "op" and t.text in ops:
                self.advance()
                rhs = self.parse_binary(level + 1)
                node = Node(
                    "BinaryOp",
                    [node, leaf("Operator", t.text, t.line), rhs],
                    line=node.line,
                )
                continue
            return node

    def parse_unary(self):
        t = self.cur()
        if t.type == "op" and t.text in ("+", "-", "!", "~", "++", "--"):
            self.advance()
            operand = self.parse_unary()
            return Node(
                "UnaryOp", [leaf("Operator", t.text, t.line), operand], line=t.line
            )
        if self.at("("):
            cast = self._try_parse_cast()
            if cast is not None:
                return cast
        return self.parse_postfix()

    def _try_parse_cast(self):
        mark = self._mark()
        self.advance()  # '('
        primitive = self.cur().type == "kw" and self.cur().text in PRIMITIVE_TYPES
        typ = self.try_parse_type()
        if typ is not None and self.at(")"):
            nxt = self.peek()
            follows = (
                nxt.type in CAST_FOLLOW_TYPES
                or nxt.text in CAST_FOLLOW_TEXTS
                or (primitive and nxt.text in PRIMITIVE_CAST_FOLLOW)
            )
            if follows:
                self.advance()  # ')'
                operand = self.parse_unary()
                return Node("Cast", [typ, operand], line=typ.line)
        self._rewind(mark)
        return None

    def parse_postfix(self):
        node = self.parse_primary()
        while True:
            t = self.cur()
            if self.at(".") and self.peek().type == "ident":
                name = self.peek()
                if self.peek(2).text == "(":
                    self.advance()
                    self.advance()
                    self.expect("(")
                    args = self.parse_arguments()
                    node = Node(
                        "MethodInvocation",
                        [node, leaf("MethodName", name.text, name.line)] + args,
                        line=node.line,
                    )
                else:
                    self.advance()
                    self.advance()
                    node = Node(
                        "FieldAccess",
                        [node, leaf("MemberName", name.text, name.line)],
                        line=node.line,
                    )
            elif self.at(".") and self.peek().text == "class":
                self.advance()
                self.advance()
                node = Node("ClassLiteral", [node], line=node.line)
            elif self.at(".") and self.peek().text in ("this", "super"):
                kw = self.peek()
                self.advance()
                self.advance()
                node = Node(
                    "FieldAccess",
                    [node, leaf("MemberName", kw.text, kw.line)],
                    line=node.line,
                )
            elif self.at("["):
                self.advance()
                idx = self.parse_expression()
                self.expect("]")
                node = Node("ArrayAccess", [node, idx], line=node.line)
            elif self.at("::"):
                self.advance()
                name = self.advance()
                node = Node(
                    "MethodRef",
                    [node, leaf("MethodName", name.text, name.line)],
                    line=node.line,
                )
            elif t.type == "op" and t.text in ("++", "--"):
                self.advance()
                node = Node(
                    "PostfixOp",
                    [node, leaf("Operator", t.text, t.line)],
                    line=node.line,
                )
            else:
                return node

    def parse_primary(self):
        t = self.cur()
        if t.type in ("num", "str", "char"):
            self.advance()
            return leaf("Literal", t.text, t.line)
        if t.type == "kw":
            if t.text == "new":
                return self.parse_creator()
            if t.text in ("this", "super"):
                self.advance()
                kind = "This" if t.text == "this" else "Super"
                if self.at("("):
                    self.advance()
                    args = self.parse_arguments()
                    return Node(
                        "MethodInvocation",
                        [leaf("MethodName", t.text, t.line)] + args,
                        line=t.line,
                    )
                return leaf(kind, t.text, t.line)
            if t.text in PRIMITIVE_TYPES:
                typ = self.parse_type()
                self.expect(".")
                self.expect("class")
                return Node("ClassLiteral", [typ], line=t.line)
        if self.at("("):
            if self._lambda_params_ahead():
                return self.parse_lambda_parenthesized()
            self.advance()
            expr = self.parse_expression()
            self.expect(")")
            return expr
        if t.type == "ident":
            if self.peek().text == "->":
                name = self.advance()
                self.advance()
                param = Node(
                    "Parameter",
                    [leaf("Identifier", name.text, name.line)],
                    line=name.line,
                )
                return Node("Lambda", [param, self.parse_lambda_body()], line=name.line)
            return self.parse_name_chain()
        self.error(f"unexpected token {t.text!r} in expression")

    def parse_name_chain(self):
        first = self.expect_ident()
        segs = [first.text]
        while (
            self.at(".")
            and self.peek().type == "ident"
            and self.peek(2).text != "("
        ):
            self.advance()
            segs.append(self.advance().text)
        if self.at("("):
            # unqualified call: the trailing segment is the method name
            mname = segs.pop()
            self.advance()
            args = self.parse_arguments()
            children = []
            if segs:
                children.append(self._name_leaf(segs, first.line))
            children.append(leaf("MethodName", mname, first.line))
            return Node("MethodInvocation", children + args, line=first.line)
        if self.at(".") and self.peek().type == "ident" and self.peek(2).text == "(":
            receiver = self._name_leaf(segs, first.line)
            name = self.peek()
            self.advance()
            self.advance()
            self.expect("(")
            args = self.parse_arguments()
            return Node(
                "MethodInvocation",
                [receiver, leaf("MethodName", name.text, name.line)] + args,
                line=first.line,
            )
        return self._name_leaf(segs, first.line)

    def _name_leaf(self, segs, line):
        if len(segs) == 1:
            return leaf("Identifier", segs[0], line)
        return leaf("MemberReference", ".".join(segs), line)

    def parse_arguments(self):
        args = []
        while not self.at(")"):
            args.append(self.parse_expression())
            if not self.accept(","):
                break
        self.expect(")")
        return args

    def parse_creator(self):
        ln = self.advance().line  # 'new'
        t = self.cur()
        if t.type == "kw" and t.text in PRIMITIVE_TYPES:
            self.advance()
            base = leaf("TypeRef", t.text, t.line)
        else:
            name = self.parse_dotted_name()
            if self.at("<"):
                args = self.parse_type_args()
                if args:
                    base = Node("TypeRef", [leaf("TypeName", name, t.line)] + args, line=t.line)
                else:
                    base = leaf("TypeRef", name, t.line)
            else:
                base = leaf("TypeRef", name, t.line)
        if self.at("("):
            self.advance()
            children = [base] + self.parse_arguments()
            node = Node("ClassCreator", children, line=ln)
            if self.at("{"):
                self.advance()
                body = Node("AnonymousClassBody", self.parse_members(), line=self.cur().line)
                if not body.children:
                    body.token = "{}"
                self.expect("}")
                node.children.append(body)
            return node
        if self.at("["):
            children = [base]
            while self.accept("["):
                if self.at("]"):
                    self.advance()
                else:
                    children.append(self.parse_expression())
                    self.expect("]")
            if self.at("{"):
                children.append(self.parse_array_init())
            return Node("ArrayCreator", children, line=ln)
        self.error("expected '(' or '[' after new type")

    def parse_array_init(self):
        ln = self.expect("{").line
        elems = []
        while not self.at("}"):
            if self.at("{"):
                elems.append(self.parse_array_init())
            else:
                elems.append(self.parse_expression())
            if not self.accept(","):
                break
        self.expect("}")
        node = Node("ArrayInit", elems, line=ln)
        if not elems:
            node.token = "{}"
        return node

    def _lambda_params_ahead(self):
        """At '(': true when the matching ')' is followed by '->'."""
        depth = 0
        j = self.i
        while j < len(self.toks):
            text = self.toks[j].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return self.toks[j + 1].text == "->" if j + 1 < len(self.toks) else False
            elif text in (";", "{"):
                return False
            j += 1
        return False

    def parse_lambda_parenthesized(self):
        ln = self.expect("(").line
        params = []
        while not self.at(")"):
            mods = self.parse_modifiers()
            children = list(mods)
            if self.cur().type == "ident" and self.peek().text in (",", ")"):
                name = self.advance()
            else:
                children.append(self.parse_type())
                name = self.expect_ident()
            children.append(leaf("Identifier", name.text, name.line))
            params.append(Node("Parameter", children, line=name.line))
            if not self.accept(","):
                break
        self.expect(")")
        self.expect("->")
        return Node("Lambda", params + [self.parse_lambda_body()], line=ln)

    def parse_lambda_body(self):
        if self.at("{"):
            return self.parse_block()
        return self.parse_expression()


def build_tree(source, path=""):
    """Parse source text into the internal node tree."""
    tokens = tokenize(source)
    parser = Parser(tokens, path)
    unit = parser.parse_compilation_unit()
    return unit


def tree_to_graph(root, path, depth="file"):
    """Assign preorder ids and materialize the tree as a CodeGraph.

    Childless nodes without a natural token get the empty-string token so
    the token-iff-terminal rule holds for every node.
    """
    g = CodeGraph(path, depth)
    stack = [(root, None)]
    while stack:
        node, parent = stack.pop()
        token = node.token
        if not node.children and token is None:
            token = ""
        if node.children:
            token = None
        span = (node.line, node.line) if node.line is not None else None
        nid = g.add_node(node.kind, token, span)
        if parent is not None:
            g.add_child(parent, nid)
        for child in reversed(node.children):
            stack.append((child, nid))
    return g


def parse_ast(source, path=""):
    """Parse Java source into an AST-only CodeGraph (tree edges plus their
    AstParent reverses; no flow edges)."""
    return tree_to_graph(build_tree(source, path), path)
