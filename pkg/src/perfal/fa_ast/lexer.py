"""Java lexical analysis: comment stripping and tokenization.

The tokenizer covers the Java subset the parser understands: identifiers,
keywords, integer/float/char/string literals, operators, and separators.
Text blocks and hex floats are out of scope.
"""

from ..errors import ParseError

KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try var void volatile while
    """.split()
)

WORD_LITERALS = frozenset({"true", "false", "null"})

PRIMITIVE_TYPES = frozenset(
    {"boolean", "byte", "char", "short", "int", "long", "float", "double", "void"}
)

# Longest-match list; multi-char operators first.
OPERATORS = [
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "<<",
    "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", ">>", "~", "!", "+", "-", "*", "/", "%", "=",
    "<", ">", "&", "|", "^", "?", ":",
]

SEPARATORS = "(){}[];,.@"

IDENT_START = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$"
)
IDENT_CHARS = IDENT_START | frozenset("0123456789")


class Token:
    __slots__ = ("type", "text", "line", "col")

    def __init__(self, type, text, line, col):
        self.type = type  # ident | kw | num | str | char | op | sep | eof
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.type}, {self.text!r}, {self.line}:{self.col})"


def strip_comments(source):
    """Remove line and block comments, leaving string/char literals intact.

    A block comment squeezed between two identifier characters is replaced
    by a single space so tokens do not fuse; otherwise comments vanish.
    Unterminated comments are stripped to end of input without error.
    """
    out = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c == "/" and i + 1 < n and source[i + 1] == "/":
            i += 2
            while i < n and source[i] != "\n":
                i += 1
        elif c == "/" and i + 1 < n and source[i + 1] == "*":
            end = source.find("*/", i + 2)
            after = end + 2 if end != -1 else n
            prev_ch = out[-1] if out else ""
            next_ch = source[after] if after < n else ""
            if prev_ch in IDENT_CHARS and next_ch in IDENT_CHARS:
                out.append(" ")
            i = after
        elif c == '"' or c == "'":
            quote = c
            out.append(c)
            i += 1
            while i < n:
                ch = source[i]
                out.append(ch)
                if ch == "\\" and i + 1 < n:
                    out.append(source[i + 1])
                    i += 2
                    continue
                i += 1
                if ch == quote:
                    break
        else:
            out.append(c)
            i += 1
    return "".join(out)


def tokenize(source, strip=True):
    """Lex Java source into a token list ending with an eof token."""
    if strip:
        source = strip_comments(source)
    tokens = []
    i = 0
    n = len(source)
    line = 1
    line_start = 0

    def pos():
        return line, i - line_start + 1

    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if c in " \t\r\f":
            i += 1
            continue
        ln, col = pos()
        if c in IDENT_START:
            j = i + 1
            while j < n and source[j] in IDENT_CHARS:
                j += 1
            word = source[i:j]
            if word in WORD_LITERALS:
                tokens.append(Token("num", word, ln, col))
            elif word in KEYWORDS:
                tokens.append(Token("kw", word, ln, col))
            else:
                tokens.append(Token("ident", word, ln, col))
            i = j
        elif c.isdigit() or (c == "." and i + 1 < n and source[i + 1].isdigit()):
            i = _lex_number(source, i, tokens, ln, col)
        elif c == '"':
            i = _lex_quoted(source, i, '"', tokens, "str", ln, col)
        elif c == "'":
            i = _lex_quoted(source, i, "'", tokens, "char", ln, col)
        elif c in SEPARATORS:
            tokens.append(Token("sep", c, ln, col))
            i += 1
        else:
            for op in OPERATORS:
                if source.startswith(op, i):
                    tokens.append(Token("op", op, ln, col))
                    i += len(op)
                    break
            else:
                raise ParseError(f"unexpected character {c!r}", ln, col)
    tokens.append(Token("eof", "", line, i - line_start + 1))
    return tokens


def _lex_number(source, i, tokens, ln, col):
    n = len(source)
    j = i
    if source[j] == "0" and j + 1 < n and source[j + 1] in "xXbB":
        j += 2
        while j < n and (source[j] in "0123456789abcdefABCDEF_"):
            j += 1
    else:
        while j < n and (source[j].isdigit() or source[j] == "_"):
            j += 1
        if j < n and source[j] == ".":
            j += 1
            while j < n and (source[j].isdigit() or source[j] == "_"):
                j += 1
        if j < n and source[j] in "eE":
            k = j + 1
            if k < n and source[k] in "+-":
                k += 1
            if k < n and source[k].isdigit():
                j = k
                while j < n and source[j].isdigit():
                    j += 1
    if j < n and source[j] in "lLfFdD":
        j += 1
    tokens.append(Token("num", source[i:j], ln, col))
    return j


def _lex_quoted(source, i, quote, tokens, type, ln, col):
    n = len(source)
    j = i + 1
    while j < n:
        if source[j] == "\\":
            j += 2
            continue
        if source[j] == quote:
            j += 1
            tokens.append(Token(type, source[i:j], ln, col))
            return j
        if source[j] == "\n":
            break
        j += 1
    raise ParseError("unterminated literal", ln, col)
