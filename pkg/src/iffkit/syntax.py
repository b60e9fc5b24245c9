"""Lexer, parser, and canonical printer for the IFF s-expression dialect.

The surface syntax is a KIF-like language of restricted quantification:

* keywords  ``forall exists and or implies iff not =`` (special only in
  operator position);
* variables ``?name``;
* symbols drawn from the alphabet ``[A-Za-z0-9#+.:_-]`` with at most one
  colon;
* tuples ``[x y]`` and applications ``(head arg ...)``;
* quantifiers with sorted binding lists ``(forall ((Sort ?v) ...) body)``;
* ``;`` line comments.

A parenthesised level prefix immediately followed by ``.`` or ``:`` is
fused into a single symbol, so ``((#n+1).set:set f)`` lexes as the symbol
``#n+1.set:set`` applied to ``f``.

Source files are sequences of namespace blocks::

    (namespace NAME (level LEVEL) AXIOM ...)

Canonical printing is deterministic and idempotent: expressions print on
one line; namespace blocks print one axiom per line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

# ===== PART 1: tokens =====

KEYWORDS = frozenset({"forall", "exists", "and", "or", "implies", "iff", "not", "="})
QUANTIFIER_WORDS = frozenset({"forall", "exists"})
CONNECTIVE_WORDS = frozenset({"and", "or", "implies", "iff", "not"})

SYMBOL_CHARS = frozenset(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789#+.:_-"
)

LEVEL_DECL_WORDS = frozenset({"generic", "meta", "type", "iff"})


class SyntaxIssue(Exception):
    """Base class for lexer and parser errors; carries a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class IllegalCharacter(SyntaxIssue):
    """A character outside the token alphabet, or a second colon in a symbol."""


class UnbalancedParens(SyntaxIssue):
    """A missing or stray closing delimiter."""


class MalformedQuantifier(SyntaxIssue):
    """A quantifier whose binding list does not have the required shape."""


class ArityError(SyntaxIssue):
    """A connective or equation applied to the wrong number of operands."""


class MalformedExpr(SyntaxIssue):
    """An expression that fits no production of the grammar."""


class MalformedUnit(SyntaxIssue):
    """A source unit that is not a sequence of well-formed namespace blocks."""


class DuplicateNamespace(SyntaxIssue):
    """The same namespace name opened twice in one source unit."""


@dataclass(frozen=True)
class Token:
    """One lexical token with its 1-based source position."""

    kind: str  # lparen rparen lbracket rbracket lbrace rbrace symbol variable keyword
    text: str
    line: int
    column: int


def tokenize(text: str, *, braces: bool = False) -> list[Token]:
    """Split source text into tokens, discarding ``;`` comments.

    ``braces=True`` additionally accepts ``{`` and ``}`` (used by the
    interpretation file format for set literals); in the plain dialect a
    brace raises :class:`IllegalCharacter`.
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def advance(k: int = 1) -> None:
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = text[i]
        if c in " \t\r\n":
            advance()
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                advance()
            continue
        start_line, start_col = line, col
        if c == "(":
            fused = _try_fused_prefix(text, i)
            if fused is not None:
                sym, length = fused
                _check_symbol(sym, start_line, start_col)
                tokens.append(Token("symbol", sym, start_line, start_col))
                advance(length)
                continue
            tokens.append(Token("lparen", "(", start_line, start_col))
            advance()
            continue
        if c == ")":
            tokens.append(Token("rparen", ")", start_line, start_col))
            advance()
            continue
        if c == "[":
            tokens.append(Token("lbracket", "[", start_line, start_col))
            advance()
            continue
        if c == "]":
            tokens.append(Token("rbracket", "]", start_line, start_col))
            advance()
            continue
        if braces and c == "{":
            tokens.append(Token("lbrace", "{", start_line, start_col))
            advance()
            continue
        if braces and c == "}":
            tokens.append(Token("rbrace", "}", start_line, start_col))
            advance()
            continue
        if c == "=":
            tokens.append(Token("keyword", "=", start_line, start_col))
            advance()
            continue
        if c == "?":
            j = i + 1
            while j < n and text[j] in SYMBOL_CHARS:
                j += 1
            if j == i + 1:
                raise IllegalCharacter("'?' must introduce a variable name", line, col)
            name = text[i:j]
            tokens.append(Token("variable", name, start_line, start_col))
            advance(j - i)
            continue
        if c in SYMBOL_CHARS:
            j = i
            while j < n and text[j] in SYMBOL_CHARS:
                j += 1
            word = text[i:j]
            _check_symbol(word, start_line, start_col)
            kind = "keyword" if word in KEYWORDS else "symbol"
            tokens.append(Token(kind, word, start_line, start_col))
            advance(j - i)
            continue
        raise IllegalCharacter(f"illegal character {c!r}", line, col)
    return tokens


def _check_symbol(word: str, line: int, col: int) -> None:
    if word.count(":") > 1:
        raise IllegalCharacter(f"symbol {word!r} has more than one colon", line, col)


def _try_fused_prefix(text: str, i: int) -> Optional[tuple[str, int]]:
    """Detect ``(#...)`` immediately followed by ``.`` or ``:`` at ``text[i]``.

    Returns the fused symbol text and its total source length, or None.
    """
    n = len(text)
    if i + 1 >= n or text[i] != "(" or text[i + 1] != "#":
        return None
    j = i + 1
    while j < n and (text[j] == "#" or text[j].isalnum() or text[j] == "+"):
        j += 1
    if j >= n or text[j] != ")" or j == i + 1:
        return None
    if j + 1 >= n or text[j + 1] not in ".:":
        return None
    inner = text[i + 1 : j]
    k = j + 1
    while k < n and text[k] in SYMBOL_CHARS:
        k += 1
    return inner + text[j + 1 : k], k - i


# ===== PART 2: abstract syntax =====


@dataclass(frozen=True)
class Expr:
    """Base class for expressions; positions do not take part in equality."""

    line: int = field(default=0, compare=False, kw_only=True)
    column: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Name(Expr):
    """A symbol, possibly carrying level and namespace prefixes."""

    text: str


@dataclass(frozen=True)
class Variable(Expr):
    """A ``?``-prefixed variable; ``name`` keeps the leading ``?``."""

    name: str


@dataclass(frozen=True)
class TupleExpr(Expr):
    """A bracketed tuple ``[x y ...]`` of at least two components."""

    items: tuple[Expr, ...]


@dataclass(frozen=True)
class Apply(Expr):
    """An application ``(head arg ...)`` with at least one argument."""

    head: Expr
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Equation(Expr):
    """An equation ``(= lhs rhs)``."""

    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class Connective(Expr):
    """``and or implies iff`` with two operands, or ``not`` with one."""

    op: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Binding:
    """One sorted binding ``(Sort ?v)``; ``sort`` is None only when a
    violation of restricted quantification is constructed deliberately."""

    sort: Optional[Expr]
    variable: str
    line: int = field(default=0, compare=False, kw_only=True)
    column: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Quantifier(Expr):
    """``(forall ((Sort ?v) ...) body)`` or the ``exists`` counterpart."""

    kind: str  # "forall" | "exists"
    bindings: tuple[Binding, ...]
    body: Expr


@dataclass(frozen=True)
class Namespace:
    """One ``(namespace NAME (level L) AXIOM ...)`` block."""

    name: str
    level_text: str
    axioms: tuple[Expr, ...]
    line: int = field(default=0, compare=False, kw_only=True)
    column: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class SourceUnit:
    """A parsed source file: an ordered sequence of namespace blocks."""

    namespaces: tuple[Namespace, ...]
    path: str = "<input>"


# ===== PART 3: parser =====


class _TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[Token]:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            last = self.tokens[-1] if self.tokens else Token("symbol", "", 1, 1)
            raise UnbalancedParens("unexpected end of input", last.line, last.column)
        self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        t = self.next()
        if t.kind != kind:
            raise UnbalancedParens(f"expected {what}, found {t.text!r}", t.line, t.column)
        return t


def parse_expr(tokens: list[Token]) -> Expr:
    """Parse a token list as one complete expression."""
    stream = _TokenStream(tokens)
    e = _parse_expr(stream)
    trailing = stream.peek()
    if trailing is not None:
        raise MalformedExpr(
            f"trailing tokens after expression: {trailing.text!r}",
            trailing.line,
            trailing.column,
        )
    return e


def parse_text(text: str) -> Expr:
    """Tokenize and parse one expression from source text."""
    return parse_expr(tokenize(text))


def _parse_expr(s: _TokenStream) -> Expr:
    t = s.next()
    if t.kind == "symbol":
        return Name(t.text, line=t.line, column=t.column)
    if t.kind == "variable":
        return Variable(t.text, line=t.line, column=t.column)
    if t.kind == "keyword":
        raise MalformedExpr(f"keyword {t.text!r} in operand position", t.line, t.column)
    if t.kind == "lbracket":
        items: list[Expr] = []
        while True:
            nxt = s.peek()
            if nxt is None:
                raise UnbalancedParens("unterminated tuple", t.line, t.column)
            if nxt.kind == "rbracket":
                s.next()
                break
            items.append(_parse_expr(s))
        if len(items) < 2:
            raise MalformedExpr("a tuple needs at least two components", t.line, t.column)
        return TupleExpr(tuple(items), line=t.line, column=t.column)
    if t.kind == "lparen":
        return _parse_compound(s, t)
    if t.kind in ("rparen", "rbracket"):
        raise UnbalancedParens(f"stray {t.text!r}", t.line, t.column)
    raise MalformedExpr(f"unexpected token {t.text!r}", t.line, t.column)


def _parse_compound(s: _TokenStream, open_tok: Token) -> Expr:
    head = s.peek()
    if head is None:
        raise UnbalancedParens("unterminated expression", open_tok.line, open_tok.column)
    if head.kind == "rparen":
        raise MalformedExpr("empty expression '()'", open_tok.line, open_tok.column)
    if head.kind == "keyword":
        s.next()
        if head.text in QUANTIFIER_WORDS:
            return _parse_quantifier(s, head, open_tok)
        operands = _parse_operands_until_rparen(s, open_tok)
        return _build_logical(head, operands, open_tok)
    # Ordinary application: head is itself an expression.
    head_expr = _parse_expr(s)
    args = _parse_operands_until_rparen(s, open_tok)
    if not args:
        raise MalformedExpr(
            "an application needs at least one argument", open_tok.line, open_tok.column
        )
    return Apply(head_expr, tuple(args), line=open_tok.line, column=open_tok.column)


def _parse_operands_until_rparen(s: _TokenStream, open_tok: Token) -> list[Expr]:
    operands: list[Expr] = []
    while True:
        nxt = s.peek()
        if nxt is None:
            raise UnbalancedParens(
                "unterminated expression", open_tok.line, open_tok.column
            )
        if nxt.kind == "rparen":
            s.next()
            return operands
        operands.append(_parse_expr(s))


def _build_logical(head: Token, operands: list[Expr], open_tok: Token) -> Expr:
    op = head.text
    if op == "=":
        if len(operands) != 2:
            raise ArityError(
                f"'=' takes exactly two terms, found {len(operands)}",
                head.line,
                head.column,
            )
        return Equation(operands[0], operands[1], line=open_tok.line, column=open_tok.column)
    if op == "not":
        if len(operands) != 1:
            raise ArityError(
                f"'not' takes exactly one operand, found {len(operands)}",
                head.line,
                head.column,
            )
        return Connective("not", tuple(operands), line=open_tok.line, column=open_tok.column)
    if op in ("implies", "iff"):
        if len(operands) != 2:
            raise ArityError(
                f"{op!r} takes exactly two operands, found {len(operands)}",
                head.line,
                head.column,
            )
        return Connective(op, tuple(operands), line=open_tok.line, column=open_tok.column)
    if op in ("and", "or"):
        if len(operands) < 2:
            raise ArityError(
                f"{op!r} takes at least two operands, found {len(operands)}",
                head.line,
                head.column,
            )
        result = Connective(
            op, (operands[0], operands[1]), line=open_tok.line, column=open_tok.column
        )
        for extra in operands[2:]:
            result = Connective(op, (result, extra), line=open_tok.line, column=open_tok.column)
        return result
    raise MalformedExpr(f"keyword {op!r} cannot head an expression", head.line, head.column)


def _parse_quantifier(s: _TokenStream, head: Token, open_tok: Token) -> Quantifier:
    opener = s.next()
    if opener.kind != "lparen":
        raise MalformedQuantifier(
            f"{head.text!r} needs a parenthesised binding list", opener.line, opener.column
        )
    bindings: list[Binding] = []
    while True:
        nxt = s.peek()
        if nxt is None:
            raise UnbalancedParens("unterminated binding list", opener.line, opener.column)
        if nxt.kind == "rparen":
            s.next()
            break
        if nxt.kind != "lparen":
            raise MalformedQuantifier(
                f"expected a binding '(Sort ?v)', found {nxt.text!r}", nxt.line, nxt.column
            )
        bindings.append(_parse_binding(s, s.next()))
    if not bindings:
        raise MalformedQuantifier(
            f"{head.text!r} needs at least one binding", head.line, head.column
        )
    after = s.peek()
    if after is not None and after.kind == "rparen":
        raise MalformedQuantifier(
            f"{head.text!r} needs a body", after.line, after.column
        )
    body = _parse_expr(s)
    closer = s.next()
    if closer.kind != "rparen":
        raise MalformedQuantifier(
            f"a quantifier has exactly one body, found extra {closer.text!r}",
            closer.line,
            closer.column,
        )
    return Quantifier(
        head.text, tuple(bindings), body, line=open_tok.line, column=open_tok.column
    )


def _parse_binding(s: _TokenStream, open_tok: Token) -> Binding:
    sort_tok = s.peek()
    if sort_tok is not None and sort_tok.kind == "keyword":
        raise MalformedQuantifier(
            f"keyword {sort_tok.text!r} cannot be a binding sort",
            sort_tok.line,
            sort_tok.column,
        )
    sort = _parse_expr(s)
    var_tok = s.next()
    if var_tok.kind in ("variable", "symbol"):
        # Schematic presentations bind bare symbols in variable position.
        var = var_tok.text
    else:
        raise MalformedQuantifier(
            f"expected a bound variable, found {var_tok.text!r}",
            var_tok.line,
            var_tok.column,
        )
    closer = s.next()
    if closer.kind != "rparen":
        raise MalformedQuantifier(
            f"a binding has exactly two parts, found extra {closer.text!r}",
            closer.line,
            closer.column,
        )
    return Binding(sort, var, line=open_tok.line, column=open_tok.column)


# ===== PART 4: source units =====

_LEVEL_WORD_OK = LEVEL_DECL_WORDS  # plus all-digit strings, checked below


def _valid_level_text(text: str) -> bool:
    return text in _LEVEL_WORD_OK or text.isdigit()


def parse_unit(text: str, path: str = "<input>") -> SourceUnit:
    """Parse a source file: a sequence of namespace blocks."""
    stream = _TokenStream(tokenize(text))
    namespaces: list[Namespace] = []
    seen: set[str] = set()
    while stream.peek() is not None:
        open_tok = stream.expect("lparen", "'(namespace ...)'")
        word = stream.next()
        if word.text != "namespace":
            raise MalformedUnit(
                f"expected 'namespace', found {word.text!r}", word.line, word.column
            )
        name_tok = stream.next()
        if name_tok.kind not in ("symbol", "keyword"):
            raise MalformedUnit(
                f"expected a namespace name, found {name_tok.text!r}",
                name_tok.line,
                name_tok.column,
            )
        ns_name = name_tok.text
        if ns_name in seen:
            raise DuplicateNamespace(
                f"namespace {ns_name!r} opened twice", name_tok.line, name_tok.column
            )
        seen.add(ns_name)
        stream.expect("lparen", "'(level ...)'")
        level_word = stream.next()
        if level_word.text != "level":
            raise MalformedUnit(
                f"expected 'level', found {level_word.text!r}",
                level_word.line,
                level_word.column,
            )
        level_tok = stream.next()
        if level_tok.kind not in ("symbol", "keyword") or not _valid_level_text(level_tok.text):
            raise MalformedUnit(
                f"invalid level {level_tok.text!r}; expected 0, a positive integer, "
                "'generic', 'meta', 'type', or 'iff'",
                level_tok.line,
                level_tok.column,
            )
        stream.expect("rparen", "')' closing the level declaration")
        axioms: list[Expr] = []
        while True:
            nxt = stream.peek()
            if nxt is None:
                raise UnbalancedParens(
                    "unterminated namespace block", open_tok.line, open_tok.column
                )
            if nxt.kind == "rparen":
                stream.next()
                break
            axioms.append(_parse_expr(stream))
        namespaces.append(
            Namespace(
                ns_name,
                level_tok.text,
                tuple(axioms),
                line=open_tok.line,
                column=open_tok.column,
            )
        )
    return SourceUnit(tuple(namespaces), path=path)


# ===== PART 5: canonical printing =====


def print_canonical(e: Expr) -> str:
    """Render an expression in canonical one-line form."""
    if isinstance(e, Name):
        return e.text
    if isinstance(e, Variable):
        return e.name
    if isinstance(e, TupleExpr):
        return "[" + " ".join(print_canonical(x) for x in e.items) + "]"
    if isinstance(e, Apply):
        parts = [print_canonical(e.head)] + [print_canonical(a) for a in e.args]
        return "(" + " ".join(parts) + ")"
    if isinstance(e, Equation):
        return f"(= {print_canonical(e.lhs)} {print_canonical(e.rhs)})"
    if isinstance(e, Connective):
        return "(" + " ".join([e.op] + [print_canonical(a) for a in e.args]) + ")"
    if isinstance(e, Quantifier):
        bindings = " ".join(_print_binding(b) for b in e.bindings)
        return f"({e.kind} ({bindings}) {print_canonical(e.body)})"
    raise TypeError(f"not an expression: {e!r}")


def _print_binding(b: Binding) -> str:
    if b.sort is None:
        raise ValueError(f"binding for {b.variable!r} has no sort to print")
    return f"({print_canonical(b.sort)} {b.variable})"


def print_unit_canonical(unit: SourceUnit) -> str:
    """Render a source unit; the output re-parses to an equal unit."""
    blocks: list[str] = []
    for ns in unit.namespaces:
        lines = [f"(namespace {ns.name} (level {ns.level_text})"]
        for ax in ns.axioms:
            lines.append("  " + print_canonical(ax))
        blocks.append("\n".join(lines) + ")")
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# ===== PART 6: small traversal helpers =====


def walk(e: Expr) -> Iterator[Expr]:
    """Yield ``e`` and all sub-expressions, including binding sorts."""
    yield e
    if isinstance(e, TupleExpr):
        for x in e.items:
            yield from walk(x)
    elif isinstance(e, Apply):
        yield from walk(e.head)
        for a in e.args:
            yield from walk(a)
    elif isinstance(e, Equation):
        yield from walk(e.lhs)
        yield from walk(e.rhs)
    elif isinstance(e, Connective):
        for a in e.args:
            yield from walk(a)
    elif isinstance(e, Quantifier):
        for b in e.bindings:
            if b.sort is not None:
                yield from walk(b.sort)
        yield from walk(e.body)


def contains_variable(e: Expr) -> bool:
    """True when any variable occurs anywhere in ``e``."""
    return any(isinstance(x, Variable) for x in walk(e))
