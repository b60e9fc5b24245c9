"""Metalevels, qualified names, resolution, and the symbol table.

A qualified name has the shape ``<level-prefix>.<path>:<base>`` where every
part except the base is optional: ``iff:set``, ``#n+1.ftn:source``,
``type.dgm.pr.mor:function-pair``, ``o.i:a``, ``belonging``.

Metalevels form a partial order

    Obj < Finite(1) < Finite(2) < ... < Meta < Type < Iff

with a symbolic generic level ``Generic(k)`` (written ``#n``, ``#n+1``,
``#n+2``) standing for an arbitrary finite level plus an offset.  Generic
levels compare with each other by offset, sit strictly below Meta, Type,
and Iff, and strictly above Obj; a generic level and a concrete finite
level are incomparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .syntax import (
    Apply,
    Binding,
    Connective,
    Equation,
    Expr,
    Name,
    Namespace,
    Quantifier,
    SourceUnit,
    TupleExpr,
    Variable,
    walk,
)

# ===== PART 1: levels =====


class NameError_(Exception):
    """Base class for name and level errors."""


class MalformedName(NameError_):
    """A name that does not fit the ``prefix.path:base`` shape."""


class NotGeneric(NameError_):
    """Instantiation applied to a name without a generic level prefix."""


class IncomparableLevels(NameError_):
    """A comparison between a concrete finite level and a generic one."""


@dataclass(frozen=True)
class Level:
    """One metalevel: ``kind`` is obj, finite, generic, meta, type, or iff.

    ``n`` is the finite level for kind ``finite`` and the offset for kind
    ``generic``; it is 0 otherwise.
    """

    kind: str
    n: int = 0

    def __repr__(self) -> str:
        return f"Level({self.prefix()!r})"

    def prefix(self) -> str:
        """The rendered level prefix (``#0`` for the object level)."""
        if self.kind == "obj":
            return "#0"
        if self.kind == "finite":
            return f"#{self.n}"
        if self.kind == "generic":
            return "#n" if self.n == 0 else f"#n+{self.n}"
        return self.kind

    def is_metashell(self) -> bool:
        return self.kind in ("meta", "type", "iff")


OBJ = Level("obj")
META = Level("meta")
TYPE = Level("type")
IFF = Level("iff")


def finite(n: int) -> Level:
    if n < 0:
        raise MalformedName(f"finite level must be non-negative, got {n}")
    return OBJ if n == 0 else Level("finite", n)


def generic(offset: int = 0) -> Level:
    if offset < 0:
        raise MalformedName(f"generic offset must be non-negative, got {offset}")
    return Level("generic", offset)


_GROUND_RANK = {"obj": 0, "finite": 1, "meta": 3, "type": 4, "iff": 5}


def level_leq(a: Level, b: Level) -> bool:
    """Partial order on levels; raises IncomparableLevels when undecidable."""
    if a.kind == "generic" or b.kind == "generic":
        if a.kind == "generic" and b.kind == "generic":
            return a.n <= b.n
        if a.kind == "generic":
            # generic <= meta/type/iff always; generic <= obj never;
            # generic vs concrete finite is undecidable.
            if b.kind in ("meta", "type", "iff"):
                return True
            if b.kind == "obj":
                return False
            raise IncomparableLevels(f"{a.prefix()} vs {b.prefix()}")
        # b is generic
        if a.kind == "obj":
            return True
        if a.kind in ("meta", "type", "iff"):
            return False
        raise IncomparableLevels(f"{a.prefix()} vs {b.prefix()}")
    ra, rb = _GROUND_RANK[a.kind], _GROUND_RANK[b.kind]
    if ra != rb:
        return ra < rb
    if a.kind == "finite":
        return a.n <= b.n
    return True


def level_lt(a: Level, b: Level) -> bool:
    """Strict order on levels; raises IncomparableLevels when undecidable."""
    return level_leq(a, b) and a != b


def comparable(a: Level, b: Level) -> bool:
    """True when the order between ``a`` and ``b`` is decided."""
    try:
        level_leq(a, b)
        return True
    except IncomparableLevels:
        return False


def level_from_decl(text: str) -> Level:
    """Interpret the LEVEL word of a ``(level ...)`` declaration."""
    if text == "generic":
        return generic(0)
    if text == "meta":
        return META
    if text == "type":
        return TYPE
    if text == "iff":
        return IFF
    if text.isdigit():
        return finite(int(text))
    raise MalformedName(f"invalid level declaration {text!r}")


# ===== PART 2: qualified names =====


@dataclass(frozen=True)
class QualifiedName:
    """A parsed name: optional level, namespace path segments, and base."""

    level: Optional[Level]
    path: tuple[str, ...]
    base: str

    def render(self) -> str:
        segments = list(self.path)
        if self.level is not None:
            segments.insert(0, self.level.prefix())
        if segments:
            return ".".join(segments) + ":" + self.base
        return self.base


def _parse_level_prefix(segment: str) -> Optional[Level]:
    if segment in ("iff", "type", "meta"):
        return {"iff": IFF, "type": TYPE, "meta": META}[segment]
    if segment == "#n":
        return generic(0)
    if segment.startswith("#n+") and segment[3:].isdigit():
        return generic(int(segment[3:]))
    if segment.startswith("#") and segment[1:].isdigit():
        return finite(int(segment[1:]))
    return None


def parse_name(text: str) -> QualifiedName:
    """Split a symbol into level prefix, path, and base."""
    if text.count(":") > 1:
        raise MalformedName(f"{text!r} has more than one colon")
    if not text:
        raise MalformedName("empty name")
    if ":" in text:
        left, base = text.split(":")
        if not base:
            raise MalformedName(f"{text!r} has an empty base")
        if not left:
            raise MalformedName(f"{text!r} has an empty context")
        segments = left.split(".")
        if any(not s for s in segments):
            raise MalformedName(f"{text!r} has an empty path segment")
        level = _parse_level_prefix(segments[0])
        path = tuple(segments[1:]) if level is not None else tuple(segments)
        return QualifiedName(level, path, base)
    if "." in text:
        raise MalformedName(f"{text!r} has a dotted context but no ':base'")
    return QualifiedName(None, (), text)


def render(q: QualifiedName) -> str:
    """Inverse of :func:`parse_name`: ``parse_name(render(q)) == q``."""
    return q.render()


def instantiate(q: QualifiedName, n: int) -> QualifiedName:
    """Replace a generic level ``#n+k`` by the concrete level ``n+k``."""
    if q.level is None or q.level.kind != "generic":
        raise NotGeneric(f"{q.render()!r} has no generic level prefix")
    return QualifiedName(finite(n + q.level.n), q.path, q.base)


@dataclass(frozen=True)
class Context:
    """Resolution context: the enclosing namespace's path and level."""

    path: tuple[str, ...]
    level: Level


def namespace_context(ns: Namespace) -> Context:
    """Derive the resolution context of a namespace block.

    The declared level is authoritative; a leading level prefix in the
    namespace name (as in ``#n.set`` or ``type.ftn``) is dropped from the
    path.
    """
    level = level_from_decl(ns.level_text)
    segments = ns.name.split(".")
    if _parse_level_prefix(segments[0]) is not None:
        segments = segments[1:]
    return Context(tuple(s for s in segments if s), level)


def resolve(text: str, context: Context) -> QualifiedName:
    """Qualify a written name against its enclosing namespace.

    Fully prefixed names resolve to themselves.  A bare base acquires the
    context's level and path; a dotted-but-unleveled name acquires only the
    context's level.
    """
    q = parse_name(text)
    if q.level is not None:
        return q
    if q.path:
        return QualifiedName(context.level, q.path, q.base)
    return QualifiedName(context.level, context.path, q.base)


def canonical_key(q: QualifiedName) -> str:
    """Symbol-table key: rendered name with generic offsets normalised.

    ``#n.set:set``, ``#n+1.set:set``, and ``#n+2.set:set`` all name the one
    generic family, so they share the key ``#n.set:set``.
    """
    if q.level is not None and q.level.kind == "generic":
        q = QualifiedName(generic(0), q.path, q.base)
    return q.render()


# ===== PART 3: symbol table =====


class DuplicateDefinition(NameError_):
    """The same canonical name defined in two different namespaces."""


@dataclass(frozen=True)
class Site:
    """One source occurrence of a name."""

    namespace: str
    level: Level  # level of the enclosing namespace
    line: int
    column: int


@dataclass(frozen=True)
class Reference(
):
    """One reference occurrence: where it sits and how it was written."""

    site: Site
    written_level: Level  # level carried by the name as resolved at the site


@dataclass
class SymbolEntry:
    """Everything the table knows about one canonical name."""

    name: str
    namespace: str = ""  # defining namespace, "" when only referenced
    level: Optional[Level] = None  # level of the name itself
    kinds: set[str] = field(default_factory=set)  # set | function | relation
    definitions: list[Site] = field(default_factory=list)
    references: list[Reference] = field(default_factory=list)

    @property
    def kind(self) -> str:
        return next(iter(self.kinds)) if len(self.kinds) == 1 else "unknown"

    @property
    def defined(self) -> bool:
        return bool(self.definitions)


@dataclass
class SymbolTable:
    """Map from canonical names to their entries."""

    entries: dict[str, SymbolEntry] = field(default_factory=dict)

    def entry(self, key: str) -> SymbolEntry:
        if key not in self.entries:
            self.entries[key] = SymbolEntry(name=key)
        return self.entries[key]

    def get(self, key: str) -> Optional[SymbolEntry]:
        return self.entries.get(key)

    def defined_entries(self) -> list[SymbolEntry]:
        return [e for e in self.entries.values() if e.defined]


def _record_reference(
    table: SymbolTable, name: Name, ctx: Context, ns_name: str
) -> Optional[QualifiedName]:
    try:
        q = resolve(name.text, ctx)
    except MalformedName:
        return None
    entry = table.entry(canonical_key(q))
    if entry.level is None:
        entry.level = q.level
    entry.references.append(
        Reference(Site(ns_name, ctx.level, name.line, name.column), q.level)
    )
    return q


def _is_strictly_higher(candidate: Level, base: Level) -> bool:
    try:
        return level_lt(base, candidate)
    except IncomparableLevels:
        return False


def _term_positions(e: Expr) -> Iterable[tuple[Name, str]]:
    """Yield every Name in ``e`` tagged with its syntactic role.

    Roles: ``head-n`` for the head of an atom with n arguments, ``term-head``
    for the head of an application nested in term position, and ``plain``
    otherwise.
    """
    if isinstance(e, Name):
        yield e, "plain"
        return
    if isinstance(e, Variable):
        return
    if isinstance(e, TupleExpr):
        for x in e.items:
            yield from _term_positions(x)
        return
    if isinstance(e, Apply):
        if isinstance(e.head, Name):
            yield e.head, f"head-{len(e.args)}"
        else:
            yield from _term_positions_term(e.head)
        for a in e.args:
            # an atom's arguments are terms, never formulas
            yield from _term_positions_term(a)
        return
    if isinstance(e, Equation):
        yield from _term_positions_term(e.lhs)
        yield from _term_positions_term(e.rhs)
        return
    if isinstance(e, Connective):
        for a in e.args:
            yield from _term_positions(a)
        return
    if isinstance(e, Quantifier):
        for b in e.bindings:
            if b.sort is not None:
                yield from _term_positions(b.sort)
        yield from _term_positions(e.body)
        return


def _term_positions_term(t: Expr) -> Iterable[tuple[Name, str]]:
    """Like :func:`_term_positions` but inside a term, where an application
    head denotes a function."""
    if isinstance(t, Name):
        yield t, "plain"
        return
    if isinstance(t, TupleExpr):
        for x in t.items:
            yield from _term_positions_term(x)
        return
    if isinstance(t, Apply):
        if isinstance(t.head, Name):
            yield t.head, "term-head"
        else:
            yield from _term_positions_term(t.head)
        for a in t.args:
            yield from _term_positions_term(a)
        return
    yield from _term_positions(t)


def _declaration_shape(e: Expr) -> Optional[tuple[Name, Name]]:
    """Match ``(P t)`` with P and t both plain names; return (P, t)."""
    if (
        isinstance(e, Apply)
        and isinstance(e.head, Name)
        and len(e.args) == 1
        and isinstance(e.args[0], Name)
    ):
        return e.head, e.args[0]
    return None


def _top_level_atom_head(e: Expr) -> Optional[Name]:
    """The head name of a top-level atom, looking under a single ``not``."""
    if isinstance(e, Connective) and e.op == "not" and len(e.args) == 1:
        e = e.args[0]
    if isinstance(e, Apply) and isinstance(e.head, Name):
        return e.head
    return None


def build_symbol_table(*units: SourceUnit) -> SymbolTable:
    """Collect definitions, references, and inferred kinds from units.

    A name is *defined* in a namespace N when it is the subject of a
    declaration ``(P t)`` whose classifier P resolves to a strictly higher
    level than N's, or when it resolves into N and heads a top-level atom
    of N.  Defining one canonical name in two different namespaces raises
    :class:`DuplicateDefinition`.
    """
    table = SymbolTable()
    for unit in units:
        for ns in unit.namespaces:
            ctx = namespace_context(ns)
            for axiom in ns.axioms:
                _collect_axiom(table, axiom, ctx, ns, unit.path)
    return table


def _collect_axiom(
    table: SymbolTable, axiom: Expr, ctx: Context, ns: Namespace, path: str
) -> None:
    # References and kind inference for every name occurrence.
    for name, role in _term_positions(axiom):
        q = _record_reference(table, name, ctx, ns.name)
        if q is None:
            continue
        entry = table.entry(canonical_key(q))
        if role == "head-1":
            entry.kinds.add("set")
        elif role == "term-head":
            entry.kinds.add("function")
        elif role.startswith("head-"):
            entry.kinds.add("relation")

    # Definitions by declaration with a strictly higher classifier.
    decl = _declaration_shape(axiom)
    if decl is not None:
        classifier, subject = decl
        try:
            cq = resolve(classifier.text, ctx)
            sq = resolve(subject.text, ctx)
        except MalformedName:
            return
        if cq.level is not None and _is_strictly_higher(cq.level, ctx.level):
            _record_definition(table, sq, ctx, ns, subject)

    # Definitions by heading a top-level atom of the namespace itself.
    head = _top_level_atom_head(axiom)
    if head is not None:
        try:
            hq = resolve(head.text, ctx)
        except MalformedName:
            return
        if hq.level == ctx.level and hq.path == ctx.path:
            _record_definition(table, hq, ctx, ns, head)


def _record_definition(
    table: SymbolTable, q: QualifiedName, ctx: Context, ns: Namespace, at: Name
) -> None:
    entry = table.entry(canonical_key(q))
    if entry.namespace and entry.namespace != ns.name:
        raise DuplicateDefinition(
            f"{entry.name!r} defined in both {entry.namespace!r} and {ns.name!r}"
        )
    entry.namespace = ns.name
    if entry.level is None:
        entry.level = q.level
    entry.definitions.append(Site(ns.name, ctx.level, at.line, at.column))
