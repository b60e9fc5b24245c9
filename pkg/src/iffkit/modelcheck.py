"""Evaluate sentences over finite interpretations and run the headline
verifications: theory checking, Cantor's theorem, and the fixed-point
property, all by exhaustive enumeration.

An :class:`Interpretation` binds rendered qualified names (with raw source
text as a fallback) to denotations: finite sets, functions, predicates,
relations, or individual values.  Quantifiers range over the finite
denotation of their binding sort — a set's elements, a predicate's extent,
or the members of a set value bound to a variable, which is what makes
sorts like ``((?G ?a))`` evaluable.

Counterexamples are deterministic: the lexicographically first falsifying
valuation under the canonical value order, descending through leading
universal quantifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from . import names
from .finset import (
    FinFunction,
    FinPredicate,
    FinRelation,
    FinSet,
    Atom,
    FnVal,
    OutOfDomain,
    Pair,
    SetVal,
    Value,
    exponent,
    iter_functions,
    power_set,
    tuple_value,
    value_key,
)
from .syntax import (
    Apply,
    Binding,
    Connective,
    Equation,
    Expr,
    Name,
    Quantifier,
    SourceUnit,
    TupleExpr,
    Variable,
    Token,
    tokenize,
)

DEFAULT_CAP = 2**20

Denotation = Union[FinSet, FinFunction, FinPredicate, FinRelation, Value]
Valuation = dict  # variable name -> Value


class ModelCheckError(Exception):
    """Base class for evaluation errors."""


class UnboundName(ModelCheckError):
    """A name with no binding in the interpretation."""


class UnboundVariable(ModelCheckError):
    """A variable outside any quantifier scope."""


class NotAFunction(ModelCheckError):
    """Application of something that does not denote a function."""


class NotASentence(ModelCheckError):
    """holds() applied to a term."""


class SortNotFinite(ModelCheckError):
    """A binding sort whose denotation is not enumerable."""


class SizeCapExceeded(ModelCheckError):
    """An enumeration larger than the configured cap."""


class NotEndofunction(ModelCheckError):
    """fixed_points on a function whose source and target differ."""


class InterpretationFormatError(ModelCheckError):
    """A malformed interpretation file."""


# ===== PART 1: interpretations =====


@dataclass
class Interpretation:
    """Name bindings for evaluation."""

    bindings: dict = field(default_factory=dict)

    def bind(self, name: str, denotation: Denotation) -> None:
        if name in self.bindings:
            raise InterpretationFormatError(f"{name!r} bound twice")
        self.bindings[name] = denotation

    def lookup(self, text: str, context: Optional[names.Context]) -> Denotation:
        """Find a binding for a written name.

        The name resolved against the namespace context is tried first,
        then the raw source text, so interpretation files may bind either
        fully rendered names or names exactly as written.
        """
        if context is not None:
            try:
                rendered = names.resolve(text, context).render()
            except names.MalformedName:
                rendered = None
            if rendered is not None and rendered in self.bindings:
                return self.bindings[rendered]
        if text in self.bindings:
            return self.bindings[text]
        raise UnboundName(f"no binding for {text!r}")


def as_value(d: Denotation) -> Value:
    """The Value a denotation contributes in term position.

    Sets, predicates, and relations become set values of their elements,
    extents, and extent pairs; a function becomes the set value of its
    graph pairs, so that equality with set-literal encodings stays
    structural.
    """
    if isinstance(d, FinSet):
        return d.as_value()
    if isinstance(d, FinFunction):
        return SetVal(Pair(k, v) for k, v in d.graph)
    if isinstance(d, FinPredicate):
        return SetVal(d.extent)
    if isinstance(d, FinRelation):
        return SetVal(d.extent)
    return d


def _apply_value(head_val, arg: Value) -> Value:
    """Apply a function-like value: an FnVal graph or a set of pairs."""
    if isinstance(head_val, FinFunction):
        return head_val(arg)
    if isinstance(head_val, FnVal):
        return head_val.apply(arg)
    if isinstance(head_val, SetVal):
        mapping = {}
        for p in head_val.members:
            if not isinstance(p, Pair):
                raise NotAFunction("a set value used as a function must hold pairs")
            if p.first in mapping and mapping[p.first] != p.second:
                raise NotAFunction("a set value used as a function repeats a key")
            mapping[p.first] = p.second
        if arg not in mapping:
            raise OutOfDomain(f"{arg!r} is outside the graph's keys")
        return mapping[arg]
    raise NotAFunction(f"{head_val!r} cannot be applied")


# ===== PART 2: evaluation =====


def eval_term(
    t: Expr,
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context] = None,
) -> Value:
    """Evaluate a term to a Value."""
    if isinstance(t, Name):
        return as_value(i.lookup(t.text, context))
    if isinstance(t, Variable):
        if t.name not in v:
            raise UnboundVariable(f"{t.name!r} has no value")
        return v[t.name]
    if isinstance(t, TupleExpr):
        return tuple_value(eval_term(x, i, v, context) for x in t.items)
    if isinstance(t, Apply):
        if len(t.args) != 1:
            raise NotAFunction("term application takes exactly one argument")
        arg = eval_term(t.args[0], i, v, context)
        if isinstance(t.head, Name):
            head: Denotation = i.lookup(t.head.text, context)
        else:
            head = eval_term(t.head, i, v, context)
        return _apply_value(head, arg)
    raise NotASentence(f"not a term: {t!r}")


def _sort_domain(
    sort: Optional[Expr],
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context],
) -> list[Value]:
    """The ordered, finite domain a binding sort ranges over."""
    if sort is None:
        raise SortNotFinite("a binding without a sort has no domain")
    if isinstance(sort, Name):
        d = i.lookup(sort.text, context)
        if isinstance(d, FinSet):
            return d.sorted_elements()
        if isinstance(d, FinPredicate):
            return sorted(d.extent, key=value_key)
        if isinstance(d, SetVal):
            return d.sorted_members()
        raise SortNotFinite(f"{sort.text!r} does not denote an enumerable sort")
    val = eval_term(sort, i, v, context)
    if isinstance(val, SetVal):
        return val.sorted_members()
    raise SortNotFinite("a binding sort must evaluate to a set value")


def holds(
    s: Expr,
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context] = None,
) -> bool:
    """Satisfaction of a sentence under an interpretation and valuation."""
    if isinstance(s, Quantifier):
        return _holds_quantifier(s, list(s.bindings), i, v, context)
    if isinstance(s, Connective):
        if s.op == "not":
            return not holds(s.args[0], i, v, context)
        if s.op == "and":
            return all(holds(a, i, v, context) for a in s.args)
        if s.op == "or":
            return any(holds(a, i, v, context) for a in s.args)
        if s.op == "implies":
            return (not holds(s.args[0], i, v, context)) or holds(
                s.args[1], i, v, context
            )
        if s.op == "iff":
            return holds(s.args[0], i, v, context) == holds(s.args[1], i, v, context)
        raise NotASentence(f"unknown connective {s.op!r}")
    if isinstance(s, Equation):
        return eval_term(s.lhs, i, v, context) == eval_term(s.rhs, i, v, context)
    if isinstance(s, Apply):
        return _holds_atom(s, i, v, context)
    raise NotASentence(f"not a sentence: {s!r}")


def _holds_quantifier(
    q: Quantifier,
    bindings: list[Binding],
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context],
) -> bool:
    if not bindings:
        return holds(q.body, i, v, context)
    b, rest = bindings[0], bindings[1:]
    domain = _sort_domain(b.sort, i, v, context)
    if q.kind == "forall":
        return all(
            _holds_quantifier(q, rest, i, {**v, b.variable: x}, context)
            for x in domain
        )
    return any(
        _holds_quantifier(q, rest, i, {**v, b.variable: x}, context) for x in domain
    )


def _holds_atom(
    s: Apply,
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context],
) -> bool:
    args = [eval_term(a, i, v, context) for a in s.args]
    probe = args[0] if len(args) == 1 else tuple_value(args)
    if isinstance(s.head, Name):
        d = i.lookup(s.head.text, context)
    else:
        d = eval_term(s.head, i, v, context)
    if isinstance(d, FinSet):
        return probe in d.elements
    if isinstance(d, FinPredicate):
        return probe in d.extent
    if isinstance(d, FinRelation):
        if not isinstance(probe, Pair):
            raise NotASentence("a relation atom needs a pair of arguments")
        return probe in d.extent
    if isinstance(d, SetVal):
        return probe in d.members
    raise NotAFunction(f"{d!r} cannot classify elements")


# ===== PART 3: theory checking =====


def check_theory(
    unit: SourceUnit, i: Interpretation
) -> list[tuple[Expr, bool, Optional[Valuation]]]:
    """Evaluate every axiom; false axioms carry a falsifying valuation."""
    report: list[tuple[Expr, bool, Optional[Valuation]]] = []
    for ns in unit.namespaces:
        context = names.namespace_context(ns)
        for ax in ns.axioms:
            try:
                ok = holds(ax, i, {}, context)
            except ModelCheckError as exc:
                raise type(exc)(
                    f"{unit.path}:{ax.line}:{ax.column}: {exc}"
                ) from exc
            if ok:
                report.append((ax, True, None))
            else:
                report.append((ax, False, _first_falsifier(ax, i, {}, context)))
    return report


def _first_falsifier(
    s: Expr,
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context],
) -> Valuation:
    """The lexicographically first falsifying valuation, found by
    descending through leading universal quantifiers in canonical order."""
    if isinstance(s, Quantifier) and s.kind == "forall":
        result = _falsify_bindings(list(s.bindings), s.body, i, v, context)
        if result is not None:
            return result
        return dict(v)  # unreachable when s is actually false
    if holds(s, i, v, context):
        return dict(v)
    return dict(v)


def _falsify_bindings(
    bindings: list[Binding],
    body: Expr,
    i: Interpretation,
    v: Valuation,
    context: Optional[names.Context],
) -> Optional[Valuation]:
    if not bindings:
        if isinstance(body, Quantifier) and body.kind == "forall":
            return _falsify_bindings(list(body.bindings), body.body, i, v, context)
        if holds(body, i, v, context):
            return None
        return dict(v)
    b, rest = bindings[0], bindings[1:]
    for x in _sort_domain(b.sort, i, v, context):
        result = _falsify_bindings(rest, body, i, {**v, b.variable: x}, context)
        if result is not None:
            return result
    return None


# ===== PART 4: fixed points and Cantor =====


def fixed_points(t: FinFunction) -> FinSet:
    """The set of values the endofunction leaves in place."""
    if t.source != t.target:
        raise NotEndofunction("fixed_points needs source = target")
    return FinSet(x for x in t.source.elements if t(x) == x)


def _guard_cap(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise SizeCapExceeded(f"{what} needs {count} candidates, cap is {cap}")


def has_fpp(y: FinSet, cap: int = DEFAULT_CAP) -> bool:
    """True when every endofunction on y has a fixed point."""
    _guard_cap(len(y) ** len(y), cap, "endofunction sweep")
    return all(len(fixed_points(t)) > 0 for t in iter_functions(y, y))


def fixed_point_free_witness(y: FinSet, cap: int = DEFAULT_CAP) -> Optional[FinFunction]:
    """The first endofunction on y with no fixed point, if any."""
    _guard_cap(len(y) ** len(y), cap, "endofunction sweep")
    for t in iter_functions(y, y):
        if len(fixed_points(t)) == 0:
            return t
    return None


def negation_map() -> FinFunction:
    """The truth-value swap on Ω — the canonical fixed-point-free witness."""
    from .finset import FALSE, TRUE, omega

    return FinFunction(omega(), omega(), {TRUE: FALSE, FALSE: TRUE})


def diagonal_set(f: FinFunction) -> SetVal:
    """The diagonal {x : x not in f(x)} for f: X → ℘X; it misses f's image."""
    members = []
    for x in f.source.elements:
        fx = f(x)
        if not isinstance(fx, SetVal):
            raise NotAFunction("diagonal needs f to map into subsets")
        if x not in fx.members:
            members.append(x)
    return SetVal(members)


def verify_cantor(
    x: FinSet, cap: int = DEFAULT_CAP
) -> tuple[bool, Optional[FinFunction]]:
    """No function X → ℘X is surjective; the offending f if one were."""
    px = power_set(x)
    _guard_cap(len(px) ** len(x), cap, "Cantor sweep")
    for f in iter_functions(x, px):
        if f.is_surjective():
            return False, f
    return True, None


def verify_fpp_transfer(x: FinSet, y: FinSet, cap: int = DEFAULT_CAP) -> bool:
    """The fixed-point-property transfer, checked contrapositively.

    If y admits a fixed-point-free endofunction, then no function
    X → Y^X is surjective (equivalently: no φ: X×X → Y has a surjective
    curry).  Vacuously true when y has the fixed-point property.
    """
    if fixed_point_free_witness(y, cap) is None:
        return True
    yx = exponent(x, y)
    _guard_cap(len(yx) ** len(x), cap, "transfer sweep")
    for g in iter_functions(x, yx):
        if g.is_surjective():
            return False
    return True


# ===== PART 5: the interpretation file format =====


class _Reader:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise InterpretationFormatError("unexpected end of interpretation file")
        self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> Token:
        t = self.next()
        if t.kind != kind:
            raise InterpretationFormatError(
                f"{t.line}:{t.column}: expected {what}, found {t.text!r}"
            )
        return t


def _read_value(r: _Reader) -> Value:
    t = r.next()
    if t.kind in ("symbol", "keyword"):
        return Atom(t.text)
    if t.kind == "lbracket":
        items = []
        while r.peek() is not None and r.peek().kind != "rbracket":
            items.append(_read_value(r))
        r.expect("rbracket", "']'")
        if len(items) < 2:
            raise InterpretationFormatError(
                f"{t.line}:{t.column}: a pair needs at least two components"
            )
        return tuple_value(items)
    if t.kind == "lbrace":
        members = []
        while r.peek() is not None and r.peek().kind != "rbrace":
            members.append(_read_value(r))
        r.expect("rbrace", "'}'")
        return SetVal(members)
    raise InterpretationFormatError(
        f"{t.line}:{t.column}: expected a value, found {t.text!r}"
    )


def _read_name(r: _Reader) -> str:
    t = r.next()
    if t.kind not in ("symbol", "keyword"):
        raise InterpretationFormatError(
            f"{t.line}:{t.column}: expected a name, found {t.text!r}"
        )
    return t.text


def _read_value_list(r: _Reader) -> list[Value]:
    r.expect("lparen", "'('")
    values = []
    while r.peek() is not None and r.peek().kind != "rparen":
        values.append(_read_value(r))
    r.expect("rparen", "')'")
    return values


def _read_pair_list(r: _Reader) -> list[tuple[Value, Value]]:
    r.expect("lparen", "'('")
    pairs = []
    while r.peek() is not None and r.peek().kind != "rparen":
        r.expect("lparen", "'(x y)' entry")
        a = _read_value(r)
        b = _read_value(r)
        r.expect("rparen", "')' closing the entry")
        pairs.append((a, b))
    r.expect("rparen", "')'")
    return pairs


def load_interpretation(text: str) -> Interpretation:
    """Parse an interpretation file.

    The format is ``(interpretation ENTRY ...)`` with entries
    ``(set NAME (v ...))``, ``(element NAME SETNAME v)``,
    ``(function NAME (SRC TGT) ((x y) ...))``,
    ``(predicate NAME GENUS (v ...))``, and
    ``(relation NAME (C0 C1) ((x y) ...))``; values are atom symbols,
    bracketed pairs ``[v v]``, or braced sets ``{v ...}``.
    """
    reader = _Reader(tokenize(text, braces=True))
    reader.expect("lparen", "'(interpretation'")
    head = reader.next()
    if head.text != "interpretation":
        raise InterpretationFormatError(
            f"{head.line}:{head.column}: expected 'interpretation'"
        )
    entries = []
    while reader.peek() is not None and reader.peek().kind != "rparen":
        entries.append(_read_entry(reader))
    reader.expect("rparen", "')' closing the interpretation")
    if reader.peek() is not None:
        t = reader.peek()
        raise InterpretationFormatError(
            f"{t.line}:{t.column}: trailing tokens after the interpretation"
        )

    interp = Interpretation()
    # Sets first, so functions/predicates/relations can reference them.
    for kind, payload in entries:
        if kind == "set":
            name, values = payload
            interp.bind(name, FinSet(values))
    for kind, payload in entries:
        if kind == "set":
            continue
        _bind_entry(interp, kind, payload)
    return interp


def _read_entry(r: _Reader):
    r.expect("lparen", "an entry")
    kind_tok = r.next()
    kind = kind_tok.text
    if kind == "set":
        name = _read_name(r)
        values = _read_value_list(r)
        r.expect("rparen", "')'")
        return kind, (name, values)
    if kind == "element":
        name = _read_name(r)
        set_name = _read_name(r)
        value = _read_value(r)
        r.expect("rparen", "')'")
        return kind, (name, set_name, value)
    if kind == "function":
        name = _read_name(r)
        r.expect("lparen", "'(SRC TGT)'")
        src = _read_name(r)
        tgt = _read_name(r)
        r.expect("rparen", "')'")
        pairs = _read_pair_list(r)
        r.expect("rparen", "')'")
        return kind, (name, src, tgt, pairs)
    if kind == "predicate":
        name = _read_name(r)
        genus = _read_name(r)
        values = _read_value_list(r)
        r.expect("rparen", "')'")
        return kind, (name, genus, values)
    if kind == "relation":
        name = _read_name(r)
        r.expect("lparen", "'(C0 C1)'")
        c0 = _read_name(r)
        c1 = _read_name(r)
        r.expect("rparen", "')'")
        pairs = _read_pair_list(r)
        r.expect("rparen", "')'")
        return kind, (name, c0, c1, pairs)
    raise InterpretationFormatError(
        f"{kind_tok.line}:{kind_tok.column}: unknown entry head {kind!r}"
    )


def _get_set(interp: Interpretation, name: str, what: str) -> FinSet:
    if name not in interp.bindings or not isinstance(interp.bindings[name], FinSet):
        raise InterpretationFormatError(f"{what} {name!r} is not a bound set")
    return interp.bindings[name]


def _bind_entry(interp: Interpretation, kind: str, payload) -> None:
    try:
        if kind == "element":
            name, set_name, value = payload
            parent = _get_set(interp, set_name, "element's set")
            if value not in parent.elements:
                raise InterpretationFormatError(
                    f"element {name!r} is not in set {set_name!r}"
                )
            interp.bind(name, value)
        elif kind == "function":
            name, src, tgt, pairs = payload
            interp.bind(
                name,
                FinFunction(
                    _get_set(interp, src, "function source"),
                    _get_set(interp, tgt, "function target"),
                    pairs,
                ),
            )
        elif kind == "predicate":
            name, genus, values = payload
            interp.bind(
                name, FinPredicate(_get_set(interp, genus, "predicate genus"), values)
            )
        elif kind == "relation":
            name, c0, c1, pairs = payload
            interp.bind(
                name,
                FinRelation(
                    _get_set(interp, c0, "relation component"),
                    _get_set(interp, c1, "relation component"),
                    [Pair(a, b) for a, b in pairs],
                ),
            )
    except InterpretationFormatError:
        raise
    except Exception as exc:  # kernel validation errors carry the detail
        raise InterpretationFormatError(f"invalid {kind} entry: {exc}") from exc


# ===== PART 6: rendering values for reports =====


def render_value(v: Value) -> str:
    """A stable, human-readable rendering of a value."""
    if isinstance(v, Atom):
        return v.label
    if isinstance(v, Pair):
        return f"[{render_value(v.first)} {render_value(v.second)}]"
    if isinstance(v, SetVal):
        return "{" + " ".join(render_value(m) for m in v.sorted_members()) + "}"
    if isinstance(v, FnVal):
        return (
            "(fn "
            + " ".join(f"[{render_value(k)} {render_value(w)}]" for k, w in v.graph)
            + ")"
        )
    return repr(v)


def render_valuation(v: Valuation) -> str:
    return ", ".join(f"{name} = {render_value(val)}" for name, val in sorted(v.items()))
