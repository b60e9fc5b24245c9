"""Diagnostics, axiom-form classification, and the static checks.

Three checks run over parsed source units:

* restricted quantification -- every binding is sorted, every variable is
  bound before use;
* stratification -- an axiom at level n may use terminology of level m
  only for n <= m (references to strictly lower levels are errors);
* conceptual warrant -- every defined term should be referenced either
  from a strictly lower level or from a peripheral namespace (one outside
  the defining namespace's subtree).  Object-level definitions are exempt.

Axioms are also classified by form: declarations, equations, and
relational expressions are the atomic forms; a negated atomic form and
full first-order sentences are tracked separately, and anything else is
ill-formed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from enum import Enum, auto
from typing import Iterable, Optional

from . import names
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
)

# ===== PART 1: diagnostics =====

ERROR = "error"
WARNING = "warning"
INFO = "info"

_SEVERITY_ORDER = {ERROR: 0, WARNING: 1, INFO: 2}


@dataclass(frozen=True)
class Diagnostic:
    """One finding with a severity, a stable code, and a source site."""

    severity: str
    code: str
    message: str
    file: str = ""
    line: int = 0
    column: int = 0
    namespace: str = ""


def render_diagnostic(d: Diagnostic) -> str:
    """``SEVERITY CODE file:line:col [namespace] message``."""
    ns = d.namespace if d.namespace else "-"
    return (
        f"{d.severity.upper()} {d.code} {d.file}:{d.line}:{d.column} "
        f"[{ns}] {d.message}"
    )


def sort_diagnostics(diags: Iterable[Diagnostic]) -> list[Diagnostic]:
    """Deterministic report order: by file, line, column, then code."""
    return sorted(diags, key=lambda d: (d.file, d.line, d.column, d.code))


def has_errors(diags: Iterable[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diags)


# ===== PART 2: form classification =====


class FormKind(Enum):
    DECLARATION = auto()
    EQUATION = auto()
    RELATIONAL = auto()
    NEGATED_ATOMIC = auto()
    FIRST_ORDER = auto()
    ILLFORMED = auto()


ATOMIC_KINDS = frozenset(
    {FormKind.DECLARATION, FormKind.EQUATION, FormKind.RELATIONAL}
)


@dataclass(frozen=True)
class FormClass:
    """Classification of one axiom; ``reason`` is set only for ILLFORMED."""

    kind: FormKind
    reason: str = ""

    @property
    def atomic(self) -> bool:
        return self.kind in ATOMIC_KINDS or self.kind is FormKind.NEGATED_ATOMIC


def _is_ground_term(t: Expr) -> bool:
    """Terms built from names, tuples, and applications, with no variables."""
    if isinstance(t, Name):
        return True
    if isinstance(t, TupleExpr):
        return all(_is_ground_term(x) for x in t.items)
    if isinstance(t, Apply):
        return _is_ground_term(t.head) and all(_is_ground_term(a) for a in t.args)
    return False


def _is_unary_term(t: Expr) -> bool:
    """Ground terms whose applications all take exactly one argument."""
    if isinstance(t, Name):
        return True
    if isinstance(t, TupleExpr):
        return all(_is_unary_term(x) for x in t.items)
    if isinstance(t, Apply):
        return (
            len(t.args) == 1
            and _is_unary_term(t.head)
            and _is_unary_term(t.args[0])
        )
    return False


def _atomic_kind(e: Expr) -> Optional[FormKind]:
    """The atomic form of a ground sentence, or None."""
    if isinstance(e, Equation):
        if _is_unary_term(e.lhs) and _is_unary_term(e.rhs):
            return FormKind.EQUATION
        return None
    if isinstance(e, Apply) and isinstance(e.head, Name):
        if not all(_is_ground_term(a) for a in e.args):
            return None
        if len(e.args) == 1 and not isinstance(e.args[0], TupleExpr):
            return FormKind.DECLARATION
        return FormKind.RELATIONAL
    return None


def _has_logic_or_variable(e: Expr) -> bool:
    from .syntax import walk

    return any(
        isinstance(x, (Variable, Connective, Quantifier)) for x in walk(e)
    )


def classify_form(e: Expr) -> FormClass:
    """Classify one axiom by its outermost shape.

    Quantified or connective sentences are first order, except that a
    single negation wrapped around an atomic form is tracked as the
    negated-atomic class.  Ground sentences that fit no atomic form and
    contain no logical material are ill-formed.
    """
    if isinstance(e, Quantifier):
        return FormClass(FormKind.FIRST_ORDER)
    if isinstance(e, Connective):
        if e.op == "not" and len(e.args) == 1:
            inner = _atomic_kind(e.args[0])
            if inner is not None:
                return FormClass(FormKind.NEGATED_ATOMIC)
        return FormClass(FormKind.FIRST_ORDER)
    kind = _atomic_kind(e)
    if kind is not None:
        return FormClass(kind)
    if _has_logic_or_variable(e):
        return FormClass(FormKind.FIRST_ORDER)
    if isinstance(e, Name):
        return FormClass(FormKind.ILLFORMED, "a bare name is not a sentence")
    if isinstance(e, TupleExpr):
        return FormClass(FormKind.ILLFORMED, "a bare tuple is not a sentence")
    if isinstance(e, Equation):
        return FormClass(
            FormKind.ILLFORMED,
            "equation terms must be names or unary applications",
        )
    if isinstance(e, Apply) and not isinstance(e.head, Name):
        return FormClass(FormKind.ILLFORMED, "a sentence head must be a name")
    return FormClass(FormKind.ILLFORMED, "not a sentence")


@dataclass(frozen=True)
class NamespaceProfile:
    """Per-namespace census of axiom forms."""

    namespace: str
    counts: dict  # FormKind -> int
    atomic: bool  # every axiom in an atomic form (negation included)


def atomicity_profile(unit: SourceUnit) -> dict[str, NamespaceProfile]:
    """Classify every axiom of every namespace and judge atomicity."""
    profiles: dict[str, NamespaceProfile] = {}
    for ns in unit.namespaces:
        counts: Counter = Counter()
        atomic = True
        for ax in ns.axioms:
            fc = classify_form(ax)
            counts[fc.kind] += 1
            if not fc.atomic:
                atomic = False
        profiles[ns.name] = NamespaceProfile(ns.name, dict(counts), atomic)
    return profiles


# ===== PART 3: restricted quantification =====


def check_restricted_quantifiers(
    e: Expr, file: str = "", namespace: str = ""
) -> list[Diagnostic]:
    """Report unsorted bindings, free variables, and use-before-binding.

    Binding lists scope sequentially: the sort of the i-th binding may use
    variables bound by earlier bindings of the same list but not later
    ones.
    """
    diags: list[Diagnostic] = []

    def visit(x: Expr, scope: tuple[str, ...]) -> None:
        if isinstance(x, Variable):
            if x.name not in scope:
                diags.append(
                    Diagnostic(
                        ERROR,
                        "FREE-VARIABLE",
                        f"variable {x.name!r} is not bound",
                        file,
                        x.line,
                        x.column,
                        namespace,
                    )
                )
            return
        if isinstance(x, Quantifier):
            inner = scope
            later = [b.variable for b in x.bindings]
            for b in x.bindings:
                later.pop(0)
                if b.sort is None:
                    diags.append(
                        Diagnostic(
                            ERROR,
                            "UNSORTED-BINDING",
                            f"binding for {b.variable!r} has no sort",
                            file,
                            b.line,
                            b.column,
                            namespace,
                        )
                    )
                else:
                    visit_sort(b.sort, inner, tuple(later))
                inner = inner + (b.variable,)
            visit(x.body, inner)
            return
        if isinstance(x, TupleExpr):
            for item in x.items:
                visit(item, scope)
        elif isinstance(x, Apply):
            visit(x.head, scope)
            for a in x.args:
                visit(a, scope)
        elif isinstance(x, Equation):
            visit(x.lhs, scope)
            visit(x.rhs, scope)
        elif isinstance(x, Connective):
            for a in x.args:
                visit(a, scope)

    def visit_sort(x: Expr, scope: tuple[str, ...], later: tuple[str, ...]) -> None:
        if isinstance(x, Variable):
            if x.name in scope:
                return
            if x.name in later:
                diags.append(
                    Diagnostic(
                        ERROR,
                        "USE-BEFORE-BINDING",
                        f"variable {x.name!r} used in a sort before its binding",
                        file,
                        x.line,
                        x.column,
                        namespace,
                    )
                )
            else:
                diags.append(
                    Diagnostic(
                        ERROR,
                        "FREE-VARIABLE",
                        f"variable {x.name!r} is not bound",
                        file,
                        x.line,
                        x.column,
                        namespace,
                    )
                )
            return
        if isinstance(x, Quantifier):
            visit(x, scope)
            return
        if isinstance(x, TupleExpr):
            for item in x.items:
                visit_sort(item, scope, later)
        elif isinstance(x, Apply):
            visit_sort(x.head, scope, later)
            for a in x.args:
                visit_sort(a, scope, later)
        elif isinstance(x, Equation):
            visit_sort(x.lhs, scope, later)
            visit_sort(x.rhs, scope, later)
        elif isinstance(x, Connective):
            for a in x.args:
                visit_sort(a, scope, later)

    visit(e, ())
    return diags


def check_unit_quantifiers(unit: SourceUnit) -> list[Diagnostic]:
    """Run the restricted-quantification check over a whole unit."""
    diags: list[Diagnostic] = []
    for ns in unit.namespaces:
        for ax in ns.axioms:
            diags.extend(check_restricted_quantifiers(ax, unit.path, ns.name))
    return sort_diagnostics(diags)


# ===== PART 4: stratification =====


def check_stratification(
    unit: SourceUnit, table: Optional[names.SymbolTable] = None
) -> list[Diagnostic]:
    """Report references to strictly lower levels and related findings.

    * LEVEL-DOWNREF (error): an axiom references a name whose level is
      strictly below its namespace's level.
    * SAME-LEVEL-CLASSIFIER (warning): a declaration's classifier head has
      the same level as its subject.
    * LEVEL-INCOMPARABLE (warning): a concrete finite level meets a
      generic one, so the order is undecided.
    """
    diags: list[Diagnostic] = []
    for ns in unit.namespaces:
        ctx = names.namespace_context(ns)
        for ax in ns.axioms:
            for name, _role in names._term_positions(ax):
                try:
                    q = names.resolve(name.text, ctx)
                except names.MalformedName as exc:
                    diags.append(
                        Diagnostic(
                            ERROR,
                            "MALFORMED-NAME",
                            str(exc),
                            unit.path,
                            name.line,
                            name.column,
                            ns.name,
                        )
                    )
                    continue
                if q.level is None:
                    continue
                try:
                    if names.level_lt(q.level, ctx.level):
                        diags.append(
                            Diagnostic(
                                ERROR,
                                "LEVEL-DOWNREF",
                                f"{q.render()!r} is below level "
                                f"{ctx.level.prefix()} of namespace {ns.name!r}",
                                unit.path,
                                name.line,
                                name.column,
                                ns.name,
                            )
                        )
                except names.IncomparableLevels:
                    diags.append(
                        Diagnostic(
                            WARNING,
                            "LEVEL-INCOMPARABLE",
                            f"cannot order level of {q.render()!r} against "
                            f"level {ctx.level.prefix()} of namespace {ns.name!r}",
                            unit.path,
                            name.line,
                            name.column,
                            ns.name,
                        )
                    )
            decl = names._declaration_shape(ax)
            if decl is not None:
                classifier, _subject = decl
                try:
                    cq = names.resolve(classifier.text, ctx)
                except names.MalformedName:
                    continue
                if cq.level == ctx.level:
                    diags.append(
                        Diagnostic(
                            WARNING,
                            "SAME-LEVEL-CLASSIFIER",
                            f"classifier {cq.render()!r} has the same level as "
                            f"its subject",
                            unit.path,
                            classifier.line,
                            classifier.column,
                            ns.name,
                        )
                    )
    return sort_diagnostics(diags)


# ===== PART 5: conceptual warrant =====


def _in_subtree(site_ns: str, defining_ns: str) -> bool:
    return site_ns == defining_ns or site_ns.startswith(defining_ns + ".")


def warrant_report(
    units: Iterable[SourceUnit], table: names.SymbolTable
) -> list[Diagnostic]:
    """Judge every defined term: warranted or not.

    A defined term is warranted when some reference to it either sits at a
    level strictly below the level the reference was written at, or sits in
    a namespace outside the defining namespace's subtree.  Object-level
    definitions are exempt and always count as warranted.
    """
    units = list(units)
    paths = {ns.name: unit.path for unit in units for ns in unit.namespaces}
    diags: list[Diagnostic] = []
    for entry in table.defined_entries():
        site0 = entry.definitions[0]
        file = paths.get(entry.namespace, "")
        if entry.level == names.OBJ or site0.level == names.OBJ:
            diags.append(
                Diagnostic(
                    INFO,
                    "WARRANT-OK",
                    f"{entry.name!r} is object-level and exempt from warrant",
                    file,
                    site0.line,
                    site0.column,
                    entry.namespace,
                )
            )
            continue
        witness: Optional[str] = None
        for ref in entry.references:
            if not _in_subtree(ref.site.namespace, entry.namespace):
                witness = (
                    f"referenced from peripheral namespace {ref.site.namespace!r}"
                )
                break
            try:
                if names.level_lt(ref.site.level, ref.written_level):
                    witness = (
                        f"referenced as {_written(entry, ref)!r} from the "
                        f"strictly lower level {ref.site.level.prefix()}"
                    )
                    break
            except names.IncomparableLevels:
                continue
        if witness is not None:
            diags.append(
                Diagnostic(
                    INFO,
                    "WARRANT-OK",
                    f"{entry.name!r} is warranted: {witness}",
                    file,
                    site0.line,
                    site0.column,
                    entry.namespace,
                )
            )
        else:
            diags.append(
                Diagnostic(
                    WARNING,
                    "UNWARRANTED-TERM",
                    f"{entry.name!r} has no reference from a lower level or a "
                    f"peripheral namespace",
                    file,
                    site0.line,
                    site0.column,
                    entry.namespace,
                )
            )
    return sort_diagnostics(diags)


def _written(entry: names.SymbolEntry, ref: names.Reference) -> str:
    q = names.parse_name(entry.name)
    return names.QualifiedName(ref.written_level, q.path, q.base).render()


# ===== PART 6: the full pipeline =====


def check_units(
    units: Iterable[SourceUnit],
    *,
    warrant: bool = True,
    strict_atomic: bool = False,
) -> list[Diagnostic]:
    """Run every static check over the units and merge the reports.

    Axioms that classify as ill-formed are reported as warnings
    (ILLFORMED-AXIOM).  With ``strict_atomic``, namespaces at object,
    finite, or generic levels must be strictly atomic: first-order or
    negated-atomic axioms there are errors (NONATOMIC); without it they
    are warnings on first-order axioms only at those levels.
    """
    units = list(units)
    diags: list[Diagnostic] = []
    table = names.build_symbol_table(*units)
    for unit in units:
        diags.extend(check_unit_quantifiers(unit))
        diags.extend(check_stratification(unit, table))
        for ns in unit.namespaces:
            level = names.level_from_decl(ns.level_text)
            natural = not level.is_metashell()
            for ax in ns.axioms:
                fc = classify_form(ax)
                if fc.kind is FormKind.ILLFORMED:
                    diags.append(
                        Diagnostic(
                            WARNING,
                            "ILLFORMED-AXIOM",
                            f"axiom fits no form: {fc.reason}",
                            unit.path,
                            ax.line,
                            ax.column,
                            ns.name,
                        )
                    )
                elif natural and not fc.atomic:
                    diags.append(
                        Diagnostic(
                            ERROR if strict_atomic else WARNING,
                            "NONATOMIC",
                            "first-order axiom in a namespace below the "
                            "metashell",
                            unit.path,
                            ax.line,
                            ax.column,
                            ns.name,
                        )
                    )
                elif (
                    natural
                    and strict_atomic
                    and fc.kind is FormKind.NEGATED_ATOMIC
                ):
                    diags.append(
                        Diagnostic(
                            ERROR,
                            "NONATOMIC",
                            "negated atomic axiom in a namespace below the "
                            "metashell",
                            unit.path,
                            ax.line,
                            ax.column,
                            ns.name,
                        )
                    )
    if warrant:
        diags.extend(warrant_report(units, table))
    return sort_diagnostics(diags)
