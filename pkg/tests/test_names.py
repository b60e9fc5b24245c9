"""Level order, qualified-name resolution, and symbol-table tests."""

import pytest
from hypothesis import given, strategies as st

from iffkit.names import (
    IFF,
    META,
    OBJ,
    TYPE,
    Context,
    DuplicateDefinition,
    IncomparableLevels,
    MalformedName,
    NotGeneric,
    QualifiedName,
    build_symbol_table,
    canonical_key,
    comparable,
    finite,
    generic,
    instantiate,
    level_from_decl,
    level_leq,
    level_lt,
    namespace_context,
    parse_name,
    render,
    resolve,
)
from iffkit.syntax import parse_unit

# ===== PART 1: the level order =====


def test_ground_chain():
    # obj < finite(n) < meta < type < iff, with finite levels ordered by n
    chain = [OBJ, finite(1), finite(2), META, TYPE, IFF]
    for i, a in enumerate(chain):
        for j, b in enumerate(chain):
            assert level_leq(a, b) == (i <= j)


def test_finite_zero_is_object():
    assert finite(0) == OBJ
    assert level_from_decl("0") == OBJ
    assert level_from_decl("2") == finite(2)


def test_generic_comparisons():
    assert level_lt(generic(0), generic(1))
    assert level_leq(generic(2), generic(2))
    assert level_lt(OBJ, generic(0))  # above the object level
    assert level_lt(generic(5), META)  # below the metashell
    assert level_lt(generic(5), IFF)
    assert not level_leq(META, generic(0))


def test_generic_vs_concrete_finite_is_incomparable():
    with pytest.raises(IncomparableLevels):
        level_leq(generic(0), finite(3))
    assert not comparable(finite(1), generic(2))
    assert comparable(OBJ, generic(0))


def test_level_prefixes():
    assert OBJ.prefix() == "#0"
    assert finite(3).prefix() == "#3"
    assert generic(0).prefix() == "#n"
    assert generic(2).prefix() == "#n+2"
    assert META.prefix() == "meta"


_LEVELS = st.sampled_from(
    [OBJ, finite(1), finite(2), finite(3), generic(0), generic(1), META, TYPE, IFF]
)


@given(_LEVELS)
def test_leq_reflexive(a):
    assert level_leq(a, a)


@given(_LEVELS, _LEVELS, _LEVELS)
def test_leq_transitive_where_defined(a, b, c):
    try:
        if level_leq(a, b) and level_leq(b, c):
            assert level_leq(a, c)
    except IncomparableLevels:
        pass


@given(_LEVELS, _LEVELS)
def test_leq_antisymmetric_where_defined(a, b):
    try:
        if level_leq(a, b) and level_leq(b, a):
            assert a == b
    except IncomparableLevels:
        pass


# ===== PART 2: qualified names =====


def test_parse_name_frozen_cases():
    assert parse_name("#0.abc:A") == QualifiedName(OBJ, ("abc",), "A")
    assert parse_name("#n+1.set:set") == QualifiedName(generic(1), ("set",), "set")
    assert parse_name("type.ftn:belonging") == QualifiedName(TYPE, ("ftn",), "belonging")
    assert parse_name("iff:set") == QualifiedName(IFF, (), "set")
    assert parse_name("o.i:a") == QualifiedName(None, ("o", "i"), "a")
    assert parse_name("set") == QualifiedName(None, (), "set")


def test_parse_name_errors():
    with pytest.raises(MalformedName):
        parse_name("a:b:c")
    with pytest.raises(MalformedName):
        parse_name("o.i")  # dotted context without a base
    with pytest.raises(MalformedName):
        parse_name(":x")
    with pytest.raises(MalformedName):
        parse_name("a.:x")


@given(
    st.sampled_from([None, OBJ, finite(2), generic(0), generic(3), META, TYPE, IFF]),
    st.lists(st.sampled_from(["set", "ftn", "abc", "o"]), max_size=2),
    st.sampled_from(["a", "set", "source", "A"]),
)
def test_render_parse_inverse(level, path, base):
    q = QualifiedName(level, tuple(path), base)
    if level is None and path:
        return  # unleveled dotted names render ambiguously; resolution adds a level
    assert parse_name(render(q)) == q


def test_instantiate_generic():
    q = parse_name("#n+1.set:set")
    assert render(instantiate(q, 2)) == "#3.set:set"
    with pytest.raises(NotGeneric):
        instantiate(parse_name("#2.set:set"), 1)


def test_canonical_key_normalizes_offsets():
    assert canonical_key(parse_name("#n+2.set:set")) == "#n.set:set"
    assert canonical_key(parse_name("#n.set:set")) == "#n.set:set"
    assert canonical_key(parse_name("#0.abc:A")) == "#0.abc:A"


# ===== PART 3: contexts and resolution =====


def test_namespace_context_drops_level_prefix():
    unit = parse_unit(
        "(namespace #n.set (level generic) (set set))\n"
        "(namespace type.ftn (level type) (set set))\n"
        "(namespace abc (level 0) (A a))"
    )
    contexts = [namespace_context(ns) for ns in unit.namespaces]
    assert contexts[0] == Context(("set",), generic(0))
    assert contexts[1] == Context(("ftn",), TYPE)
    assert contexts[2] == Context(("abc",), OBJ)


def test_resolve_frozen_cases():
    ctx = Context(("set",), generic(0))
    assert render(resolve("set", ctx)) == "#n.set:set"
    assert render(resolve("#n+1.set:set", ctx)) == "#n+1.set:set"
    assert render(resolve("ftn:source", ctx)) == "#n.ftn:source"
    obj_ctx = Context(("abc",), OBJ)
    assert render(resolve("A", obj_ctx)) == "#0.abc:A"


# ===== PART 4: the symbol table =====

CORPUS = """\
(namespace #n.set (level generic)
  ((#n+1).set:set set)
  (set set))

(namespace #n.ftn (level generic)
  ((#n+1).set:set function)
  ((#n+1).ftn:function source)
  (forall ((function ?f)) (set:set (source ?f))))

(namespace other (level 3)
  (thing #n.ftn:source))
"""


def test_symbol_table_definitions_and_references():
    table = build_symbol_table(parse_unit(CORPUS, "c.iff"))
    set_entry = table.get("#n.set:set")
    assert set_entry is not None and set_entry.defined
    assert set_entry.namespace == "#n.set"
    # referenced as the classifier of `function`, as `(#n+1).set:set`'s
    # subject, and in the quantifier sort position
    assert len(set_entry.references) >= 2
    src = table.get("#n.ftn:source")
    assert src is not None and src.defined
    assert any(r.site.namespace == "other" for r in src.references)
    assert src.kind == "function"


def test_symbol_table_kind_roles():
    unit = parse_unit(
        "(namespace t (level 2)\n"
        "  (kind one)\n"
        "  (rel one two)\n"
        "  (= (fn one) two))",
        "k.iff",
    )
    table = build_symbol_table(unit)
    assert table.get("#2.t:kind").kind == "set"  # unary head
    assert table.get("#2.t:rel").kind == "relation"  # n-ary head
    assert table.get("#2.t:fn").kind == "function"  # term head


def test_duplicate_definition_across_namespaces():
    text = (
        "(namespace a (level 1) (#3.x:k set:thing))\n"
        "(namespace b (level 1) (#3.x:k set:thing))"
    )
    # both declarations carry a strictly higher classifier, so both define
    # the one canonical name #1.set:thing — in two different namespaces
    unit = parse_unit(text, "dup.iff")
    with pytest.raises(DuplicateDefinition):
        build_symbol_table(unit)


def test_declaration_needs_strictly_higher_classifier():
    # same-level classifier: subject is referenced, not defined
    unit = parse_unit("(namespace a (level 1) (peer fellow))", "p.iff")
    table = build_symbol_table(unit)
    fellow = table.get("#1.a:fellow")
    assert fellow is not None and not fellow.defined
