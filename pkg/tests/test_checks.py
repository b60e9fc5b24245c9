"""Form classification, scoping, stratification, and warrant tests."""

from pathlib import Path

import pytest
from hypothesis import given

from iffkit.checks import (
    ERROR,
    INFO,
    WARNING,
    Diagnostic,
    FormKind,
    atomicity_profile,
    check_restricted_quantifiers,
    check_stratification,
    check_unit_quantifiers,
    check_units,
    classify_form,
    has_errors,
    render_diagnostic,
    sort_diagnostics,
    warrant_report,
)
from iffkit.names import build_symbol_table
from iffkit.syntax import parse_text, parse_unit

from test_syntax import _exprs

DATA = Path(__file__).parent / "data"


def load(name):
    return parse_unit((DATA / name).read_text(), f"tests/data/{name}")


# ===== PART 1: form classification =====


def test_classify_frozen_table():
    cases = {
        "(set set)": FormKind.DECLARATION,
        "((#n+1).set:set set)": FormKind.DECLARATION,
        "(= (#n.ftn:source f) A)": FormKind.EQUATION,
        "(= ((#n+1).ftn:source source) function)": FormKind.EQUATION,
        "((#n+2).set:subset set (#n+1).set:set)": FormKind.RELATIONAL,
        "(r [a b])": FormKind.RELATIONAL,
        "(not (set set))": FormKind.NEGATED_ATOMIC,
        "(not (= (f a) b))": FormKind.NEGATED_ATOMIC,
        "(forall ((set ?X)) (?X ?X))": FormKind.FIRST_ORDER,
        "(and (A a) (B b))": FormKind.FIRST_ORDER,
        "(X ?x)": FormKind.FIRST_ORDER,
        "(not (not (A a)))": FormKind.FIRST_ORDER,
    }
    for src, kind in cases.items():
        assert classify_form(parse_text(src)).kind is kind, src


def test_classify_illformed_carries_reason():
    fc = classify_form(parse_text("o.i:a"))
    assert fc.kind is FormKind.ILLFORMED and fc.reason


def test_atomic_property():
    assert classify_form(parse_text("(set set)")).atomic
    assert classify_form(parse_text("(not (set set))")).atomic
    assert not classify_form(parse_text("(and (A a) (B b))")).atomic


def test_equation_requires_unary_ground_terms():
    # a two-argument application is not a unary term chain
    assert classify_form(parse_text("(= (f a b) c)")).kind is FormKind.ILLFORMED
    # a variable makes it first order instead
    assert classify_form(parse_text("(= (f ?x) c)")).kind is FormKind.FIRST_ORDER


@given(_exprs())
def test_classify_total(e):
    # classification never raises and always lands on a definite kind
    fc = classify_form(e)
    assert isinstance(fc.kind, FormKind)


def test_atomicity_profile_of_corpus():
    profiles = atomicity_profile(load("example_code.iff"))
    atomic = {name: p.atomic for name, p in profiles.items()}
    assert atomic == {
        "iff": False,
        "type.ftn": False,
        "type.pred": False,
        "#n.set": True,
        "#n.ftn": True,
        "abc": True,
    }
    assert profiles["#n.set"].counts == {
        FormKind.DECLARATION: 1,
        FormKind.RELATIONAL: 1,
        FormKind.NEGATED_ATOMIC: 1,
    }
    assert profiles["#n.ftn"].counts == {
        FormKind.DECLARATION: 3,
        FormKind.RELATIONAL: 3,
        FormKind.EQUATION: 4,
    }
    assert profiles["abc"].counts == {
        FormKind.DECLARATION: 3,
        FormKind.EQUATION: 2,
    }


# ===== PART 2: restricted quantification =====


def test_free_variable_reported_with_position():
    diags = check_restricted_quantifiers(parse_text("(X ?x)"), "f.iff", "ns")
    assert len(diags) == 1
    d = diags[0]
    assert (d.severity, d.code) == (ERROR, "FREE-VARIABLE")
    assert (d.file, d.line, d.column, d.namespace) == ("f.iff", 1, 4, "ns")


def test_sequential_binding_scope():
    # ?X is usable as the sort of a *later* binding in the same list
    ok = parse_text("(forall ((set ?X) (?X ?x)) (?X ?x))")
    assert check_restricted_quantifiers(ok) == []
    # but not of an earlier one
    bad = parse_text("(forall ((?X ?x) (set ?X)) (?X ?x))")
    codes = [d.code for d in check_restricted_quantifiers(bad)]
    assert "USE-BEFORE-BINDING" in codes


def test_shadowing_and_nested_scopes():
    e = parse_text("(forall ((set ?X)) (exists ((?X ?x)) (?X ?x)))")
    assert check_restricted_quantifiers(e) == []
    leaked = parse_text("(and (forall ((set ?X)) (?X ?X)) (set ?X))")
    assert any(d.code == "FREE-VARIABLE" for d in check_restricted_quantifiers(leaked))


def test_unit_quantifiers_on_corpus_clean():
    assert check_unit_quantifiers(load("example_code.iff")) == []
    assert check_unit_quantifiers(load("group.iff")) == []


# ===== PART 3: stratification =====


def test_downref_is_an_error():
    unit = parse_unit(
        "(namespace low (level 1) (#2.low:k thing))\n"
        "(namespace high (level 3) (#3.high:k #1.low:thing))",
        "d.iff",
    )
    diags = check_stratification(unit)
    down = [d for d in diags if d.code == "LEVEL-DOWNREF"]
    assert len(down) == 1
    assert down[0].severity == ERROR
    assert down[0].namespace == "high"


def test_same_level_classifier_warns():
    unit = parse_unit("(namespace a (level 1) (peer fellow))", "s.iff")
    codes = [(d.severity, d.code) for d in check_stratification(unit)]
    assert (WARNING, "SAME-LEVEL-CLASSIFIER") in codes


def test_incomparable_levels_warn():
    unit = parse_unit("(namespace a (level 2) (k #n.set:set))", "i.iff")
    codes = [(d.severity, d.code) for d in check_stratification(unit)]
    assert (WARNING, "LEVEL-INCOMPARABLE") in codes


def test_corpus_stratification_clean():
    for name in ("example_code.iff", "group.iff", "natural_part.iff"):
        diags = check_stratification(load(name))
        assert not has_errors(diags), name


# ===== PART 4: warrant =====


def test_warrant_report_on_corpus():
    units = [load("example_code.iff")]
    table = build_symbol_table(*units)
    diags = warrant_report(units, table)
    unwarranted = [d for d in diags if d.code == "UNWARRANTED-TERM"]
    assert [(d.severity, d.namespace) for d in unwarranted] == [
        (WARNING, "type.pred")
    ]
    assert "membership" in unwarranted[0].message
    # the generic chains warrant themselves by their lower-level references
    ok_messages = [d.message for d in diags if d.code == "WARRANT-OK"]
    assert any("'#n.set:set'" in m for m in ok_messages)
    assert any("exempt" in m for m in ok_messages)


def test_peripheral_reference_warrants():
    # belonging is defined in type.ftn and used from the peripheral type.pred
    units = [load("example_code.iff")]
    table = build_symbol_table(*units)
    diags = warrant_report(units, table)
    belonging = [d for d in diags if "belonging" in d.message]
    assert belonging and all(d.code == "WARRANT-OK" for d in belonging)


# ===== PART 5: the full pipeline =====


def test_check_units_corpus_has_no_errors():
    diags = check_units([load("example_code.iff"), load("group.iff")])
    assert not has_errors(diags)
    codes = {d.code for d in diags if d.severity == WARNING}
    assert codes == {"UNWARRANTED-TERM", "NONATOMIC"}


def test_strict_atomic_elevates_natural_part_negation():
    unit = load("natural_part.iff")
    relaxed = check_units([unit])
    assert not has_errors(relaxed)
    strict = check_units([unit], strict_atomic=True)
    errors = [d for d in strict if d.severity == ERROR]
    assert [d.code for d in errors] == ["NONATOMIC"]
    assert errors[0].line == 7


def test_metashell_is_exempt_from_atomicity():
    unit = load("example_code.iff")
    strict = check_units([unit], strict_atomic=True)
    nonatomic = [d for d in strict if d.code == "NONATOMIC"]
    # the metashell's first-order axioms are exempt; the only finding is
    # the natural part's single negated-atomic axiom
    assert [(d.severity, d.namespace) for d in nonatomic] == [(ERROR, "#n.set")]


def test_illformed_axiom_warns():
    unit = parse_unit("(namespace a (level 1) (= (f a b) c))", "w.iff")
    diags = check_units([unit], warrant=False)
    assert any(d.code == "ILLFORMED-AXIOM" and d.severity == WARNING for d in diags)


# ===== PART 6: rendering and ordering =====


def test_render_diagnostic_format():
    d = Diagnostic(ERROR, "LEVEL-DOWNREF", "msg here", "a.iff", 3, 7, "ns")
    assert render_diagnostic(d) == "ERROR LEVEL-DOWNREF a.iff:3:7 [ns] msg here"
    bare = Diagnostic(INFO, "WARRANT-OK", "m", "a.iff", 1, 1, "")
    assert "[-]" in render_diagnostic(bare)


def test_sort_diagnostics_order():
    d1 = Diagnostic(ERROR, "B-CODE", "m", "b.iff", 1, 1, "")
    d2 = Diagnostic(ERROR, "A-CODE", "m", "a.iff", 9, 9, "")
    d3 = Diagnostic(ERROR, "A-CODE", "m", "b.iff", 1, 1, "")
    assert sort_diagnostics([d1, d2, d3]) == [d2, d3, d1]
