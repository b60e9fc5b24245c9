"""Acceptance suite: one test per shipping criterion, one verdict line each."""

import itertools
from pathlib import Path

from iffkit.checks import (
    ERROR,
    ATOMIC_KINDS,
    FormKind,
    atomicity_profile,
    check_units,
)
from iffkit.finset import (
    Atom,
    FinCategory,
    FinFunction,
    FinRelation,
    FinSet,
    Pair,
    SetVal,
    canonical_set,
    compose,
    composable_pairs,
    composition_map,
    curry,
    exponent,
    fiber,
    characteristic,
    function_to_predicate,
    gen_compose,
    iter_functions,
    omega,
    part_inclusion,
    product,
    relation_to_span,
    span_to_relation,
    subobjects,
    terminal,
    uncurry,
    verify_topos_laws,
    all_proofs,
    member,
    includes,
    POINT,
)
from iffkit.metastack import (
    CapExceeded,
    bounded_union,
    build_universe,
    check_grothendieck_analogs,
    encode_level,
    unbounded_union,
    verify_source_chain,
)
from iffkit.modelcheck import (
    check_theory,
    fixed_point_free_witness,
    fixed_points,
    has_fpp,
    load_interpretation,
    negation_map,
    render_valuation,
    verify_cantor,
)
from iffkit.names import level_from_decl
from iffkit.syntax import parse_text, parse_unit, print_canonical

from test_syntax import TUTORIAL_ROWS

DATA = Path(__file__).parent / "data"


def _unit(name: str):
    return parse_unit((DATA / name).read_text(), path=f"tests/data/{name}")


def test_criterion_1_corpus_fidelity():
    units = [_unit("example_code.iff"), _unit("group.iff")]
    forms = 0
    for unit in units:
        for ns in unit.namespaces:
            for ax in ns.axioms:
                assert parse_text(print_canonical(ax)) == ax
                forms += 1
    for row in TUTORIAL_ROWS:
        e = parse_text(row)
        assert parse_text(print_canonical(e)) == e
    diags = check_units(units)
    errors = [d for d in diags if d.severity == ERROR]
    assert errors == []
    print(
        f"PASS criterion 1: {forms} corpus forms and {len(TUTORIAL_ROWS)} "
        f"tutorial rows round-trip; 0 error diagnostics"
    )


def test_criterion_2_atomicity_split():
    unit = _unit("example_code.iff")
    profiles = atomicity_profile(unit)
    shell = [
        ns.name
        for ns in unit.namespaces
        if level_from_decl(ns.level_text).is_metashell()
    ]
    natural = [ns.name for ns in unit.namespaces if ns.name not in shell]
    assert shell and natural
    for name in shell:
        counts = profiles[name].counts
        # every form is a well-formed first-order sentence, and the
        # properly first-order class is genuinely exercised: none of the
        # shell namespaces stays within the atomic fragment
        assert FormKind.ILLFORMED not in counts
        assert counts[FormKind.FIRST_ORDER] > 0
        assert not profiles[name].atomic
    negations = 0
    for name in natural:
        for kind, n in profiles[name].counts.items():
            if kind is FormKind.NEGATED_ATOMIC:
                negations += n
            else:
                assert kind in ATOMIC_KINDS
    assert negations == 1  # atomic except exactly one negation
    for name in natural:
        assert profiles[name].atomic  # the negation still counts as atomic
    print(
        f"PASS criterion 2: metashell {shell} first-order (non-atomic); "
        f"natural part {natural} atomic with exactly 1 negated atomic"
    )


def test_criterion_3_cantor_suite():
    total = 0
    for n in range(5):
        ok, offender = verify_cantor(canonical_set(n))
        assert ok and offender is None
        total += (2**n) ** n
    witnesses = {}
    for n in range(2, 5):
        y = canonical_set(n)
        assert not has_fpp(y)
        w = fixed_point_free_witness(y)
        assert w is not None and len(fixed_points(w)) == 0
        witnesses[n] = w
    assert len(fixed_points(negation_map())) == 0
    print(
        f"PASS criterion 3: no surjection onto a power set across {total} "
        f"functions; fixed-point-free witnesses at sizes {sorted(witnesses)}; "
        f"negation fixed-point free"
    )


def test_criterion_4_topos_suite():
    failures = verify_topos_laws(max_size=3, naturality_size=2)
    assert failures == []
    # the bijections behind the law sweep, spot-audited at the boundary size
    a = canonical_set(3)
    assert len(subobjects(a)) == len(list(iter_functions(a, omega())))
    for p in subobjects(a):
        assert fiber(characteristic(p)) == p
    c, b = canonical_set(2, "c"), canonical_set(2, "b")
    carrier, _, _ = product(c, a)
    assert len(list(iter_functions(carrier, b))) == len(
        list(iter_functions(c, exponent(a, b)))
    )
    for f in iter_functions(carrier, b):
        assert uncurry(curry(f, c, a, b), c, a, b) == f
    print(
        "PASS criterion 4: classifier and exponential bijections with "
        "naturality verified for sizes <= 3 (naturality <= 2)"
    )


def test_criterion_5_element_theory():
    x = canonical_set(3)
    parts = [part_inclusion(p) for p in subobjects(x)]
    sources = [canonical_set(n, "s") for n in range(3)]
    checked = 0
    for b in parts:
        for src in sources:
            for elem in iter_functions(src, x):
                proofs = all_proofs(elem, b)
                assert len(proofs) <= 1  # proofs of belonging are unique
                checked += 1
    globals_ = list(iter_functions(terminal(), x))
    for a in parts:
        for b in parts:
            pointwise = all(member(g, b) for g in globals_ if member(g, a))
            assert includes(a, b) == pointwise
    for p in subobjects(x):
        assert function_to_predicate(part_inclusion(p)).extent == p.extent
    relations = 0
    cells = [Pair(i, j) for i in x.sorted_elements() for j in x.sorted_elements()]
    for size in range(len(cells) + 1):
        for combo in itertools.combinations(cells, size):
            r = FinRelation(x, x, combo)
            assert span_to_relation(relation_to_span(r)).extent == r.extent
            relations += 1
    assert relations == 512
    print(
        f"PASS criterion 5: proof uniqueness over {checked} element/part "
        f"pairs; inclusion = universal membership; part and relation "
        f"encodings restore all {relations} extents"
    )


def test_criterion_6_generalized_composition():
    x_obj, y_obj = Atom("X"), Atom("Y")
    idx, idy, arrow = Atom("idX"), Atom("idY"), Atom("f")
    objects = FinSet([x_obj, y_obj])
    morphisms = FinSet([idx, idy, arrow])
    cat = FinCategory(
        objects,
        morphisms,
        FinFunction(morphisms, objects, {idx: x_obj, idy: y_obj, arrow: x_obj}),
        FinFunction(morphisms, objects, {idx: x_obj, idy: y_obj, arrow: y_obj}),
        {(idx, idx): idx, (idy, idy): idy, (idx, arrow): arrow, (arrow, idy): arrow},
        FinFunction(objects, morphisms, {x_obj: idx, y_obj: idy}),
    )
    assert len(cat.morphisms) == 3
    x = canonical_set(2)
    pairs_carrier, _, _ = composable_pairs(cat)
    comp_map = composition_map(cat)
    families = 0
    for f in iter_functions(x, cat.morphisms):
        for g in iter_functions(x, cat.morphisms):
            if any(cat.tgt(f(v)) != cat.src(g(v)) for v in x.elements):
                continue
            via_pairing = compose(
                FinFunction(
                    x, pairs_carrier, {v: Pair(f(v), g(v)) for v in x.elements}
                ),
                comp_map,
            )
            assert gen_compose(f, g, cat) == via_pairing
            families += 1
    assert families == 16
    point = terminal()
    reductions = 0
    for m0 in cat.morphisms.elements:
        for m1 in cat.morphisms.elements:
            if cat.tgt(m0) != cat.src(m1):
                continue
            const0 = FinFunction(point, cat.morphisms, {POINT: m0})
            const1 = FinFunction(point, cat.morphisms, {POINT: m1})
            assert gen_compose(const0, const1, cat)(POINT) == cat.compose_morphisms(
                m0, m1
            )
            reductions += 1
    assert reductions == 4
    print(
        f"PASS criterion 6: gen_compose = pairing-then-composition on "
        f"{families} parameterized families; reduces to composition on all "
        f"{reductions} composable pairs at the terminal"
    )


def test_criterion_7_metastack_suite():
    built = skipped = chains_ok = chains_cut = 0
    for atoms, depth, breadth in itertools.product(
        range(1, 4), range(1, 4), range(1, 5)
    ):
        try:
            u = build_universe(atoms, depth, breadth)
        except CapExceeded:
            skipped += 1  # the level itself is beyond the representable budget
            continue
        built += 1
        for k in range(1, depth):
            assert set(u.level(k)) < set(u.level(k + 1))
            enc = encode_level(u, k)
            if len(enc.members) <= breadth:
                assert u.holds_at(k + 1, enc)
        for k in range(1, depth + 1):
            assert not u.holds_at(k, encode_level(u, k))
        ground = FinSet(u.atoms)
        level = u.level(1)
        for fam in [tuple(level)] + [(s,) for s in level[:3]]:
            z = SetVal(fam)
            cut = bounded_union(ground, z)
            free = unbounded_union(z, u, 1)
            assert cut == SetVal(m for m in free.members if m in ground.elements)
        diags = check_grothendieck_analogs(u)
        assert not [d for d in diags if d.severity == ERROR]
        if depth >= 2:
            try:
                assert verify_source_chain(u)
                chains_ok += 1
            except CapExceeded:
                chains_cut += 1
    assert (built, skipped) == (33, 3)
    print(
        f"PASS criterion 7: {built} universes verified ({skipped} beyond the "
        f"level cap); closure rows clean; {chains_ok} chains verified, "
        f"{chains_cut} truncated"
    )


def test_criterion_8_semantics_check():
    unit = _unit("group.iff")
    good = load_interpretation((DATA / "z3.interp").read_text())
    report = check_theory(unit, good)
    assert [(ok, v) for _, ok, v in report] == [(True, None)]
    bad = load_interpretation((DATA / "z3_corrupt.interp").read_text())
    ((_, ok, valuation),) = check_theory(unit, bad)
    assert not ok and valuation is not None
    rendered = render_valuation(valuation)
    assert rendered == "?G = {0 1 2}, ?a = 1"
    print(
        f"PASS criterion 8: Z3 satisfies the group axiom; corrupted table "
        f"falsified at {rendered}"
    )
