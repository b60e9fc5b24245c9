"""Rank-stratified finite set levels, their unions, and the kernel orders.

This module simulates, at desk scale, the picture in which the collection of
all sets of one rank is itself a set only at the next rank: starting from a
ground of urelement atoms, level 1 holds the small sets of atoms, and each
later level holds the sets built over the atoms together with everything one
level down.  The chain grows strictly (each level's collection appears as a
member one level up but never of itself), a universe value collects every
member of a level's sets, and bounded/unbounded union operations relate the
two views.  A diagnostic scan verifies the closure properties one expects of
a universe — membership, subsets, singletons and doubletons, power sets where
representable, and unions — reporting truncation artifacts separately from
genuine violations.

The module also packages five order relations as decision procedures —
subset on finite sets, restriction and optimal restriction on functions,
delimitation on predicates, and abridgment on relations — together with the
canonical encodings (relations as predicates on products, predicates as
inclusion functions) that let one order specialize to the next, and a check
that the source/target assignments of adjacent levels' function collections
form a restriction chain.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

from .checks import ERROR, INFO, Diagnostic
from .finset import (
    Atom,
    FinFunction,
    FinPredicate,
    FinRelation,
    FinSet,
    FnVal,
    SetVal,
    Value,
    part_inclusion,
    product,
    value_key,
)
from .modelcheck import render_value

# ===== PART 1: errors and caps =====

MAX_LEVEL_SIZE = 100_000
GRAPH_CAP = 50_000


class MetastackError(Exception):
    """Base class for stratified-universe errors."""


class CapExceeded(MetastackError):
    """An enumeration would exceed a configured global bound."""


class NotAFamily(MetastackError):
    """A union was asked of a collection whose members are not all sets."""


class NotInPTilde(MetastackError):
    """An unbounded union needs a family of sets drawn from the given level."""


class LevelOutOfRange(MetastackError):
    """A level index fell outside the built depth."""


class KindMismatch(MetastackError):
    """An order relation was applied to operands of the wrong kinds."""


# ===== PART 2: the stratified universe =====


@dataclass(frozen=True)
class StratifiedUniverse:
    """Levels of finite sets over a ground of atoms.

    ``levels[k - 1]`` holds the collection ``set_k``: every set value of rank
    at most ``k`` over the atoms whose cardinality is at most ``breadth_cap``,
    in canonical order.  The collections grow along ``k``, and the set value
    encoding ``set_k`` is itself a member of ``set_{k+1}`` (whenever its
    cardinality fits the breadth cap) but never of ``set_k``.
    """

    atoms: tuple  # tuple[Atom, ...]
    depth: int
    breadth_cap: int
    levels: tuple  # tuple[tuple[SetVal, ...], ...]

    def __init__(self, atoms, depth: int, breadth_cap: int, levels):
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "breadth_cap", breadth_cap)
        object.__setattr__(self, "levels", tuple(tuple(lv) for lv in levels))
        object.__setattr__(
            self, "_member_sets", tuple(frozenset(lv) for lv in self.levels)
        )

    def level(self, k: int) -> tuple:
        """The collection ``set_k``, canonically ordered."""
        if not 1 <= k <= self.depth:
            raise LevelOutOfRange(f"level {k} is outside 1..{self.depth}")
        return self.levels[k - 1]

    def holds_at(self, k: int, v: Value) -> bool:
        """Whether ``v`` is a member of the collection ``set_k``."""
        if not 1 <= k <= self.depth:
            raise LevelOutOfRange(f"level {k} is outside 1..{self.depth}")
        return v in self._member_sets[k - 1]


def build_universe(
    atoms: int,
    depth: int,
    breadth_cap: int,
    *,
    max_level_size: int = MAX_LEVEL_SIZE,
) -> StratifiedUniverse:
    """Build ``depth`` levels of sets over ``atoms`` urelements.

    Level 1 holds every set of atoms of cardinality at most ``breadth_cap``;
    level ``k + 1`` holds every such set over the atoms together with the
    whole of level ``k``.  Raises :class:`CapExceeded` before enumerating any
    level whose cardinality (a sum of binomial coefficients) would exceed
    ``max_level_size``.
    """
    if atoms < 1:
        raise ValueError("a universe needs at least one atom")
    if depth < 1:
        raise ValueError("a universe needs at least one level")
    if breadth_cap < 0:
        raise ValueError("the breadth cap cannot be negative")
    ground_atoms = tuple(Atom(f"a{i}") for i in range(atoms))
    ground = sorted(ground_atoms, key=value_key)
    levels = []
    for k in range(1, depth + 1):
        width = min(breadth_cap, len(ground))
        count = sum(math.comb(len(ground), i) for i in range(width + 1))
        if count > max_level_size:
            raise CapExceeded(
                f"level {k} would hold {count} sets (global bound {max_level_size})"
            )
        level = [
            SetVal(combo)
            for i in range(width + 1)
            for combo in itertools.combinations(ground, i)
        ]
        level.sort(key=value_key)
        levels.append(tuple(level))
        ground = sorted(set(ground_atoms) | set(level), key=value_key)
    return StratifiedUniverse(ground_atoms, depth, breadth_cap, levels)


def encode_level(u: StratifiedUniverse, k: int) -> SetVal:
    """The collection ``set_k`` packaged as a single set value."""
    return SetVal(u.level(k))


# ===== PART 3: unions and universes =====


def bounded_union(x: FinSet, z: SetVal) -> SetVal:
    """The union of the family ``z`` cut down to the bounding set ``x``.

    Returns ``{e ∈ x | some member of z contains e}``; every member of ``z``
    must itself be a set value.
    """
    if not isinstance(z, SetVal):
        raise NotAFamily("a union takes a set of sets")
    for y in z.members:
        if not isinstance(y, SetVal):
            raise NotAFamily(f"family member {render_value(y)} is not a set")
    return SetVal(
        e for e in x.elements if any(e in y.members for y in z.members)
    )


def unbounded_union(z: SetVal, u: StratifiedUniverse, k: int) -> SetVal:
    """The union of a family of level-``k`` sets, with no bounding set.

    Every member of ``z`` must be a member of the collection ``set_k``; the
    result restricted to any bounding set agrees with :func:`bounded_union`.
    """
    if not isinstance(z, SetVal):
        raise NotInPTilde("an unbounded union takes a set of level sets")
    for y in z.members:
        if not (isinstance(y, SetVal) and u.holds_at(k, y)):
            raise NotInPTilde(
                f"family member {render_value(y)} is not a level-{k} set"
            )
    return SetVal(e for y in z.members for e in y.members)


def _level_union(u: StratifiedUniverse, k: int) -> SetVal:
    """The union of every member of ``set_k`` (no depth restriction)."""
    return SetVal(e for y in u.level(k) for e in y.members)


def universe(u: StratifiedUniverse, k: int) -> SetVal:
    """Everything that occurs inside some level-``k`` set.

    Realized as the unbounded union of the encoded collection ``set_k``,
    which presupposes the next level up exists; hence ``k < depth``.
    """
    if not 1 <= k < u.depth:
        raise LevelOutOfRange(
            f"the universe at level {k} needs 1 <= {k} < depth {u.depth}"
        )
    return unbounded_union(encode_level(u, k), u, k)


# ===== PART 4: closure diagnostics =====

_ANALOG_VIOLATED = "ANALOG-VIOLATED"
_ANALOG_TRUNCATED = "ANALOG-TRUNCATED"


def _violated(row: str, k: int, message: str) -> Diagnostic:
    return Diagnostic(ERROR, _ANALOG_VIOLATED, message, file="-", namespace=f"{row}@{k}")


def _subsets(x: SetVal) -> Iterable[tuple]:
    elems = x.sorted_members()
    for i in range(len(elems) + 1):
        yield from itertools.combinations(elems, i)


def check_grothendieck_analogs(u: StratifiedUniverse) -> list[Diagnostic]:
    """Scan every level for the universe closure properties.

    Rows checked per level ``k`` and per set ``X`` in ``set_k``: members of
    ``X`` land in the level's universe; every subset of ``X`` is again in
    ``set_k``; singletons and doubletons of members of ``X`` are in ``set_k``;
    the power set of ``X`` is in ``set_{k+1}`` where representable; bounded
    unions of subset families land in ``set_k`` (the empty family, every
    singleton family, and the full power family).  Violations come back as
    error diagnostics carrying the witness; instances that are merely beyond
    the breadth cap or the built depth come back as one info diagnostic per
    row and level with a count.
    """
    out: list[Diagnostic] = []
    truncated: dict[tuple[str, int], int] = {}

    def cut(row: str, k: int) -> None:
        truncated[(row, k)] = truncated.get((row, k), 0) + 1

    for k in range(1, u.depth + 1):
        univ = _level_union(u, k)
        for x in u.level(k):
            for e in x.sorted_members():
                if e not in univ.members:
                    out.append(
                        _violated(
                            "membership",
                            k,
                            f"member {render_value(e)} of {render_value(x)} "
                            f"is outside the level-{k} universe",
                        )
                    )
            for combo in _subsets(x):
                sub = SetVal(combo)
                if len(sub.members) > u.breadth_cap:
                    cut("subset", k)
                elif not u.holds_at(k, sub):
                    out.append(
                        _violated(
                            "subset",
                            k,
                            f"subset {render_value(sub)} of {render_value(x)} "
                            f"is missing from level {k}",
                        )
                    )
            members = x.sorted_members()
            for a, b in itertools.combinations_with_replacement(members, 2):
                pair_set = SetVal({a, b})
                if len(pair_set.members) > u.breadth_cap:
                    cut("doubleton", k)
                elif not u.holds_at(k, pair_set):
                    out.append(
                        _violated(
                            "doubleton",
                            k,
                            f"{render_value(pair_set)} over {render_value(x)} "
                            f"is missing from level {k}",
                        )
                    )
            if k == u.depth or 2 ** len(x.members) > u.breadth_cap:
                cut("power", k)
            else:
                px = SetVal(SetVal(c) for c in _subsets(x))
                if not u.holds_at(k + 1, px):
                    out.append(
                        _violated(
                            "power",
                            k,
                            f"power set {render_value(px)} of {render_value(x)} "
                            f"is missing from level {k + 1}",
                        )
                    )
            carrier = FinSet(x.members)
            all_parts = [SetVal(c) for c in _subsets(x)]
            families = [SetVal(), SetVal(all_parts)]
            families.extend(SetVal([p]) for p in all_parts)
            for fam in families:
                joined = bounded_union(carrier, fam)
                if not u.holds_at(k, joined):
                    out.append(
                        _violated(
                            "union",
                            k,
                            f"bounded union {render_value(joined)} of "
                            f"{render_value(fam)} over {render_value(x)} "
                            f"is missing from level {k}",
                        )
                    )
    for (row, k), n in sorted(truncated.items()):
        out.append(
            Diagnostic(
                INFO,
                _ANALOG_TRUNCATED,
                f"{row} closure: {n} instance(s) beyond the truncation",
                file="-",
                namespace=f"{row}@{k}",
            )
        )
    return out


# ===== PART 5: the kernel orders =====


def _expect(kind: type, *values) -> None:
    for v in values:
        if not isinstance(v, kind):
            raise KindMismatch(
                f"expected {kind.__name__}, got {type(v).__name__}"
            )


def order_subset(a: FinSet, b: FinSet) -> bool:
    """Containment of finite sets: every element of ``a`` is in ``b``."""
    _expect(FinSet, a, b)
    return a.elements <= b.elements


def order_restriction(f: FinFunction, g: FinFunction) -> bool:
    """``f`` is a restriction of ``g``: smaller source and target, same values.

    Holds when ``f.source ⊆ g.source``, ``f.target ⊆ g.target``, and ``g``
    agrees with ``f`` everywhere on ``f``'s source.
    """
    _expect(FinFunction, f, g)
    return (
        f.source.elements <= g.source.elements
        and f.target.elements <= g.target.elements
        and all(g(x) == f(x) for x in f.source.elements)
    )


def is_optimal(f: FinFunction) -> bool:
    """Whether the target is tight: exactly the image, nothing more."""
    _expect(FinFunction, f)
    return f.image() == f.target.elements


def order_opt_restriction(f: FinFunction, g: FinFunction) -> bool:
    """Restriction whose left side carries a tight target.

    Holds when ``f`` is a restriction of ``g`` and ``f.target`` equals the
    image of ``f``; on tight functions this is reflexive and transitive.
    """
    _expect(FinFunction, f, g)
    return order_restriction(f, g) and is_optimal(f)


def order_delimitation(p: FinPredicate, q: FinPredicate) -> bool:
    """``p`` delimits ``q``: genus inside genus and extent inside extent."""
    _expect(FinPredicate, p, q)
    return p.genus.elements <= q.genus.elements and p.extent <= q.extent


def order_abridgment(r: FinRelation, s: FinRelation) -> bool:
    """``r`` abridges ``s``: both components and the extent are contained."""
    _expect(FinRelation, r, s)
    return (
        r.comp0.elements <= s.comp0.elements
        and r.comp1.elements <= s.comp1.elements
        and r.extent <= s.extent
    )


class KernelOrders:
    """The five order relations bundled as decision procedures."""

    subset = staticmethod(order_subset)
    restriction = staticmethod(order_restriction)
    opt_restriction = staticmethod(order_opt_restriction)
    delimitation = staticmethod(order_delimitation)
    abridgment = staticmethod(order_abridgment)


def relation_as_predicate(r: FinRelation) -> FinPredicate:
    """The canonical encoding of a relation as a predicate on the product."""
    _expect(FinRelation, r)
    carrier, _, _ = product(r.comp0, r.comp1)
    return FinPredicate(carrier, r.extent)


def predicate_as_inclusion(p: FinPredicate) -> FinFunction:
    """The canonical encoding of a predicate as its inclusion function."""
    _expect(FinPredicate, p)
    return part_inclusion(p)


# ===== PART 6: source and target chains =====


def level_functions(
    u: StratifiedUniverse, k: int, *, graph_cap: int = GRAPH_CAP
) -> tuple:
    """Every function graph between two level-``k`` sets, deduplicated.

    Raises :class:`CapExceeded` when the (duplicate-counting) estimate of the
    enumeration exceeds ``graph_cap``.
    """
    level = u.level(k)
    estimate = 0
    for a in level:
        for b in level:
            estimate += len(b.members) ** len(a.members)
            if estimate > graph_cap:
                raise CapExceeded(
                    f"level {k} holds more than {graph_cap} function graphs"
                )
    seen = set()
    for a in level:
        keys = a.sorted_members()
        for b in level:
            for choice in itertools.product(b.sorted_members(), repeat=len(keys)):
                seen.add(FnVal(zip(keys, choice)))
    return tuple(sorted(seen, key=value_key))


def _boundary(u: StratifiedUniverse, k: int, pick, graph_cap: int) -> FinFunction:
    ftn = level_functions(u, k, graph_cap=graph_cap)
    return FinFunction(
        FinSet(ftn), FinSet(u.level(k)), {f: SetVal(pick(f)) for f in ftn}
    )


def source_function(
    u: StratifiedUniverse, k: int, *, graph_cap: int = GRAPH_CAP
) -> FinFunction:
    """The map sending each level-``k`` function graph to its key set."""
    return _boundary(u, k, FnVal.keys, graph_cap)


def target_function(
    u: StratifiedUniverse, k: int, *, graph_cap: int = GRAPH_CAP
) -> FinFunction:
    """The map sending each level-``k`` function graph to its image set."""
    return _boundary(u, k, FnVal.values_set, graph_cap)


def verify_source_chain(
    u: StratifiedUniverse, *, graph_cap: int = GRAPH_CAP
) -> bool:
    """Whether each level's source and target maps restrict the next level's.

    For every adjacent pair of levels, realizes the source and target
    assignments of the function collections as finite functions and checks
    the restriction order between them.
    """
    if u.depth < 2:
        raise LevelOutOfRange("the chain needs at least two levels")
    ok = True
    lower_src = source_function(u, 1, graph_cap=graph_cap)
    lower_tgt = target_function(u, 1, graph_cap=graph_cap)
    for k in range(2, u.depth + 1):
        upper_src = source_function(u, k, graph_cap=graph_cap)
        upper_tgt = target_function(u, k, graph_cap=graph_cap)
        ok = (
            ok
            and order_restriction(lower_src, upper_src)
            and order_restriction(lower_tgt, upper_tgt)
        )
        lower_src, lower_tgt = upper_src, upper_tgt
    return ok
