"""The finite-set semantic kernel.

Everything here is a hereditarily finite, immutable value:

* :class:`Atom`, :class:`Pair`, :class:`SetVal`, :class:`FnVal` are the
  element values, with structural equality and a canonical total order;
* :class:`FinSet`, :class:`FinFunction`, :class:`FinPredicate`,
  :class:`FinRelation`, :class:`FinSpan`, :class:`FinCategory` are the
  semantic objects built from them.

The operations provide the topos structure of finite sets — products,
terminal/initial objects, the two-element truth-value object, power sets,
exponents with currying, and the subobject classifier bijection — plus
element theory (belonging with explicit proof morphisms, inclusion,
membership), image and span/relation reflections, internal categories with
the composition pullback, and generalized (parametric) composition.

All verification is by exhaustive enumeration; everything is pure.
Composition is written in diagrammatic order: ``compose(f, g)`` maps
``x`` to ``g(f(x))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Optional, Union

# ===== PART 1: values =====


class FinSetError(Exception):
    """Base class for kernel errors."""


class NotComposable(FinSetError):
    """compose(f, g) with f.target != g.source."""


class SourceMismatch(FinSetError):
    """A transpose or pairing applied to functions over the wrong sets."""


class TargetNotOmega(FinSetError):
    """fiber applied to a function that does not target the truth values."""


class GenusMismatch(FinSetError):
    """A predicate operation on predicates over different genera."""


class NotInComponent(FinSetError):
    """A relation fiber taken at a value outside component 0."""


class TargetMismatch(FinSetError):
    """An element-theory operation on morphisms with different targets."""


class NotAPart(FinSetError):
    """An element-theory operation requiring a monomorphism got none."""


class NotPointwiseComposable(FinSetError):
    """gen_compose on families that fail tgt(f(x)) = src(g(x)) somewhere."""


class InvalidCategory(FinSetError):
    """A FinCategory whose data violate the category laws."""


class OutOfDomain(FinSetError):
    """A function applied to a value outside its source."""


@dataclass(frozen=True)
class Atom:
    """An urelement, identified by its label."""

    label: str


@dataclass(frozen=True)
class Pair:
    """An ordered pair of values."""

    first: "Value"
    second: "Value"


@dataclass(frozen=True)
class SetVal:
    """A finite set as a value; members are deduplicated."""

    members: frozenset

    def __init__(self, members: Iterable["Value"] = ()):
        object.__setattr__(self, "members", frozenset(members))

    def sorted_members(self) -> list["Value"]:
        return sorted(self.members, key=value_key)


@dataclass(frozen=True)
class FnVal:
    """A finite map as a value; the graph is kept sorted with distinct keys."""

    graph: tuple  # tuple[tuple[Value, Value], ...]

    def __init__(self, graph: Union[dict, Iterable[tuple]] = ()):
        items = list(graph.items()) if isinstance(graph, dict) else list(graph)
        pairs = sorted(items, key=lambda kv: value_key(kv[0]))
        keys = [k for k, _ in pairs]
        if len(set(keys)) != len(keys):
            raise FinSetError("a function value cannot repeat a key")
        object.__setattr__(self, "graph", tuple((k, v) for k, v in pairs))

    @cached_property
    def _map(self) -> dict:
        return dict(self.graph)

    def apply(self, x: "Value") -> "Value":
        try:
            return self._map[x]
        except KeyError:
            raise OutOfDomain(f"{x!r} is outside the graph's keys") from None

    def keys(self) -> frozenset:
        return frozenset(k for k, _ in self.graph)

    def values_set(self) -> frozenset:
        return frozenset(v for _, v in self.graph)


Value = Union[Atom, Pair, SetVal, FnVal]


def value_key(v: Value):
    """Canonical total order on values: a sort key comparable across variants."""
    if isinstance(v, Atom):
        return (0, v.label)
    if isinstance(v, Pair):
        return (1, value_key(v.first), value_key(v.second))
    if isinstance(v, SetVal):
        return (2, tuple(sorted(value_key(m) for m in v.members)))
    if isinstance(v, FnVal):
        return (3, tuple((value_key(k), value_key(w)) for k, w in v.graph))
    raise TypeError(f"not a value: {v!r}")


def tuple_value(items: Iterable[Value]) -> Value:
    """Right-associated pairing of two or more values."""
    items = list(items)
    if len(items) < 2:
        raise FinSetError("a tuple value needs at least two components")
    result = items[-1]
    for x in reversed(items[:-1]):
        result = Pair(x, result)
    return result


# ===== PART 2: semantic objects =====


@dataclass(frozen=True)
class FinSet:
    """A finite set of values."""

    elements: frozenset

    def __init__(self, elements: Iterable[Value] = ()):
        object.__setattr__(self, "elements", frozenset(elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: Value) -> bool:
        return x in self.elements

    def sorted_elements(self) -> list[Value]:
        return sorted(self.elements, key=value_key)

    def as_value(self) -> SetVal:
        return SetVal(self.elements)


@dataclass(frozen=True)
class FinFunction:
    """A total function between finite sets, stored by its sorted graph."""

    source: FinSet
    target: FinSet
    graph: tuple  # tuple[tuple[Value, Value], ...]

    def __init__(
        self, source: FinSet, target: FinSet, mapping: Union[dict, Iterable[tuple]]
    ):
        pairs = dict(mapping.items() if isinstance(mapping, dict) else mapping)
        if set(pairs.keys()) != set(source.elements):
            raise FinSetError("the map must be total on the source")
        for v in pairs.values():
            if v not in target.elements:
                raise FinSetError(f"image value {v!r} is outside the target")
        graph = tuple(sorted(pairs.items(), key=lambda kv: value_key(kv[0])))
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "graph", graph)

    @cached_property
    def _map(self) -> dict:
        return dict(self.graph)

    def __call__(self, x: Value) -> Value:
        try:
            return self._map[x]
        except KeyError:
            raise OutOfDomain(f"{x!r} is outside the source") from None

    def image(self) -> frozenset:
        return frozenset(v for _, v in self.graph)

    def is_injective(self) -> bool:
        return len(self.image()) == len(self.graph)

    def is_surjective(self) -> bool:
        return self.image() == self.target.elements

    def as_value(self) -> FnVal:
        return FnVal(self.graph)


@dataclass(frozen=True)
class FinPredicate:
    """A part of a genus set, canonicalized as its extent subset."""

    genus: FinSet
    extent: frozenset

    def __init__(self, genus: FinSet, extent: Iterable[Value]):
        extent = frozenset(extent)
        if not extent <= genus.elements:
            raise FinSetError("a predicate's extent must lie inside its genus")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "extent", extent)


@dataclass(frozen=True)
class FinRelation:
    """A binary relation: a set of pairs between two component sets."""

    comp0: FinSet
    comp1: FinSet
    extent: frozenset

    def __init__(self, comp0: FinSet, comp1: FinSet, extent: Iterable[Value]):
        extent = frozenset(extent)
        for p in extent:
            if not isinstance(p, Pair):
                raise FinSetError("a relation's extent holds pairs")
            if p.first not in comp0.elements or p.second not in comp1.elements:
                raise FinSetError(f"{p!r} is outside the relation's components")
        object.__setattr__(self, "comp0", comp0)
        object.__setattr__(self, "comp1", comp1)
        object.__setattr__(self, "extent", extent)


@dataclass(frozen=True)
class FinSpan:
    """Two functions out of a common vertex."""

    vertex: FinSet
    leg0: FinFunction
    leg1: FinFunction

    def __init__(self, vertex: FinSet, leg0: FinFunction, leg1: FinFunction):
        if leg0.source != vertex or leg1.source != vertex:
            raise FinSetError("both legs of a span start at the vertex")
        object.__setattr__(self, "vertex", vertex)
        object.__setattr__(self, "leg0", leg0)
        object.__setattr__(self, "leg1", leg1)


# ===== PART 3: composition, products, terminal objects =====


def compose(f: FinFunction, g: FinFunction) -> FinFunction:
    """Diagrammatic composition: the result maps x to g(f(x))."""
    if f.target != g.source:
        raise NotComposable("compose(f, g) needs f.target = g.source")
    return FinFunction(f.source, g.target, {x: g(f(x)) for x in f.source.elements})


def identity(a: FinSet) -> FinFunction:
    return FinFunction(a, a, {x: x for x in a.elements})


@lru_cache(maxsize=None)
def product(a: FinSet, b: FinSet) -> tuple[FinSet, FinFunction, FinFunction]:
    """The binary product carrier with its two projections."""
    carrier = FinSet(Pair(x, y) for x in a.elements for y in b.elements)
    pi0 = FinFunction(carrier, a, {p: p.first for p in carrier.elements})
    pi1 = FinFunction(carrier, b, {p: p.second for p in carrier.elements})
    return carrier, pi0, pi1


def pairing(f: FinFunction, g: FinFunction) -> FinFunction:
    """The unique map into the product induced by f and g (common source)."""
    if f.source != g.source:
        raise SourceMismatch("pairing needs a common source")
    carrier, _, _ = product(f.target, g.target)
    return FinFunction(
        f.source, carrier, {x: Pair(f(x), g(x)) for x in f.source.elements}
    )


def product_map(f: FinFunction, g: FinFunction) -> FinFunction:
    """The product of two functions, f × g, acting componentwise on pairs."""
    src, _, _ = product(f.source, g.source)
    tgt, _, _ = product(f.target, g.target)
    return FinFunction(
        src, tgt, {p: Pair(f(p.first), g(p.second)) for p in src.elements}
    )


TRUE = Atom("true")
FALSE = Atom("false")
POINT = Atom("•")


def terminal() -> FinSet:
    return FinSet({POINT})


def initial() -> FinSet:
    return FinSet()


def omega() -> FinSet:
    """The two truth values; this set is the subobject classifier."""
    return FinSet({FALSE, TRUE})


def unique_to_terminal(a: FinSet) -> FinFunction:
    return FinFunction(a, terminal(), {x: POINT for x in a.elements})


# ===== PART 4: power sets and exponents =====


@lru_cache(maxsize=None)
def power_set(a: FinSet) -> FinSet:
    """All subsets of ``a``, as SetVal values."""
    elems = a.sorted_elements()
    subsets = []
    for k in range(len(elems) + 1):
        for combo in itertools.combinations(elems, k):
            subsets.append(SetVal(combo))
    return FinSet(subsets)


def power_map(f: FinFunction) -> FinFunction:
    """The covariant direct-image function ℘f: ℘A → ℘B."""
    pa = power_set(f.source)
    pb = power_set(f.target)
    return FinFunction(
        pa, pb, {s: SetVal(f(x) for x in s.members) for s in pa.elements}
    )


def iter_graphs(a: FinSet, b: FinSet) -> Iterator[FnVal]:
    """All function graphs a → b, in a deterministic order."""
    keys = a.sorted_elements()
    values = b.sorted_elements()
    if not keys:
        yield FnVal(())
        return
    for images in itertools.product(values, repeat=len(keys)):
        yield FnVal(list(zip(keys, images)))


def iter_functions(a: FinSet, b: FinSet) -> Iterator[FinFunction]:
    """All functions a → b as FinFunction objects, deterministically."""
    for g in iter_graphs(a, b):
        yield FinFunction(a, b, g.graph)


@lru_cache(maxsize=None)
def hom_set(a: FinSet, b: FinSet) -> FinSet:
    """The set of all function graphs a → b."""
    return FinSet(iter_graphs(a, b))


def exponent(a: FinSet, b: FinSet) -> FinSet:
    """The exponent object B^A: all function graphs a → b."""
    return hom_set(a, b)


def evaluation(a: FinSet, b: FinSet) -> FinFunction:
    """The evaluation map B^A × A → B."""
    exp = exponent(a, b)
    carrier, _, _ = product(exp, a)
    return FinFunction(
        carrier, b, {p: p.first.apply(p.second) for p in carrier.elements}
    )


def curry(f: FinFunction, c: FinSet, a: FinSet, b: FinSet) -> FinFunction:
    """Transpose f: C×A → B to curry(f): C → B^A."""
    carrier, _, _ = product(c, a)
    if f.source != carrier or f.target != b:
        raise SourceMismatch("curry needs f: C×A → B over the given sets")
    exp = exponent(a, b)
    mapping = {
        z: FnVal({x: f(Pair(z, x)) for x in a.elements}) for z in c.elements
    }
    return FinFunction(c, exp, mapping)


def uncurry(g: FinFunction, c: FinSet, a: FinSet, b: FinSet) -> FinFunction:
    """Inverse transpose: from C → B^A back to C×A → B."""
    exp = exponent(a, b)
    if g.source != c or g.target != exp:
        raise SourceMismatch("uncurry needs g: C → B^A over the given sets")
    carrier, _, _ = product(c, a)
    return FinFunction(
        carrier, b, {p: g(p.first).apply(p.second) for p in carrier.elements}
    )


# ===== PART 5: subobjects and the classifier =====


def subobjects(a: FinSet) -> list[FinPredicate]:
    """All parts of ``a``, ordered by extent size then canonical order."""
    elems = a.sorted_elements()
    parts = []
    for k in range(len(elems) + 1):
        for combo in itertools.combinations(elems, k):
            parts.append(FinPredicate(a, combo))
    return parts


def characteristic(p: FinPredicate) -> FinFunction:
    """The classifying map χ_p: genus → Ω."""
    return FinFunction(
        p.genus,
        omega(),
        {x: (TRUE if x in p.extent else FALSE) for x in p.genus.elements},
    )


def fiber(chi: FinFunction) -> FinPredicate:
    """The part classified by χ: the elements sent to true."""
    if chi.target != omega():
        raise TargetNotOmega("fiber needs a map into the truth values")
    return FinPredicate(
        chi.source, {x for x in chi.source.elements if chi(x) == TRUE}
    )


def binary_meet(p: FinPredicate, q: FinPredicate) -> FinPredicate:
    """The intersection of two parts of a common genus."""
    if p.genus != q.genus:
        raise GenusMismatch("binary_meet needs a common genus")
    return FinPredicate(p.genus, p.extent & q.extent)


def part_inclusion(p: FinPredicate) -> FinFunction:
    """The canonical mono: the inclusion of the extent into the genus."""
    return FinFunction(FinSet(p.extent), p.genus, {x: x for x in p.extent})


def relation_fiber01(r: FinRelation, x: Value) -> FinSet:
    """The fiber of a relation over a component-0 value."""
    if x not in r.comp0.elements:
        raise NotInComponent(f"{x!r} is not in component 0")
    return FinSet(p.second for p in r.extent if p.first == x)


# ===== PART 6: reflections =====


def image_factorization(f: FinFunction) -> tuple[FinPredicate, FinFunction]:
    """The image part of f.target and the corestriction of f onto it."""
    img = f.image()
    part = FinPredicate(f.target, img)
    corestriction = FinFunction(
        f.source, FinSet(img), {x: f(x) for x in f.source.elements}
    )
    return part, corestriction


def function_to_predicate(f: FinFunction) -> FinPredicate:
    """pred(f): the image part of the target."""
    return image_factorization(f)[0]


def span_to_relation(s: FinSpan) -> FinRelation:
    """rel(s): the image of the pairing of the two legs."""
    pairs = {Pair(s.leg0(v), s.leg1(v)) for v in s.vertex.elements}
    return FinRelation(s.leg0.target, s.leg1.target, pairs)


def relation_to_span(r: FinRelation) -> FinSpan:
    """spn(r): the extent as vertex with the component projections as legs."""
    vertex = FinSet(r.extent)
    leg0 = FinFunction(vertex, r.comp0, {p: p.first for p in r.extent})
    leg1 = FinFunction(vertex, r.comp1, {p: p.second for p in r.extent})
    return FinSpan(vertex, leg0, leg1)


# ===== PART 7: element theory =====


def is_element(x: FinFunction, big_x: FinSet) -> bool:
    """x is an element of X when X is the target of x."""
    return x.target == big_x


def is_part(b: FinFunction) -> bool:
    """b is a part (monomorphism) when its graph is injective."""
    return b.is_injective()


def belongs(x: FinFunction, y: FinFunction) -> Optional[FinFunction]:
    """A proof p with compose(p, y) = x, if one exists.

    When y is a part the proof is unique; in general the first proof in
    the deterministic enumeration is returned.
    """
    if x.target != y.target:
        raise TargetMismatch("belongs needs elements of a common set")
    for p in iter_functions(x.source, y.source):
        if compose(p, y) == x:
            return p
    return None


def all_proofs(x: FinFunction, y: FinFunction) -> list[FinFunction]:
    """Every proof of belonging; used to observe uniqueness for parts."""
    if x.target != y.target:
        raise TargetMismatch("belongs needs elements of a common set")
    return [p for p in iter_functions(x.source, y.source) if compose(p, y) == x]


def member(x: FinFunction, b: FinFunction) -> bool:
    """x is a member of the part b when x belongs to b."""
    if not is_part(b):
        raise NotAPart("member needs a part as its second argument")
    return belongs(x, b) is not None


def includes(a: FinFunction, b: FinFunction) -> bool:
    """The part a is included in the part b when a belongs to b."""
    if not is_part(a) or not is_part(b):
        raise NotAPart("includes needs two parts")
    return belongs(a, b) is not None


# ===== PART 8: internal categories =====


@dataclass(frozen=True)
class FinCategory:
    """A small category with all laws checked exhaustively on construction."""

    objects: FinSet
    morphisms: FinSet
    src: FinFunction
    tgt: FinFunction
    comp: tuple  # sorted tuple of ((f, g), h) entries
    ident: FinFunction

    def __init__(
        self,
        objects: FinSet,
        morphisms: FinSet,
        src: FinFunction,
        tgt: FinFunction,
        comp: Union[dict, Iterable[tuple]],
        ident: FinFunction,
    ):
        comp_map = dict(comp)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "morphisms", morphisms)
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "tgt", tgt)
        object.__setattr__(
            self,
            "comp",
            tuple(
                sorted(
                    comp_map.items(),
                    key=lambda kv: (value_key(kv[0][0]), value_key(kv[0][1])),
                )
            ),
        )
        object.__setattr__(self, "ident", ident)
        self._validate(comp_map)

    @cached_property
    def _comp_map(self) -> dict:
        return dict(self.comp)

    def compose_morphisms(self, f: Value, g: Value) -> Value:
        """The composite of f then g; defined when tgt(f) = src(g)."""
        try:
            return self._comp_map[(f, g)]
        except KeyError:
            raise NotComposable(f"{f!r} and {g!r} are not composable") from None

    def _validate(self, comp_map: dict) -> None:
        mor = self.morphisms.elements
        obj = self.objects.elements
        if self.src.source != self.morphisms or self.src.target != self.objects:
            raise InvalidCategory("src must map morphisms to objects")
        if self.tgt.source != self.morphisms or self.tgt.target != self.objects:
            raise InvalidCategory("tgt must map morphisms to objects")
        if self.ident.source != self.objects or self.ident.target != self.morphisms:
            raise InvalidCategory("ident must map objects to morphisms")
        for (f, g), h in comp_map.items():
            if f not in mor or g not in mor or h not in mor:
                raise InvalidCategory("composition mentions a non-morphism")
            if self.tgt(f) != self.src(g):
                raise InvalidCategory("composition defined on a non-composable pair")
            if self.src(h) != self.src(f) or self.tgt(h) != self.tgt(g):
                raise InvalidCategory("composite has the wrong endpoints")
        for f in mor:
            for g in mor:
                if self.tgt(f) == self.src(g) and (f, g) not in comp_map:
                    raise InvalidCategory("composition missing on a composable pair")
        for x in obj:
            i = self.ident(x)
            if self.src(i) != x or self.tgt(i) != x:
                raise InvalidCategory("identity with the wrong endpoints")
        for f in mor:
            if comp_map[(self.ident(self.src(f)), f)] != f:
                raise InvalidCategory("left identity law fails")
            if comp_map[(f, self.ident(self.tgt(f)))] != f:
                raise InvalidCategory("right identity law fails")
        for f in mor:
            for g in mor:
                if self.tgt(f) != self.src(g):
                    continue
                for h in mor:
                    if self.tgt(g) != self.src(h):
                        continue
                    left = comp_map[(comp_map[(f, g)], h)]
                    right = comp_map[(f, comp_map[(g, h)])]
                    if left != right:
                        raise InvalidCategory("associativity fails")


def discrete_category(objects: FinSet) -> FinCategory:
    """The category with the given objects and only identity morphisms."""
    morphisms = FinSet(Pair(Atom("id"), x) for x in objects.elements)
    src = FinFunction(morphisms, objects, {m: m.second for m in morphisms.elements})
    tgt = FinFunction(morphisms, objects, {m: m.second for m in morphisms.elements})
    ident = FinFunction(
        objects, morphisms, {x: Pair(Atom("id"), x) for x in objects.elements}
    )
    comp = {(m, m): m for m in morphisms.elements}
    return FinCategory(objects, morphisms, src, tgt, comp, ident)


def composable_pairs(c: FinCategory) -> tuple[FinSet, FinFunction, FinFunction]:
    """The pullback of (tgt, src): pairs (f, g) with tgt(f) = src(g)."""
    pairs = FinSet(
        Pair(f, g)
        for f in c.morphisms.elements
        for g in c.morphisms.elements
        if c.tgt(f) == c.src(g)
    )
    pi0 = FinFunction(pairs, c.morphisms, {p: p.first for p in pairs.elements})
    pi1 = FinFunction(pairs, c.morphisms, {p: p.second for p in pairs.elements})
    return pairs, pi0, pi1


def composition_map(c: FinCategory) -> FinFunction:
    """The composition as a function on the composable-pairs carrier."""
    pairs, _, _ = composable_pairs(c)
    return FinFunction(
        pairs,
        c.morphisms,
        {p: c.compose_morphisms(p.first, p.second) for p in pairs.elements},
    )


def is_pullback_of_composability(
    c: FinCategory, pairs: FinSet, pi0: FinFunction, pi1: FinFunction
) -> bool:
    """Brute-force the universal property of the composability pullback.

    For every cone (u, v) with tgt∘u = src∘v over vertices of size at most
    3 drawn from the morphism values, exactly one mediating map into the
    carrier commutes with both projections.
    """
    if compose(pi0, c.tgt) != compose(pi1, c.src):
        return False
    mor = c.morphisms
    pool = mor.sorted_elements()
    vertices = [FinSet(pool[:k]) for k in range(min(len(pool), 3) + 1)]
    for vertex in vertices:
        for u in iter_functions(vertex, mor):
            for v in iter_functions(vertex, mor):
                if compose(u, c.tgt) != compose(v, c.src):
                    continue
                mediators = [
                    m
                    for m in iter_functions(vertex, pairs)
                    if compose(m, pi0) == u and compose(m, pi1) == v
                ]
                if len(mediators) != 1:
                    return False
    return True


def gen_compose(f: FinFunction, g: FinFunction, c: FinCategory) -> FinFunction:
    """Parametric composition of two families of morphisms.

    f and g share a parameter source X and target the category's morphisms;
    the result sends x to the composite of f(x) then g(x).  It equals the
    pairing of f and g followed by the composition map.
    """
    if f.source != g.source:
        raise NotPointwiseComposable("gen_compose needs a common parameter set")
    if f.target != c.morphisms or g.target != c.morphisms:
        raise NotPointwiseComposable("gen_compose needs families of morphisms")
    for x in f.source.elements:
        if c.tgt(f(x)) != c.src(g(x)):
            raise NotPointwiseComposable(f"family values at {x!r} are not composable")
    return FinFunction(
        f.source,
        c.morphisms,
        {x: c.compose_morphisms(f(x), g(x)) for x in f.source.elements},
    )


# ===== PART 9: topos-law sweeps =====


def canonical_set(size: int, prefix: str = "e") -> FinSet:
    """The standard n-element set of atoms e0 .. e(n-1)."""
    return FinSet(Atom(f"{prefix}{i}") for i in range(size))


def verify_classifier_bijection(a: FinSet) -> list[str]:
    """Check Sub(A) ≅ Hom(A, Ω) via characteristic and fiber."""
    failures: list[str] = []
    parts = subobjects(a)
    chis = list(iter_functions(a, omega()))
    if len(parts) != len(chis):
        failures.append(
            f"|Sub(A)|={len(parts)} differs from |Hom(A,Omega)|={len(chis)} "
            f"at |A|={len(a)}"
        )
    for p in parts:
        if fiber(characteristic(p)) != p:
            failures.append(f"fiber(characteristic(p)) != p for extent {p.extent!r}")
    for chi in chis:
        if characteristic(fiber(chi)) != chi:
            failures.append("characteristic(fiber(chi)) != chi")
    return failures


def verify_exponential_bijection(c: FinSet, a: FinSet, b: FinSet) -> list[str]:
    """Check Hom(C×A,B) ≅ Hom(C,B^A) via curry and uncurry."""
    failures: list[str] = []
    carrier, _, _ = product(c, a)
    lhs = list(iter_functions(carrier, b))
    rhs = list(iter_functions(c, exponent(a, b)))
    if len(lhs) != len(rhs):
        failures.append(
            f"|Hom(CxA,B)|={len(lhs)} differs from |Hom(C,B^A)|={len(rhs)}"
        )
    ident_a = identity(a)
    ev = evaluation(a, b)
    for f in lhs:
        cf = curry(f, c, a, b)
        if uncurry(cf, c, a, b) != f:
            failures.append("uncurry(curry(f)) != f")
            break
        # The exponential law: eval after (curry(f) x id) recovers f.
        if compose(product_map(cf, ident_a), ev) != f:
            failures.append("eval after (curry(f) x id) != f")
            break
    for g in rhs:
        if curry(uncurry(g, c, a, b), c, a, b) != g:
            failures.append("curry(uncurry(g)) != g")
            break
    return failures


def inverse_image_part(h: FinFunction, p: FinPredicate) -> FinPredicate:
    """The pullback of a part along h: {x : h(x) in extent}."""
    if p.genus != h.target:
        raise GenusMismatch("inverse image needs a part of the target")
    return FinPredicate(h.source, {x for x in h.source.elements if h(x) in p.extent})


def verify_classifier_naturality(max_size: int = 2) -> list[str]:
    """Check naturality of the classifier bijection in A.

    For every h: A' → A between sets of size at most ``max_size`` and every
    part p of A: characteristic(h*(p)) = compose(h, characteristic(p)).
    """
    failures: list[str] = []
    sets = [canonical_set(n) for n in range(max_size + 1)] + [
        canonical_set(n, "d") for n in range(1, max_size + 1)
    ]
    for a in sets:
        for a_prime in sets:
            for h in iter_functions(a_prime, a):
                for p in subobjects(a):
                    lhs = characteristic(inverse_image_part(h, p))
                    rhs = compose(h, characteristic(p))
                    if lhs != rhs:
                        failures.append(
                            f"classifier naturality fails at |A|={len(a)}, "
                            f"|A'|={len(a_prime)}"
                        )
    return failures


def precompose_exponent(h: FinFunction, b: FinSet) -> FinFunction:
    """B^h: B^A → B^A' by precomposition with h: A' → A."""
    src = exponent(h.target, b)
    tgt = exponent(h.source, b)
    return FinFunction(
        src,
        tgt,
        {g: FnVal({x: g.apply(h(x)) for x in h.source.elements}) for g in src.elements},
    )


def verify_exponential_naturality(max_size: int = 2) -> list[str]:
    """Check naturality of currying in A.

    For every h: A' → A (sizes at most ``max_size``) and f: C×A → B:
    curry(f ∘ (id_C × h)) = curry(f) followed by B^h.
    """
    failures: list[str] = []
    for na in range(max_size + 1):
        for nap in range(max_size + 1):
            for nb in range(1, max_size + 1):
                for nc in range(1, max_size + 1):
                    a = canonical_set(na)
                    a_prime = canonical_set(nap, "d")
                    b = canonical_set(nb, "b")
                    c = canonical_set(nc, "c")
                    carrier, _, _ = product(c, a)
                    for h in iter_functions(a_prime, a):
                        idc_x_h = product_map(identity(c), h)
                        bh_map = precompose_exponent(h, b)
                        for f in iter_functions(carrier, b):
                            lhs = curry(compose(idc_x_h, f), c, a_prime, b)
                            rhs = compose(curry(f, c, a, b), bh_map)
                            if lhs != rhs:
                                failures.append(
                                    f"exponential naturality fails at |A|={na}, "
                                    f"|A'|={nap}, |B|={nb}, |C|={nc}"
                                )
    return failures


def verify_topos_laws(max_size: int = 3, naturality_size: int = 2) -> list[str]:
    """Run the full topos-law sweep; an empty list means everything holds."""
    failures: list[str] = []
    for n in range(max_size + 1):
        failures.extend(verify_classifier_bijection(canonical_set(n)))
    for nc in range(1, max_size + 1):
        for na in range(max_size + 1):
            for nb in range(max_size + 1):
                failures.extend(
                    verify_exponential_bijection(
                        canonical_set(nc, "c"),
                        canonical_set(na),
                        canonical_set(nb, "b"),
                    )
                )
    failures.extend(verify_classifier_naturality(naturality_size))
    failures.extend(verify_exponential_naturality(naturality_size))
    return failures
