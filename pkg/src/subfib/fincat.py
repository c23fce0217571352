"""Finite categories, functors and natural transformations as explicit data.

Objects and morphisms are opaque string identifiers; equality is identifier
equality.  Composition tables are fully materialized so that every law check
is a finite scan.  Limits (pullbacks, terminal objects) are computed by
brute-force enumeration with deterministic tie-breaking by identifier order.

All values are immutable after construction and safe to share between
workers; the only mutation is a write-once cache of the integer encoding
used by the hot kernels (see tables.py).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import MalformedEntity, MissingBase, NoPullback, NoTerminal, UnknownMorphism, UnknownObject
from .report import Report


class FinCategory:
    """A finite category: objects, morphisms, identities and a composition table.

    `morphisms` maps a morphism id to its (dom, cod) pair, `identity` maps each
    object to its identity morphism, and `compose` maps (g, f) to g∘f for every
    composable pair (cod f = dom g) and nothing else.
    """

    __slots__ = ("name", "objects", "morphisms", "identity", "compose",
                 "_hom_cache", "_tables")

    def __init__(self, objects: Iterable[str], morphisms: dict, identity: dict,
                 compose: dict, name: str = ""):
        self.name = name
        self.objects = tuple(sorted(objects))
        self.morphisms = dict(morphisms)
        self.identity = dict(identity)
        self.compose = dict(compose)
        self._hom_cache = None
        self._tables = None
        self._check_references()

    # -- structural integrity (raises); laws are checked by validate() --

    def _check_references(self):
        objs = set(self.objects)
        for m, dc in self.morphisms.items():
            if len(dc) != 2:
                raise MalformedEntity(f"morphism {m!r} needs a (dom, cod) pair")
            d, c = dc
            if d not in objs or c not in objs:
                raise MalformedEntity(f"morphism {m!r} has unknown endpoint {d!r} or {c!r}")
        for x in objs:
            if x not in self.identity:
                raise MalformedEntity(f"object {x!r} has no identity")
            if self.identity[x] not in self.morphisms:
                raise MalformedEntity(f"identity of {x!r} is not a morphism")
        for (g, f), gf in self.compose.items():
            for m in (g, f, gf):
                if m not in self.morphisms:
                    raise MalformedEntity(f"compose table references unknown morphism {m!r}")

    # -- accessors --

    def dom(self, m: str) -> str:
        try:
            return self.morphisms[m][0]
        except KeyError:
            raise UnknownMorphism(m) from None

    def cod(self, m: str) -> str:
        try:
            return self.morphisms[m][1]
        except KeyError:
            raise UnknownMorphism(m) from None

    def id_of(self, x: str) -> str:
        try:
            return self.identity[x]
        except KeyError:
            raise UnknownObject(x) from None

    def c(self, g: str, f: str) -> str:
        """g∘f (g after f)."""
        try:
            return self.compose[(g, f)]
        except KeyError:
            raise UnknownMorphism(f"compose undefined for ({g!r}, {f!r})") from None

    def compose_path(self, *ms: str) -> str:
        """Compose a path written outermost-first: compose_path(h, g, f) = h∘g∘f."""
        out = ms[-1]
        for g in reversed(ms[:-1]):
            out = self.c(g, out)
        return out

    def is_identity(self, m: str) -> bool:
        d, c = self.morphisms[m]
        return d == c and self.identity[d] == m

    def _homs(self):
        if self._hom_cache is None:
            homs: dict = {}
            for m, (d, c) in self.morphisms.items():
                homs.setdefault((d, c), []).append(m)
            for k in homs:
                homs[k].sort()
            self._hom_cache = homs
        return self._hom_cache

    def hom(self, x: str, y: str) -> list[str]:
        return list(self._homs().get((x, y), ()))

    def mors_into(self, y: str) -> list[str]:
        return sorted(m for m, (d, c) in self.morphisms.items() if c == y)

    def mors_from(self, x: str) -> list[str]:
        return sorted(m for m, (d, c) in self.morphisms.items() if d == x)

    def n_objects(self) -> int:
        return len(self.objects)

    def n_morphisms(self) -> int:
        return len(self.morphisms)

    def __eq__(self, other):
        """Structural equality on the data; names are display-only."""
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (self.objects == other.objects
                and self.morphisms == other.morphisms
                and self.identity == other.identity
                and self.compose == other.compose)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


@dataclass(frozen=True, eq=True)
class FinFunctor:
    source: FinCategory
    target: FinCategory
    object_map: dict
    morphism_map: dict
    name: str = field(default="", compare=False)

    def on_obj(self, x: str) -> str:
        try:
            return self.object_map[x]
        except KeyError:
            raise UnknownObject(x) from None

    def on_mor(self, m: str) -> str:
        try:
            return self.morphism_map[m]
        except KeyError:
            raise UnknownMorphism(m) from None

    def then(self, other: "FinFunctor") -> "FinFunctor":
        """other ∘ self."""
        return FinFunctor(
            self.source, other.target,
            {x: other.object_map[y] for x, y in self.object_map.items()},
            {m: other.morphism_map[n] for m, n in self.morphism_map.items()},
            name=f"{other.name}∘{self.name}",
        )

    @staticmethod
    def identity(C: FinCategory, name: str = "Id") -> "FinFunctor":
        return FinFunctor(C, C, {x: x for x in C.objects},
                          {m: m for m in C.morphisms}, name=name)


@dataclass(frozen=True)
class NatTransformation:
    source: FinFunctor
    target: FinFunctor
    components: dict  # object of source.source -> morphism of source.target
    name: str = field(default="", compare=False)

    def at(self, x: str) -> str:
        try:
            return self.components[x]
        except KeyError:
            raise UnknownObject(x) from None


@dataclass(frozen=True)
class PullbackResult:
    apex: str
    projections: tuple[str, str]
    mediators: dict  # (z1, z2) commuting cone -> unique mediator


# ---------------------------------------------------------------------------
# validation


def validate(entity) -> Report:
    """Check every law of the given entity; the report is empty iff all hold."""
    if isinstance(entity, FinCategory):
        return _validate_category(entity)
    if isinstance(entity, FinFunctor):
        return _validate_functor(entity)
    if isinstance(entity, NatTransformation):
        return _validate_nat(entity)
    raise MalformedEntity(f"cannot validate {type(entity).__name__}")


def _validate_category(C: FinCategory) -> Report:
    rep = Report(f"category:{C.name or 'anonymous'}")
    for x in C.objects:
        i = C.identity[x]
        if C.morphisms[i] != (x, x):
            rep.fail("identity-endpoints", f"id of {x} is {i} with endpoints {C.morphisms[i]}")
    # totality and endpoints of composition
    for g, (dg, cg) in C.morphisms.items():
        for f, (df, cf) in C.morphisms.items():
            if cf == dg:
                if (g, f) not in C.compose:
                    rep.fail("compose-total", f"({g}, {f}) composable but missing")
                    continue
                gf = C.compose[(g, f)]
                if C.morphisms[gf] != (df, cg):
                    rep.fail("compose-endpoints", f"({g}, {f}) -> {gf} has wrong endpoints")
            elif (g, f) in C.compose:
                rep.fail("compose-spurious", f"({g}, {f}) not composable but present")
    # identity laws
    for f, (d, c) in C.morphisms.items():
        if C.compose.get((f, C.identity[d])) != f:
            rep.fail("identity-right", f"({f}, {C.identity[d]})")
        if C.compose.get((C.identity[c], f)) != f:
            rep.fail("identity-left", f"({C.identity[c]}, {f})")
    # associativity over all composable triples
    comp = C.compose
    for g, (dg, cg) in C.morphisms.items():
        for f, (df, cf) in C.morphisms.items():
            if cf != dg or (g, f) not in comp:
                continue
            gf = comp[(g, f)]
            for h, (dh, ch) in C.morphisms.items():
                if dh != cg:
                    continue
                left = comp.get((h, gf))
                hg = comp.get((h, g))
                right = comp.get((hg, f)) if hg is not None else None
                if left != right or left is None:
                    rep.fail("associativity", f"h={h}, g={g}, f={f}")
    return rep


def _validate_functor(F: FinFunctor) -> Report:
    rep = Report(f"functor:{F.name or 'anonymous'}")
    S, T = F.source, F.target
    for x in S.objects:
        if x not in F.object_map:
            raise MalformedEntity(f"functor misses object {x!r}")
        if F.object_map[x] not in T.morphisms and F.object_map[x] not in T.objects:
            raise MalformedEntity(f"functor maps {x!r} outside the target")
    for m in S.morphisms:
        if m not in F.morphism_map:
            raise MalformedEntity(f"functor misses morphism {m!r}")
        if F.morphism_map[m] not in T.morphisms:
            raise MalformedEntity(f"functor maps {m!r} outside the target")
    for m, (d, c) in S.morphisms.items():
        fm = F.morphism_map[m]
        if T.morphisms[fm] != (F.object_map[d], F.object_map[c]):
            rep.fail("preserves-endpoints", f"{m} -> {fm}")
    for x in S.objects:
        if F.morphism_map[S.identity[x]] != T.identity[F.object_map[x]]:
            rep.fail("preserves-identities", x)
    for (g, f), gf in S.compose.items():
        if T.compose.get((F.morphism_map[g], F.morphism_map[f])) != F.morphism_map[gf]:
            rep.fail("preserves-composition", f"({g}, {f})")
    return rep


def _validate_nat(a: NatTransformation) -> Report:
    rep = Report(f"nat:{a.name or 'anonymous'}")
    F, G = a.source, a.target
    if F.source is not G.source or F.target is not G.target:
        raise MalformedEntity("natural transformation between incompatible functors")
    S, T = F.source, F.target
    for x in S.objects:
        comp = a.components.get(x)
        if comp is None or comp not in T.morphisms:
            raise MalformedEntity(f"component at {x!r} missing or unknown")
        if T.morphisms[comp] != (F.object_map[x], G.object_map[x]):
            rep.fail("component-endpoints", x)
    for m, (d, c) in S.morphisms.items():
        left = T.compose.get((a.components[c], F.morphism_map[m]))
        right = T.compose.get((G.morphism_map[m], a.components[d]))
        if left != right or left is None:
            rep.fail("naturality", m)
    return rep


# ---------------------------------------------------------------------------
# limits by enumeration


def terminal_object(C: FinCategory) -> str:
    """Smallest object receiving exactly one arrow from every object."""
    terminals = [x for x in C.objects
                 if all(len(C.hom(y, x)) == 1 for y in C.objects)]
    if not terminals:
        raise NoTerminal(f"{C!r} has no terminal object")
    return min(terminals)


def pullback(C: FinCategory, f: str, g: str) -> PullbackResult:
    """Pullback of the cospan f, g (cod f = cod g), by apex enumeration.

    Tie-break: smallest apex object id, then lexicographically smallest
    projection pair.
    """
    if f not in C.morphisms:
        raise UnknownMorphism(f)
    if g not in C.morphisms:
        raise UnknownMorphism(g)
    if C.cod(f) != C.cod(g):
        raise MalformedEntity(f"cospan mismatch: cod {f} != cod {g}")
    X, Y = C.dom(f), C.dom(g)
    cones = _cones(C, f, g)
    for P in C.objects:
        for p1 in C.hom(P, X):
            for p2 in C.hom(P, Y):
                if C.c(f, p1) != C.c(g, p2):
                    continue
                mediators = _universal(C, P, p1, p2, cones)
                if mediators is not None:
                    return PullbackResult(P, (p1, p2), mediators)
    raise NoPullback(f"no pullback of ({f}, {g}) in {C!r}")


def _cones(C, f, g):
    X, Y = C.dom(f), C.dom(g)
    out = []
    for Z in C.objects:
        for z1 in C.hom(Z, X):
            for z2 in C.hom(Z, Y):
                if C.c(f, z1) == C.c(g, z2):
                    out.append((Z, z1, z2))
    return out

def _universal(C, P, p1, p2, cones):
    mediators = {}
    for Z, z1, z2 in cones:
        ts = [t for t in C.hom(Z, P)
              if C.c(p1, t) == z1 and C.c(p2, t) == z2]
        if len(ts) != 1:
            return None
        mediators[(z1, z2)] = ts[0]
    return mediators


# ---------------------------------------------------------------------------
# derived categories


def derived_category(kind: str, C: FinCategory,
                     base: Optional[str] = None) -> tuple[FinCategory, FinFunctor]:
    """Arrow, sections, or slice category of C with its forgetful functor.

    arrow    objects are morphisms of C, morphisms are commuting squares,
             forgetful = cod.
    sections objects are pairs (s, f) with f∘s = id, morphisms are pairs of
             C-morphisms commuting with both structure maps, forgetful = cod.
    slice    objects are morphisms into `base`, morphisms commuting
             triangles, forgetful = dom.
    """
    if kind == "arrow":
        return _arrow_category(C)[:2]
    if kind == "sections":
        return _sections_category(C)[:2]
    if kind == "slice":
        if base is None:
            raise MissingBase("slice requires a base object")
        if base not in C.objects:
            raise UnknownObject(base)
        return _slice_category(C, base)[:2]
    raise MalformedEntity(f"unknown derived category kind {kind!r}")


def _arrow_category(C: FinCategory):
    objs = list(C.morphisms)
    mors, ident, comp = {}, {}, {}
    sq = {}
    for fo in objs:
        df, cf = C.morphisms[fo]
        for go in objs:
            dg, cg = C.morphisms[go]
            for a in C.hom(df, dg):
                ga = C.c(go, a)
                for b in C.hom(cf, cg):
                    if ga == C.c(b, fo):
                        mid = f"[{a};{b}|{fo}>{go}]"
                        mors[mid] = (fo, go)
                        sq[mid] = (a, b)
    for fo in objs:
        d, c = C.morphisms[fo]
        ident[fo] = f"[{C.identity[d]};{C.identity[c]}|{fo}>{fo}]"
    for m2, (d2, c2) in mors.items():
        a2, b2 = sq[m2]
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                a1, b1 = sq[m1]
                comp[(m2, m1)] = f"[{C.c(a2, a1)};{C.c(b2, b1)}|{d1}>{c2}]"
    A = FinCategory(objs, mors, ident, comp, name=f"arrow({C.name})")
    forget = FinFunctor(A, C, {fo: C.cod(fo) for fo in objs},
                        {m: sq[m][1] for m in mors}, name="cod")
    return A, forget, sq


def _sections_category(C: FinCategory):
    rep = _validate_category(C)   # sections require a validated source
    if not rep.passed:
        raise MalformedEntity(f"sections of an invalid category: {rep.summary()}")
    objs, data = [], {}
    for fo, (d, c) in C.morphisms.items():
        for s in C.hom(c, d):
            if C.c(fo, s) == C.identity[c]:
                oid = f"({s};{fo})"
                objs.append(oid)
                data[oid] = (s, fo)
    mors, ident, comp = {}, {}, {}
    pair = {}
    for o1 in objs:
        s1, f1 = data[o1]
        d1, c1 = C.morphisms[f1]
        for o2 in objs:
            s2, f2 = data[o2]
            d2, c2 = C.morphisms[f2]
            for a in C.hom(d1, d2):
                fa = C.c(f2, a)
                for b in C.hom(c1, c2):
                    if fa == C.c(b, f1) and C.c(a, s1) == C.c(s2, b):
                        mid = f"[{a};{b}|{o1}>{o2}]"
                        mors[mid] = (o1, o2)
                        pair[mid] = (a, b)
    for o in objs:
        s, f = data[o]
        d, c = C.morphisms[f]
        ident[o] = f"[{C.identity[d]};{C.identity[c]}|{o}>{o}]"
    for m2, (d2, c2) in mors.items():
        a2, b2 = pair[m2]
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                a1, b1 = pair[m1]
                comp[(m2, m1)] = f"[{C.c(a2, a1)};{C.c(b2, b1)}|{d1}>{c2}]"
    S = FinCategory(objs, mors, ident, comp, name=f"sections({C.name})")
    forget = FinFunctor(S, C, {o: C.cod(data[o][1]) for o in objs},
                        {m: pair[m][1] for m in mors}, name="cod∘U")
    return S, forget, data, pair


def _slice_category(C: FinCategory, base: str):
    objs = [m for m, (d, c) in C.morphisms.items() if c == base]
    mors, ident, comp = {}, {}, {}
    leg = {}
    for fo in objs:
        for go in objs:
            for h in C.hom(C.dom(fo), C.dom(go)):
                if C.c(go, h) == fo:
                    mid = f"[{h}|{fo}>{go}]"
                    mors[mid] = (fo, go)
                    leg[mid] = h
    for fo in objs:
        ident[fo] = f"[{C.identity[C.dom(fo)]}|{fo}>{fo}]"
    for m2, (d2, c2) in mors.items():
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                comp[(m2, m1)] = f"[{C.c(leg[m2], leg[m1])}|{d1}>{c2}]"
    S = FinCategory(objs, mors, ident, comp, name=f"slice({C.name}/{base})")
    forget = FinFunctor(S, C, {fo: C.dom(fo) for fo in objs},
                        {m: leg[m] for m in mors}, name="dom")
    return S, forget, leg


# ---------------------------------------------------------------------------
# small builders used throughout tests and fixtures


def terminal_category() -> FinCategory:
    return FinCategory(["*"], {"id*": ("*", "*")}, {"*": "id*"},
                       {("id*", "id*"): "id*"}, name="1")


def discrete_category(objs: Iterable[str], name: str = "discrete") -> FinCategory:
    objs = list(objs)
    mors = {f"id:{x}": (x, x) for x in objs}
    ident = {x: f"id:{x}" for x in objs}
    comp = {(i, i): i for i in mors}
    return FinCategory(objs, mors, ident, comp, name=name)


def walking_arrow() -> FinCategory:
    mors = {"id:a": ("a", "a"), "id:b": ("b", "b"), "ar": ("a", "b")}
    comp = {("id:a", "id:a"): "id:a", ("id:b", "id:b"): "id:b",
            ("ar", "id:a"): "ar", ("id:b", "ar"): "ar"}
    return FinCategory(["a", "b"], mors, {"a": "id:a", "b": "id:b"}, comp,
                       name="walking-arrow")


def poset_category(elements: Iterable[str], leq, name: str = "poset") -> FinCategory:
    """Thin category of a finite poset; leq(a, b) decides a ≤ b."""
    elems = list(elements)
    mors, ident, comp = {}, {}, {}
    for a in elems:
        for b in elems:
            if leq(a, b):
                mors[f"le[{a}<{b}]"] = (a, b)
    for a in elems:
        ident[a] = f"le[{a}<{a}]"
    for m2, (d2, c2) in mors.items():
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                comp[(m2, m1)] = f"le[{d1}<{c2}]"
    return FinCategory(elems, mors, ident, comp, name=name)
