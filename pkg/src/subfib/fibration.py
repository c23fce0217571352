"""Cartesian structure on validated functors.

A Fibration wraps a functor p: E -> B together with a lazily computed table
of cartesianness flags (decided by brute force over diagram (1)-style
factorizations) and an optional cleavage of chosen lifts.  The Grothendieck
correspondence with strict indexed categories is implemented exactly at
finite scale: `indexed_of(grothendieck(X)) == X` on the nose, and
`grothendieck(indexed_of(F))` is isomorphic to F.

Caches (flags, searched cleavage entries, fibers) are write-once and
idempotent; everything else is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .errors import (MalformedEntity, MismatchedBase, NoLift, NonSplitCleavage,
                     NonStrict, TooLarge, UnknownMorphism, UnknownObject)
from .fincat import FinCategory, FinFunctor, validate
from .report import Report
from .tables import FibTables
import os


def max_objects_bound() -> int:
    """Enumeration guard; adjustable via SUBFIB_MAX_OBJECTS (default 512)."""
    return int(os.environ.get("SUBFIB_MAX_OBJECTS", "512"))


@dataclass(frozen=True)
class Classification:
    is_fibration: bool
    split: bool
    faithful: bool
    discrete: bool


class Fibration:
    """A functor p: E -> B with cartesianness flags and an optional cleavage."""

    __slots__ = ("p", "cleavage", "split_marked", "_flags", "_fibtables",
                 "_fibers", "origin_indexed", "origin_names")

    def __init__(self, p: FinFunctor, cleavage: dict | None = None,
                 split_marked: bool = False):
        self.p = p
        self.cleavage = dict(cleavage) if cleavage is not None else None
        self.split_marked = split_marked
        self._flags = None
        self._fibtables = None
        self._fibers = {}
        # set by grothendieck() so indexed_of can restore original names
        self.origin_indexed = None
        self.origin_names = None

    # -- basics --

    @property
    def total(self) -> FinCategory:
        return self.p.source

    @property
    def base(self) -> FinCategory:
        return self.p.target

    def p_obj(self, x: str) -> str:
        return self.p.on_obj(x)

    def p_mor(self, m: str) -> str:
        return self.p.on_mor(m)

    def is_vertical(self, m: str) -> bool:
        return self.base.is_identity(self.p.on_mor(m))

    def vertical_morphisms(self) -> list[str]:
        return sorted(m for m in self.total.morphisms if self.is_vertical(m))

    def _tables(self) -> FibTables:
        if self._fibtables is None:
            self._fibtables = FibTables(self.total, self.base,
                                        self.p.object_map, self.p.morphism_map)
        return self._fibtables

    # -- cartesianness --

    @property
    def cartesian_flags(self) -> dict:
        """Morphism id -> brute-force cartesianness; computed once."""
        if self._flags is None:
            ft = self._tables()
            arr = kernels.cartesian_flags(ft.total.arrays, ft.base.arrays,
                                          ft.p_obj, ft.p_mor)
            self._flags = {m: bool(arr[i]) for i, m in enumerate(ft.total.mor_ids)}
        return self._flags

    def is_cartesian(self, s: str) -> bool:
        if s not in self.total.morphisms:
            raise UnknownMorphism(s)
        return self.cartesian_flags[s]

    def cartesian_lift(self, A: str, sigma: str) -> str:
        """Chosen lift of sigma at A; searches (smallest id) and memoizes."""
        if A not in self.total.objects:
            raise UnknownObject(A)
        if self.base.cod(sigma) != self.p.on_obj(A):
            raise MalformedEntity(f"cod({sigma!r}) != p({A!r})")
        if self.cleavage is not None and (A, sigma) in self.cleavage:
            return self.cleavage[(A, sigma)]
        flags = self.cartesian_flags
        for s in self.total.mors_into(A):  # sorted: smallest id wins
            if self.p.on_mor(s) == sigma and flags[s]:
                if self.cleavage is None:
                    self.cleavage = {}
                self.cleavage.setdefault((A, sigma), s)
                return self.cleavage[(A, sigma)]
        raise NoLift(f"no cartesian lift of {sigma!r} at {A!r}")

    def filler(self, s: str, r: str, tau: str) -> str:
        """The unique t over tau with s∘t = r, for cartesian s (diagram (1))."""
        T = self.total
        ts = [t for t in T.hom(T.dom(r), T.dom(s))
              if self.p.on_mor(t) == tau and T.c(s, t) == r]
        if len(ts) != 1:
            raise NoLift(f"filler through {s!r} for {r!r} over {tau!r}: "
                         f"{len(ts)} candidates")
        return ts[0]

    def factorize(self, r: str) -> tuple[str, str]:
        """r = cartesian ∘ vertical with the cartesian part the chosen lift of p(r)."""
        c = self.cartesian_lift(self.total.cod(r), self.p.on_mor(r))
        v = self.filler(c, r, self.base.id_of(self.p.on_obj(self.total.dom(r))))
        return v, c

    def reindex_vertical(self, f: str, sigma: str) -> str:
        """sigma*f: the unique vertical square-filler between the chosen lifts."""
        T = self.total
        if not self.is_vertical(f):
            raise MalformedEntity(f"{f!r} is not vertical")
        s_dom = self.cartesian_lift(T.dom(f), sigma)
        s_cod = self.cartesian_lift(T.cod(f), sigma)
        r = T.c(f, s_dom)
        return self.filler(s_cod, r, self.base.id_of(self.base.dom(sigma)))

    # -- fibers --

    def fiber(self, gamma: str) -> FinCategory:
        if gamma not in self.base.objects:
            raise UnknownObject(gamma)
        if gamma not in self._fibers:
            T = self.total
            objs = [x for x in T.objects if self.p.on_obj(x) == gamma]
            idg = self.base.id_of(gamma)
            mors = {m: dc for m, dc in T.morphisms.items()
                    if self.p.on_mor(m) == idg}
            ident = {x: T.identity[x] for x in objs}
            comp = {(g, f): gf for (g, f), gf in T.compose.items()
                    if g in mors and f in mors}
            self._fibers[gamma] = FinCategory(objs, mors, ident, comp,
                                              name=f"fiber({gamma})")
        return self._fibers[gamma]

    # -- classification --

    def classify(self) -> Classification:
        flags = self.cartesian_flags
        T, B = self.total, self.base
        is_fib = True
        for A in T.objects:
            pa = self.p.on_obj(A)
            for sigma in B.mors_into(pa):
                if not any(self.p.on_mor(s) == sigma and flags[s]
                           for s in T.mors_into(A)):
                    is_fib = False
                    break
            if not is_fib:
                break
        verts = self.vertical_morphisms()
        parallel = {}
        for v in verts:
            parallel.setdefault(T.morphisms[v], []).append(v)
        faithful = all(len(vs) == 1 for vs in parallel.values())
        discrete = all(T.is_identity(v) for v in verts)
        return Classification(is_fib, self._split_ok(), faithful, discrete)

    def _split_ok(self) -> bool:
        return self.splitness_report().passed

    def splitness_report(self) -> Report:
        """Cleavage totality, identity lifts, and composition of chosen lifts."""
        rep = Report("splitness")
        if self.cleavage is None:
            rep.fail("cleavage", "no cleavage present")
            return rep
        T, B = self.total, self.base
        flags = self.cartesian_flags
        for A in T.objects:
            pa = self.p.on_obj(A)
            for sigma in B.mors_into(pa):
                ent = self.cleavage.get((A, sigma))
                if ent is None:
                    rep.fail("total", f"no entry at ({A}, {sigma})")
                    continue
                if T.cod(ent) != A or self.p.on_mor(ent) != sigma:
                    rep.fail("well-placed", f"entry at ({A}, {sigma})")
                if not flags[ent]:
                    rep.fail("cartesian", f"entry at ({A}, {sigma})")
        if not rep.passed:
            return rep
        for A in T.objects:
            pa = self.p.on_obj(A)
            if self.cleavage[(A, B.id_of(pa))] != T.identity[A]:
                rep.fail("identity-lift", A)
        for A in T.objects:
            pa = self.p.on_obj(A)
            for sigma in B.mors_into(pa):
                s1 = self.cleavage[(A, sigma)]
                A1 = T.dom(s1)
                for tau in B.mors_into(B.dom(sigma)):
                    s2 = self.cleavage[(A1, tau)]
                    if T.c(s1, s2) != self.cleavage[(A, B.c(sigma, tau))]:
                        rep.fail("composition",
                                 f"lifts at ({A}, {sigma}∘{tau}) do not compose")
        return rep

    def __repr__(self):
        return f"<Fibration {self.p.name or 'p'}: {self.total!r} over {self.base!r}>"


# ---------------------------------------------------------------------------
# strict indexed categories and the Grothendieck correspondence


@dataclass(frozen=True)
class IndexedCategory:
    base: FinCategory
    fiber: dict      # base object -> FinCategory
    reindex: dict    # base morphism -> FinFunctor fiber(cod) -> fiber(dom)
    name: str = field(default="", compare=False)

    def strictness_report(self) -> Report:
        rep = Report(f"indexed:{self.name or 'anonymous'}")
        B = self.base
        for x in B.objects:
            if x not in self.fiber:
                raise MalformedEntity(f"no fiber at {x!r}")
        for m in B.morphisms:
            if m not in self.reindex:
                raise MalformedEntity(f"no reindexing at {m!r}")
        for m, (d, c) in B.morphisms.items():
            F = self.reindex[m]
            if F.source is not self.fiber[c] and F.source != self.fiber[c]:
                rep.fail("reindex-source", m)
            if F.target is not self.fiber[d] and F.target != self.fiber[d]:
                rep.fail("reindex-target", m)
            if validate(F).failures:
                rep.fail("reindex-functorial", m)
        for x in B.objects:
            F = self.reindex[B.id_of(x)]
            if any(F.object_map[a] != a for a in self.fiber[x].objects) or \
               any(F.morphism_map[v] != v for v in self.fiber[x].morphisms):
                rep.fail("reindex-identity", x)
        for (g, f), gf in self.base.compose.items():
            left = self.reindex[gf]
            right = self.reindex[g].then(self.reindex[f])
            if left.object_map != right.object_map or \
               left.morphism_map != right.morphism_map:
                rep.fail("reindex-composition", f"({g}, {f})")
        return rep


def groth_obj_id(gamma: str, a: str) -> str:
    return f"{gamma}|{a}"


def groth_mor_id(sigma: str, v: str, a: str) -> str:
    return f"[{sigma};{v}>{a}]"


def grothendieck(X: IndexedCategory, max_objects: int | None = None) -> Fibration:
    """Total category of pairs, with the canonical split cleavage."""
    rep = X.strictness_report()
    if not rep.passed:
        raise NonStrict(rep.render())
    B = X.base
    bound = max_objects if max_objects is not None else max_objects_bound()
    n_obj = sum(len(X.fiber[x].objects) for x in B.objects)
    if n_obj > bound:
        raise TooLarge(f"total category would have {n_obj} objects (bound {bound})")

    objs, obj_origin = [], {}
    for gamma in B.objects:
        for a in X.fiber[gamma].objects:
            oid = groth_obj_id(gamma, a)
            objs.append(oid)
            obj_origin[oid] = (gamma, a)
    mors, mor_origin, ident = {}, {}, {}
    for sigma, (theta, gamma) in B.morphisms.items():
        Fs = X.reindex[sigma]
        fib_t = X.fiber[theta]
        for a in X.fiber[gamma].objects:
            ra = Fs.on_obj(a)
            for v in fib_t.mors_into(ra):
                mid = groth_mor_id(sigma, v, a)
                mors[mid] = (groth_obj_id(theta, fib_t.dom(v)),
                             groth_obj_id(gamma, a))
                mor_origin[mid] = (sigma, v, a)
    for gamma in B.objects:
        for a in X.fiber[gamma].objects:
            ident[groth_obj_id(gamma, a)] = groth_mor_id(
                B.id_of(gamma), X.fiber[gamma].id_of(a), a)
    comp = {}
    for m2, (sigma, v, a) in mor_origin.items():
        for m1, (tau, w, a1) in mor_origin.items():
            if mors[m1][1] != mors[m2][0]:
                continue
            xi = B.dom(tau)
            rv = X.reindex[tau].on_mor(v)
            comp[(m2, m1)] = groth_mor_id(B.c(sigma, tau),
                                          X.fiber[xi].c(rv, w), a)
    total = FinCategory(objs, mors, ident, comp, name=f"∫{X.name}")
    p = FinFunctor(total, B,
                   {o: obj_origin[o][0] for o in objs},
                   {m: mor_origin[m][0] for m in mors}, name="p")
    cleavage = {}
    for oid, (gamma, a) in obj_origin.items():
        for sigma in B.mors_into(gamma):
            ra = X.reindex[sigma].on_obj(a)
            theta = B.dom(sigma)
            cleavage[(oid, sigma)] = groth_mor_id(
                sigma, X.fiber[theta].id_of(ra), a)
    F = Fibration(p, cleavage, split_marked=True)
    F.origin_indexed = X
    F.origin_names = (obj_origin, mor_origin)
    return F


def indexed_of(F: Fibration) -> IndexedCategory:
    """Fibers and cleavage-induced reindexings of a split fibration.

    When F was produced by grothendieck(), the original identifiers are
    restored so that the round trip is the identity on strict data.
    """
    rep = F.splitness_report()
    if not rep.passed:
        raise NonSplitCleavage(rep.render())
    B = F.base
    rename_obj = {}
    rename_mor = {}
    if F.origin_names is not None:
        obj_origin, mor_origin = F.origin_names
        rename_obj = {o: a for o, (g, a) in obj_origin.items()}
        rename_mor = {m: v for m, (s, v, a) in mor_origin.items()
                      if B.is_identity(s)}
    fibers = {}
    for gamma in B.objects:
        fib = F.fiber(gamma)
        if rename_obj:
            fib = _rename_category(fib, rename_obj, rename_mor,
                                   name=f"fiber({gamma})")
        fibers[gamma] = fib
    reindex = {}
    for sigma, (theta, gamma) in B.morphisms.items():
        omap, mmap = {}, {}
        for A in F.fiber(gamma).objects:
            rA = F.total.dom(F.cleavage[(A, sigma)])
            omap[rename_obj.get(A, A)] = rename_obj.get(rA, rA)
        for v in F.fiber(gamma).morphisms:
            rv = F.reindex_vertical(v, sigma)
            mmap[rename_mor.get(v, v)] = rename_mor.get(rv, rv)
        reindex[sigma] = FinFunctor(fibers[gamma], fibers[theta], omap, mmap,
                                    name=f"{sigma}*")
    return IndexedCategory(B, fibers, reindex, name=f"P({F.p.name})")


def _rename_category(C: FinCategory, rn_obj: dict, rn_mor: dict,
                     name: str = "") -> FinCategory:
    ro = lambda x: rn_obj.get(x, x)
    rm = lambda m: rn_mor.get(m, m)
    return FinCategory(
        [ro(x) for x in C.objects],
        {rm(m): (ro(d), ro(c)) for m, (d, c) in C.morphisms.items()},
        {ro(x): rm(i) for x, i in C.identity.items()},
        {(rm(g), rm(f)): rm(gf) for (g, f), gf in C.compose.items()},
        name=name or C.name)


def opposite_category(C: FinCategory, name: str = "") -> FinCategory:
    """Same morphism identifiers, endpoints swapped, composition transposed."""
    return FinCategory(
        C.objects,
        {m: (c, d) for m, (d, c) in C.morphisms.items()},
        dict(C.identity),
        {(g, f): gf for (f, g), gf in C.compose.items()},
        name=name or f"{C.name}^op")


def vertical_opposite(F: Fibration) -> Fibration:
    """Same cartesian arrows, fiberwise-reversed vertical arrows."""
    X = indexed_of(F)
    Xop = IndexedCategory(
        X.base,
        {g: opposite_category(fib, name=f"{fib.name}^op")
         for g, fib in X.fiber.items()},
        {s: FinFunctor(opposite_category(X.fiber[X.base.cod(s)]),
                       opposite_category(X.fiber[X.base.dom(s)]),
                       dict(X.reindex[s].object_map),
                       dict(X.reindex[s].morphism_map),
                       name=X.reindex[s].name)
         for s in X.base.morphisms},
        name=f"{X.name}^vop")
    return grothendieck(Xop)


def fibred_product(F: Fibration, G: Fibration, along: tuple[FinFunctor, FinFunctor]
                   ) -> tuple[FinCategory, tuple[FinFunctor, FinFunctor]]:
    """Pairs agreeing in a common target fibration, with projections.

    `along` is a cospan (H: total(F) -> total(K), K2: total(G) -> total(K));
    both legs must commute with the projections to the common base.
    """
    H, K2 = along
    if H.source is not F.total or K2.source is not G.total:
        raise MismatchedBase("cospan legs must start at the given totals")
    if H.target is not K2.target:
        raise MismatchedBase("cospan legs must share a target")
    if F.base != G.base:
        raise MismatchedBase("fibred product requires a common base")
    objs, mors, ident, comp = [], {}, {}, {}
    pair_obj, pair_mor = {}, {}
    for x in F.total.objects:
        for y in G.total.objects:
            if H.on_obj(x) == K2.on_obj(y):
                oid = f"({x},{y})"
                objs.append(oid)
                pair_obj[oid] = (x, y)
    for m in F.total.morphisms:
        hm = H.on_mor(m)
        for n in G.total.morphisms:
            if hm == K2.on_mor(n):
                mid = f"({m},{n})"
                dm, cm = F.total.morphisms[m]
                dn, cn = G.total.morphisms[n]
                mors[mid] = (f"({dm},{dn})", f"({cm},{cn})")
                pair_mor[mid] = (m, n)
    for oid, (x, y) in pair_obj.items():
        ident[oid] = f"({F.total.identity[x]},{G.total.identity[y]})"
    for m2, (d2, c2) in mors.items():
        a2, b2 = pair_mor[m2]
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                a1, b1 = pair_mor[m1]
                comp[(m2, m1)] = f"({F.total.c(a2, a1)},{G.total.c(b2, b1)})"
    P = FinCategory(objs, mors, ident, comp,
                    name=f"{F.p.name}×{G.p.name}")
    proj1 = FinFunctor(P, F.total, {o: pair_obj[o][0] for o in objs},
                       {m: pair_mor[m][0] for m in mors}, name="pr1")
    proj2 = FinFunctor(P, G.total, {o: pair_obj[o][1] for o in objs},
                       {m: pair_mor[m][1] for m in mors}, name="pr2")
    return P, (proj1, proj2)


def identity_fibration(B: FinCategory) -> Fibration:
    """id: B -> B with its (split) identity cleavage."""
    p = FinFunctor.identity(B, name=f"id_{B.name}")
    cleavage = {(x, s): s for x in B.objects for s in B.mors_into(x)}
    return Fibration(p, cleavage, split_marked=False)


def base_pair_fibration(F: Fibration, G: Fibration) -> tuple[Fibration, tuple[FinFunctor, FinFunctor]]:
    """Same-context pairs (x, y) as a fibration over the common base."""
    I = identity_fibration(F.base)
    Hp = FinFunctor(F.total, F.base, dict(F.p.object_map),
                    dict(F.p.morphism_map), name=F.p.name)
    Kp = FinFunctor(G.total, G.base, dict(G.p.object_map),
                    dict(G.p.morphism_map), name=G.p.name)
    P, (pr1, pr2) = fibred_product(F, G, (Hp, Kp))
    p = FinFunctor(P, F.base,
                   {o: F.p.on_obj(pr1.on_obj(o)) for o in P.objects},
                   {m: F.p.on_mor(pr1.on_mor(m)) for m in P.morphisms},
                   name=f"({F.p.name}×{G.p.name})")
    return Fibration(p), (pr1, pr2)


def is_fibration_morphism(H: FinFunctor, F: Fibration, G: Fibration) -> Report:
    """Functor over the (shared) base that preserves cartesian morphisms."""
    rep = Report(f"fibmor:{H.name or 'H'}")
    errs = validate(H)
    if errs.failures:
        rep.extend(errs)
    for x in F.total.objects:
        if G.p.on_obj(H.on_obj(x)) != F.p.on_obj(x):
            rep.fail("over-base-objects", x)
    for m in F.total.morphisms:
        if G.p.on_mor(H.on_mor(m)) != F.p.on_mor(m):
            rep.fail("over-base-morphisms", m)
    fl_F, fl_G = F.cartesian_flags, G.cartesian_flags
    for m in F.total.morphisms:
        if fl_F[m] and not fl_G[H.on_mor(m)]:
            rep.fail("preserves-cartesian", m)
    return rep
