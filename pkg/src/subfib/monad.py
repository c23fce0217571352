"""The subtyping monad: the comma endofunctor (p/p) on fibrations over a
fixed base, its lift to gcwfs, law checking by exhaustive evaluation, and
bounded iteration.

Total categories of comma fibrations reuse the vertical-morphism ids of the
source as object ids, so the §4-style judgement correspondence
(SubtypeJ in G ↔ TypeJ in T(G)) is the identity on identifiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import kernels
from .errors import NotAFibration, TooLarge
from .fincat import FinCategory, FinFunctor, NatTransformation
from .fibration import Fibration, is_fibration_morphism, max_objects_bound
from .gcwf import Gcwf, GcwfMorphism, check_gcwf, check_gcwf_morphism
from .report import Report
from .tables import FibTables


def comma_mor_id(m: str, n: str, v1: str, v2: str) -> str:
    return f"[{m};{n}|{v1}>{v2}]"


def term_obj_id(g: str, a: str) -> str:
    return f"({g};{a})"


@dataclass
class CommaFibration:
    """(p/p): objects are p-vertical arrows, morphisms commuting squares."""
    fibration: Fibration
    source: Fibration
    dom_proj: FinFunctor   # (f, A', A) -> A'
    cod_proj: FinFunctor   # (f, A', A) -> A
    mor_pair: dict         # morphism id -> (m, n) in the source total

    @property
    def total(self) -> FinCategory:
        return self.fibration.total


def T_fib(p: Fibration, max_objects: int | None = None) -> CommaFibration:
    """The comma fibration (p/p) with componentwise structure."""
    if not p.classify().is_fibration:
        raise NotAFibration(f"{p.p.name or 'p'} has missing cartesian lifts")
    bound = max_objects if max_objects is not None else max_objects_bound()
    ft = FibTables(p.total, p.base, p.p.object_map, p.p.morphism_map)
    verts, v1s, v2s, ms, ns = kernels.comma_squares(
        ft.total.arrays, ft.p_mor, ft.is_ident_base)
    if len(verts) > bound:
        raise TooLarge(f"(p/p) would have {len(verts)} objects (bound {bound})")
    vert_ids = [ft.total.mor_ids[v] for v in verts]
    T = p.total

    objs = list(vert_ids)
    mors, pair = {}, {}
    for k in range(len(ms)):
        v1, v2 = vert_ids[v1s[k]], vert_ids[v2s[k]]
        m, n = ft.total.mor_ids[ms[k]], ft.total.mor_ids[ns[k]]
        mid = comma_mor_id(m, n, v1, v2)
        mors[mid] = (v1, v2)
        pair[mid] = (m, n)
    ident = {v: comma_mor_id(T.identity[T.dom(v)], T.identity[T.cod(v)], v, v)
             for v in vert_ids}
    comp = {}
    for m2, (d2, c2) in mors.items():
        a2, b2 = pair[m2]
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                a1, b1 = pair[m1]
                comp[(m2, m1)] = comma_mor_id(T.c(a2, a1), T.c(b2, b1), d1, c2)
    total = FinCategory(objs, mors, ident, comp, name=f"({p.p.name}/{p.p.name})")
    q = FinFunctor(total, p.base,
                   {v: p.p_obj(T.dom(v)) for v in vert_ids},
                   {mid: p.p_mor(pair[mid][0]) for mid in mors},
                   name=f"{p.p.name}/{p.p.name}")
    cleavage = None
    if p.split_marked:
        cleavage = {}
        for v in vert_ids:
            gamma = p.p_obj(T.dom(v))
            for sigma in p.base.mors_into(gamma):
                sv = p.reindex_vertical(v, sigma)
                cleavage[(v, sigma)] = comma_mor_id(
                    p.cartesian_lift(T.dom(v), sigma),
                    p.cartesian_lift(T.cod(v), sigma), sv, v)
    fib = Fibration(q, cleavage, split_marked=p.split_marked)
    dom_proj = FinFunctor(total, T, {v: T.dom(v) for v in vert_ids},
                          {mid: pair[mid][0] for mid in mors}, name="dom")
    cod_proj = FinFunctor(total, T, {v: T.cod(v) for v in vert_ids},
                          {mid: pair[mid][1] for mid in mors}, name="cod")
    return CommaFibration(fib, p, dom_proj, cod_proj, pair)


def T_fib_morphism(H: FinFunctor, Tp: CommaFibration, Tq: CommaFibration) -> FinFunctor:
    """Functorial action of the comma construction on a fibration morphism."""
    omap = {v: H.on_mor(v) for v in Tp.total.objects}
    mmap = {}
    for mid, (v1, v2) in Tp.total.morphisms.items():
        m, n = Tp.mor_pair[mid]
        mmap[mid] = comma_mor_id(H.on_mor(m), H.on_mor(n), omap[v1], omap[v2])
    return FinFunctor(Tp.total, Tq.total, omap, mmap, name=f"T({H.name})")


def comma_unit(p: Fibration, Tp: CommaFibration) -> FinFunctor:
    """eta_p: p -> (p/p), sending each object to its identity."""
    T = p.total
    omap = {A: T.identity[A] for A in T.objects}
    mmap = {m: comma_mor_id(m, m, omap[T.dom(m)], omap[T.cod(m)])
            for m in T.morphisms}
    return FinFunctor(T, Tp.total, omap, mmap, name="eta")


def comma_mult_maps(p: Fibration, Tp: CommaFibration, TTp: CommaFibration
                    ) -> tuple[dict, dict]:
    """mu: TTp -> Tp by diagonal composition.

    A TTp-object is a square of p-verticals; it goes to its diagonal
    composite.  A TTp-morphism is a square of Tp-squares; it goes to the
    Tp-square with the outer components.
    """
    omap = {}
    for S in TTp.total.objects:         # S is a vertical Tp-morphism id
        m, n = Tp.mor_pair[S]
        v1, _v2 = Tp.total.morphisms[S]
        omap[S] = p.total.c(n, v1)
    mmap = {}
    for K, (S1, S2) in TTp.total.morphisms.items():
        M, N = TTp.mor_pair[K]          # Tp-morphisms
        a = Tp.mor_pair[M][0]
        d = Tp.mor_pair[N][1]
        mmap[K] = comma_mor_id(a, d, omap[S1], omap[S2])
    return omap, mmap


def check_monad_laws_fib(p: Fibration, max_objects: int | None = None) -> Report:
    """Unit and associativity of the (p/p) monad, by exhaustive evaluation.

    Unit laws are evaluated on every object and morphism of Tp; the
    associativity square on every object and morphism of T^3p, enumerated
    as squares of TTp data without materializing a composition table.
    """
    rep = Report(f"monad-fib:{p.p.name or 'p'}")
    Tp = T_fib(p, max_objects)
    TTp = T_fib(Tp.fibration, max_objects)

    eta = comma_unit(p, Tp)
    em = is_fibration_morphism(eta, p, Tp.fibration)
    if em.failures:
        rep.extend(em)

    mu_omap, mu_mmap = comma_mult_maps(p, Tp, TTp)
    bad = [K for K, img in mu_mmap.items() if img not in Tp.total.morphisms]
    if bad:
        rep.fail("mu-image", f"{len(bad)} images are not (p/p) morphisms")
        return rep
    mu = FinFunctor(TTp.total, Tp.total, mu_omap, mu_mmap, name="mu")
    mm = is_fibration_morphism(mu, TTp.fibration, Tp.fibration)
    if mm.failures:
        rep.extend(mm)

    # unit laws on every object and morphism of Tp
    Teta = T_fib_morphism(eta, Tp, TTp)
    etaT = comma_unit(Tp.fibration, TTp)
    for v in Tp.total.objects:
        if mu_omap[Teta.on_obj(v)] != v:
            rep.fail("unit-Teta-obj", v)
        if mu_omap[etaT.on_obj(v)] != v:
            rep.fail("unit-etaT-obj", v)
    for k in Tp.total.morphisms:
        if mu_mmap[Teta.on_mor(k)] != k:
            rep.fail("unit-Teta-mor", k)
        if mu_mmap[etaT.on_mor(k)] != k:
            rep.fail("unit-etaT-mor", k)

    # associativity: mu ∘ T(mu) = mu ∘ mu_T on T^3p
    TT = TTp.total
    ttfib = TTp.fibration
    t3_objs = [V for V in TT.morphisms if ttfib.is_vertical(V)]
    by_pair: dict = {}
    for K, dc in TT.morphisms.items():
        by_pair.setdefault(dc, []).append(K)

    def Tmu_obj(V: str) -> str:
        return mu_mmap[V]               # mu applied inside the components

    def muT_obj(V: str) -> str:
        M, N = TTp.mor_pair[V]
        S1, _S2 = TT.morphisms[V]
        return Tp.total.c(N, S1)        # the diagonal one level up

    for V in t3_objs:
        if mu_omap[Tmu_obj(V)] != mu_omap[muT_obj(V)]:
            rep.fail("assoc-obj", V)

    n_mor = 0
    for V1 in t3_objs:
        d1, c1 = TT.morphisms[V1]
        for V2 in t3_objs:
            d2, c2 = TT.morphisms[V2]
            for MM in by_pair.get((d1, d2), ()):
                pmm = ttfib.p_mor(MM)
                v2mm = TT.c(V2, MM)
                for NN in by_pair.get((c1, c2), ()):
                    if ttfib.p_mor(NN) != pmm or TT.c(NN, V1) != v2mm:
                        continue
                    n_mor += 1
                    lhs = mu_mmap[comma_mor_id(
                        mu_mmap[MM], mu_mmap[NN], Tmu_obj(V1), Tmu_obj(V2))]
                    a = TTp.mor_pair[MM][0]
                    d = TTp.mor_pair[NN][1]
                    rhs = mu_mmap[comma_mor_id(a, d, muT_obj(V1), muT_obj(V2))]
                    if lhs != rhs:
                        rep.fail("assoc-mor", f"({V1}, {V2}, {MM}, {NN})")
    rep.ok("assoc-coverage",
           f"{len(t3_objs)} T^3 objects, {n_mor} T^3 morphisms")
    return rep


# ---------------------------------------------------------------------------
# the lift to gcwfs


@dataclass
class GcwfMonadData:
    T_object: Gcwf
    SigmaBar: FinFunctor
    DeltaBar: FinFunctor
    unit: GcwfMorphism
    Tu: CommaFibration
    term_parts: dict          # term object id -> (g, a)
    term_pair: dict           # term morphism id -> (m, n)
    _mult: GcwfMorphism | None = field(default=None, repr=False)
    _TT: "GcwfMonadData | None" = field(default=None, repr=False)

    @property
    def TT(self) -> "GcwfMonadData":
        """T applied once more; built on demand for the multiplication."""
        if self._TT is None:
            self._TT = T_gcwf(self.T_object, verify=False)
        return self._TT

    @property
    def mult(self) -> GcwfMorphism:
        if self._mult is None:
            self._mult = _build_mult(self)
        return self._mult


def T_gcwf(G: Gcwf, max_objects: int | None = None, verify: bool = True
           ) -> GcwfMonadData:
    """T(G) = ((u/u), (Σ/u), Σ̄ ⊣ Δ̄), with Δ̄ through the factorization of Δ.

    The counit is assembled from the factorization; the unit at each term
    is recovered from the counit's universal property by search, which
    re-verifies uniqueness instead of assuming it.
    """
    U, Ud = G.u, G.udot
    TU, TUd = U.total, Ud.total
    Tu = T_fib(U, max_objects)
    bound = max_objects if max_objects is not None else max_objects_bound()

    # term fibration (Σ/u): objects (g, a) with g: Σa -> A vertical
    objs, obj_parts = [], {}
    for a in TUd.objects:
        sa = G.Sigma.on_obj(a)
        for g in TU.mors_from(sa):
            if U.is_vertical(g):
                oid = term_obj_id(g, a)
                objs.append(oid)
                obj_parts[oid] = (g, a)
    if len(objs) > bound:
        raise TooLarge(f"(Σ/u) would have {len(objs)} objects (bound {bound})")
    mors, pair, ident = {}, {}, {}
    for o1 in objs:
        g1, a1 = obj_parts[o1]
        for o2 in objs:
            g2, a2 = obj_parts[o2]
            for m in TUd.hom(a1, a2):
                sm = G.Sigma.on_mor(m)
                gm = TU.c(g2, sm)
                pm = Ud.p_mor(m)
                for n in TU.hom(TU.cod(g1), TU.cod(g2)):
                    if U.p_mor(n) == pm and TU.c(n, g1) == gm:
                        mid = comma_mor_id(m, n, o1, o2)
                        mors[mid] = (o1, o2)
                        pair[mid] = (m, n)
    for o in objs:
        g, a = obj_parts[o]
        ident[o] = comma_mor_id(TUd.identity[a], TU.identity[TU.cod(g)], o, o)
    comp = {}
    for m2, (d2, c2) in mors.items():
        a2, b2 = pair[m2]
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                a1, b1 = pair[m1]
                comp[(m2, m1)] = comma_mor_id(TUd.c(a2, a1), TU.c(b2, b1), d1, c2)
    term_total = FinCategory(objs, mors, ident, comp, name=f"(Σ/{U.p.name})")
    term_p = FinFunctor(term_total, G.base,
                        {o: Ud.p_obj(obj_parts[o][1]) for o in objs},
                        {mid: Ud.p_mor(pair[mid][0]) for mid in mors},
                        name=f"Σ/{U.p.name}")
    term_fib = Fibration(term_p)

    # Σ̄(g, a, A) = (g, Σa, A): on objects literally the witness g
    sig_obj = {o: obj_parts[o][0] for o in objs}
    sig_mor = {}
    for mid, (o1, o2) in mors.items():
        m, n = pair[mid]
        sig_mor[mid] = comma_mor_id(G.Sigma.on_mor(m), n,
                                    sig_obj[o1], sig_obj[o2])
        assert sig_mor[mid] in Tu.total.morphisms, sig_mor[mid]
    SigmaBar = FinFunctor(term_total, Tu.total, sig_obj, sig_mor, name="Σ̄")

    # Δ̄ through the vertical-cartesian factorization of Δf
    fact = {}
    for f in Tu.total.objects:
        fact[f] = Ud.factorize(G.Delta.on_mor(f))
    del_obj = {}
    for f in Tu.total.objects:
        vf, cf = fact[f]
        del_obj[f] = term_obj_id(G.Sigma.on_mor(vf),
                                 G.Delta.on_obj(TU.dom(f)))
        assert del_obj[f] in term_total.objects, del_obj[f]
    del_mor = {}
    for mid, (f1, f2) in Tu.total.morphisms.items():
        m, n = Tu.mor_pair[mid]
        vf1, cf1 = fact[f1]
        vf2, cf2 = fact[f2]
        target = TUd.c(G.Delta.on_mor(n), cf1)
        cands = [t for t in TUd.hom(TUd.cod(vf1), TUd.cod(vf2))
                 if TUd.c(cf2, t) == target]
        assert len(cands) == 1, (mid, cands)
        del_mor[mid] = comma_mor_id(G.Delta.on_mor(m), G.Sigma.on_mor(cands[0]),
                                    del_obj[f1], del_obj[f2])
        assert del_mor[mid] in term_total.morphisms, del_mor[mid]
    DeltaBar = FinFunctor(Tu.total, term_total, del_obj, del_mor, name="Δ̄")

    # counit (ε_{A'}, ε_A ∘ Σ(Δf)_c); unit recovered from its universal property
    eps_components = {}
    for f in Tu.total.objects:
        vf, cf = fact[f]
        top = G.eps.at(TU.dom(f))
        bot = TU.c(G.eps.at(TU.cod(f)), G.Sigma.on_mor(cf))
        eid = comma_mor_id(top, bot, sig_obj[del_obj[f]], f)
        assert eid in Tu.total.morphisms, eid
        eps_components[f] = eid
    eta_components = {}
    for o in objs:
        g, _a = obj_parts[o]
        cands = [k for k in term_total.hom(o, del_obj[g])
                 if Tu.total.c(eps_components[g], sig_mor[k])
                 == Tu.total.identity[g]]
        assert len(cands) == 1, (o, cands)
        eta_components[o] = cands[0]

    eta = NatTransformation(FinFunctor.identity(term_total),
                            SigmaBar.then(DeltaBar), eta_components, name="η̄")
    eps = NatTransformation(DeltaBar.then(SigmaBar),
                            FinFunctor.identity(Tu.total), eps_components,
                            name="ε̄")
    TG = Gcwf(G.base, Tu.fibration, term_fib, SigmaBar, DeltaBar, eta, eps,
              name=f"T({G.name})")
    if verify:
        chk = check_gcwf(TG)
        assert chk.passed, chk.render()

    # the monad unit G -> T(G): identity coercions
    unit_H = comma_unit(U, Tu)
    unit_Hdot_obj = {a: term_obj_id(TU.identity[G.Sigma.on_obj(a)], a)
                     for a in TUd.objects}
    unit_Hdot_mor = {}
    for m, (a1, a2) in TUd.morphisms.items():
        unit_Hdot_mor[m] = comma_mor_id(m, G.Sigma.on_mor(m),
                                        unit_Hdot_obj[a1], unit_Hdot_obj[a2])
        assert unit_Hdot_mor[m] in term_total.morphisms, unit_Hdot_mor[m]
    unit = GcwfMorphism(unit_H,
                        FinFunctor(TUd, term_total, unit_Hdot_obj,
                                   unit_Hdot_mor, name="unit·"),
                        name="unit")
    return GcwfMonadData(TG, SigmaBar, DeltaBar, unit, Tu, obj_parts, pair)


def check_counit_universal(G: Gcwf, TD: GcwfMonadData) -> Report:
    """Universal property of the counit of Σ̄ ⊣ Δ̄: every (h, k) out of
    Σ̄(term) into a type triple factors through exactly one term pair."""
    rep = Report("counit-universal")
    TG = TD.T_object
    term_total = TG.udot.total
    Tu_total = TG.u.total
    n_checked = 0
    for x in term_total.objects:
        sx = TG.Sigma.on_obj(x)
        for f in Tu_total.objects:
            for hk in Tu_total.hom(sx, f):
                n_checked += 1
                mediators = [
                    k for k in term_total.hom(x, TG.Delta.on_obj(f))
                    if Tu_total.c(TG.eps.at(f), TG.Sigma.on_mor(k)) == hk]
                if len(mediators) != 1:
                    rep.fail("mediator",
                             f"(h,k)={hk}: {len(mediators)} mediating pairs")
    rep.ok("coverage", f"{n_checked} test squares")
    return rep


def _build_mult(TD: GcwfMonadData) -> GcwfMorphism:
    """mult: T(T(G)) -> T(G) by diagonal composition on both components."""
    TT = TD.TT
    Tu = TD.Tu                 # (u/u)
    Tu2 = TT.Tu                # ((u/u)/(u/u))
    U0 = Tu.source             # the original u
    term1 = TD.T_object.udot.total
    term2 = TT.T_object.udot.total

    H_omap = {}
    for S in Tu2.total.objects:            # S: vertical Tu-morphism id
        m, n = Tu.mor_pair[S]
        v1, _v2 = Tu.total.morphisms[S]
        H_omap[S] = U0.total.c(n, v1)
        assert H_omap[S] in Tu.total.objects, H_omap[S]
    H_mmap = {}
    for K, (S1, S2) in Tu2.total.morphisms.items():
        M, N = Tu2.mor_pair[K]             # Tu-morphisms
        a = Tu.mor_pair[M][0]
        d = Tu.mor_pair[N][1]
        H_mmap[K] = comma_mor_id(a, d, H_omap[S1], H_omap[S2])
        assert H_mmap[K] in Tu.total.morphisms, H_mmap[K]
    H = FinFunctor(Tu2.total, Tu.total, H_omap, H_mmap, name="mult")

    Hd_omap, Hd_mmap = {}, {}
    for o in term2.objects:
        q, t = TT.term_parts[o]            # q: Σ̄t -> F vertical in Tu
        g, a = TD.term_parts[t]
        _q_top, q_bot = Tu.mor_pair[q]
        Hd_omap[o] = term_obj_id(U0.total.c(q_bot, g), a)
        assert Hd_omap[o] in term1.objects, Hd_omap[o]
    for mid, (o1, o2) in term2.morphisms.items():
        mm, nn = TT.term_pair[mid]         # mm in term1, nn in Tu
        m_inner = TD.term_pair[mm][0]
        n_outer = Tu.mor_pair[nn][1]
        Hd_mmap[mid] = comma_mor_id(m_inner, n_outer, Hd_omap[o1], Hd_omap[o2])
        assert Hd_mmap[mid] in term1.morphisms, Hd_mmap[mid]
    Hdot = FinFunctor(term2, term1, Hd_omap, Hd_mmap, name="mult·")
    return GcwfMorphism(H, Hdot, name="mult")


def _T_on_terms(TD: GcwfMonadData, TT: GcwfMonadData, m: GcwfMorphism
                ) -> tuple[dict, dict]:
    """Term component of T applied to a gcwf morphism out of the base gcwf:
    the term (g, a) goes to (H(g), Ḣ(a))."""
    term1 = TD.T_object.udot.total
    omap, mmap = {}, {}
    for o in term1.objects:
        g, a = TD.term_parts[o]
        omap[o] = term_obj_id(m.H.on_mor(g), m.Hdot.on_obj(a))
        assert omap[o] in TT.T_object.udot.total.objects, omap[o]
    for mid, (o1, o2) in term1.morphisms.items():
        mi, ni = TD.term_pair[mid]
        mmap[mid] = comma_mor_id(m.Hdot.on_mor(mi), m.H.on_mor(ni),
                                 omap[o1], omap[o2])
        assert mmap[mid] in TT.T_object.udot.total.morphisms, mmap[mid]
    return omap, mmap


def check_monad_laws_gcwf(G: Gcwf, max_objects: int | None = None) -> Report:
    """Unit/mult are gcwf morphisms; unit and associativity laws hold on
    both components, evaluated exhaustively on T(G) and T(T(G)) data."""
    rep = Report(f"monad-gcwf:{G.name or 'G'}")
    TD = T_gcwf(G, max_objects)
    TG = TD.T_object
    um = check_gcwf_morphism(G, TG, TD.unit)
    if um.failures:
        rep.extend(um)
    TT = TD.TT
    mult = TD.mult
    mm = check_gcwf_morphism(TT.T_object, TG, mult)
    if mm.failures:
        rep.extend(mm)

    # unit laws on both components of T(G)
    Tunit_H = T_fib_morphism(TD.unit.H, TD.Tu, TT.Tu)
    unitT = TT.unit
    for v in TG.u.total.objects:
        if mult.H.on_obj(Tunit_H.on_obj(v)) != v:
            rep.fail("unit-law-H-Tunit", v)
        if mult.H.on_obj(unitT.H.on_obj(v)) != v:
            rep.fail("unit-law-H-unitT", v)
    for k in TG.u.total.morphisms:
        if mult.H.on_mor(Tunit_H.on_mor(k)) != k:
            rep.fail("unit-law-H-Tunit-mor", k)
        if mult.H.on_mor(unitT.H.on_mor(k)) != k:
            rep.fail("unit-law-H-unitT-mor", k)
    Tunit_omap, Tunit_mmap = _T_on_terms(TD, TT, TD.unit)
    for o in TG.udot.total.objects:
        if mult.Hdot.on_obj(Tunit_omap[o]) != o:
            rep.fail("unit-law-Hdot-Tunit", o)
        if mult.Hdot.on_obj(unitT.Hdot.on_obj(o)) != o:
            rep.fail("unit-law-Hdot-unitT", o)
    for k in TG.udot.total.morphisms:
        if mult.Hdot.on_mor(Tunit_mmap[k]) != k:
            rep.fail("unit-law-Hdot-Tunit-mor", k)
        if mult.Hdot.on_mor(unitT.Hdot.on_mor(k)) != k:
            rep.fail("unit-law-Hdot-unitT-mor", k)

    # associativity, type component: the underlying comma monad on u
    fib_rep = check_monad_laws_fib(G.u, max_objects)
    if fib_rep.failures:
        rep.extend(fib_rep)
    else:
        rep.ok("assoc-type-side", "check_monad_laws_fib on u")

    # associativity, term component: T^3 terms are pairs (Q, oo) with
    # oo a T^2 term and Q a vertical morphism of (u/u)/(u/u) out of Σ̄̄(oo)
    term2 = TT.T_object.udot.total
    Tu = TD.Tu
    Tu2 = TT.Tu

    def Tmu_term_obj(Q, oo):
        # T(mult) on a T^3 term: apply mult to both parts
        return term_obj_id(mult.H.on_mor(Q), mult.Hdot.on_obj(oo))

    def muT_term_obj(Q, oo):
        # mult at level T(G): diagonal in (u/u), keeping the inner term
        q_oo, t_oo = TT.term_parts[oo]
        return term_obj_id(Tu.total.c(Tu2.mor_pair[Q][1], q_oo), t_oo)

    t3_terms = []
    for oo in term2.objects:
        sx = TT.T_object.Sigma.on_obj(oo)      # a (u/u)-vertical morphism
        for Q in Tu2.total.mors_from(sx):
            if Tu2.fibration.is_vertical(Q):
                t3_terms.append((Q, oo))
    for Q, oo in t3_terms:
        lhs = mult.Hdot.on_obj(Tmu_term_obj(Q, oo))
        rhs = mult.Hdot.on_obj(muT_term_obj(Q, oo))
        if lhs != rhs:
            rep.fail("assoc-term-obj", f"({Q}, {oo})")
    n_mor = 0
    term2_hom = term2._homs()
    for (Q1, oo1) in t3_terms:
        F1 = Tu2.total.cod(Q1)
        for (Q2, oo2) in t3_terms:
            F2 = Tu2.total.cod(Q2)
            for mm in term2_hom.get((oo1, oo2), ()):
                smm = TT.T_object.Sigma.on_mor(mm)
                qmm = Tu2.total.c(Q2, smm)
                pm = TT.T_object.udot.p_mor(mm)
                for nn in Tu2.total.hom(F1, F2):
                    if Tu2.fibration.p_mor(nn) != pm or Tu2.total.c(nn, Q1) != qmm:
                        continue
                    n_mor += 1
                    lk = comma_mor_id(mult.Hdot.on_mor(mm), mult.H.on_mor(nn),
                                      Tmu_term_obj(Q1, oo1), Tmu_term_obj(Q2, oo2))
                    rk = comma_mor_id(TT.term_pair[mm][0], Tu2.mor_pair[nn][1],
                                      muT_term_obj(Q1, oo1), muT_term_obj(Q2, oo2))
                    if lk not in term2.morphisms or rk not in term2.morphisms:
                        rep.fail("assoc-term-mor-image",
                                 f"({Q1},{oo1})->({Q2},{oo2})")
                        continue
                    if mult.Hdot.on_mor(lk) != mult.Hdot.on_mor(rk):
                        rep.fail("assoc-term-mor", f"({Q1},{oo1})->({Q2},{oo2})")
    rep.ok("assoc-term-coverage",
           f"{len(t3_terms)} T^3 terms, {n_mor} T^3 term morphisms")
    return rep


def iterate(G: Gcwf, n: int, max_objects: int | None = None) -> Gcwf:
    """n-fold application of T_gcwf, n <= 2."""
    if n > 2:
        raise TooLarge("iteration is capped at n = 2")
    out = G
    for _ in range(n):
        out = T_gcwf(out, max_objects).T_object
    return out
