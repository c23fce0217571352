"""The example gcwf families: kernel-pair, subobject, and doctrine models,
plus the finite generators feeding them.

The Lindenbaum-Tarski doctrine is truncated to hand-specified finite
Heyting-algebra fibers (Kripke upset algebras), which preserves every
checkable property at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import NoPullback, NotFaithful, TooLarge
from .fincat import (FinCategory, FinFunctor, NatTransformation,
                     _arrow_category, _sections_category, _slice_category,
                     poset_category, pullback)
from .fibration import Fibration, IndexedCategory, grothendieck
from .gcwf import Gcwf
from .report import Report


# ---------------------------------------------------------------------------
# finite sets


def finset_obj(n: int) -> str:
    return str(n)


def finset_mor(d: int, c: int, vals: tuple[int, ...]) -> str:
    return f"{d}>{c}|{''.join(map(str, vals))}"


def finset_skeleton(n: int) -> FinCategory:
    """Skeletal finite sets on objects 0..n with all functions."""
    if n > 4:
        raise TooLarge(f"finset_skeleton({n}): composition table would blow up")
    objs = [finset_obj(k) for k in range(n + 1)]
    mors, ident = {}, {}
    fun = {}
    for d in range(n + 1):
        for c in range(n + 1):
            if d == 0:
                mid = finset_mor(d, c, ())
                mors[mid] = (finset_obj(d), finset_obj(c))
                fun[mid] = (d, c, ())
            else:
                for vals in product(range(c), repeat=d):
                    mid = finset_mor(d, c, vals)
                    mors[mid] = (finset_obj(d), finset_obj(c))
                    fun[mid] = (d, c, vals)
    for k in range(n + 1):
        ident[finset_obj(k)] = finset_mor(k, k, tuple(range(k)))
    comp = {}
    for g, (dg, cg, vg) in fun.items():
        for f, (df, cf, vf) in fun.items():
            if cf == dg:
                comp[(g, f)] = finset_mor(df, cg, tuple(vg[vf[i]] for i in range(df)))
    return FinCategory(objs, mors, ident, comp, name=f"FinSet<= {n}")


# ---------------------------------------------------------------------------
# kernel-pair gcwf: types are arrows, terms are sections


def _check_all_pullbacks(C: FinCategory) -> None:
    for f, (df, cf) in C.morphisms.items():
        for g, (dg, cg) in C.morphisms.items():
            if cf == cg:
                try:
                    pullback(C, f, g)
                except NoPullback:
                    raise NoPullback(
                        f"{C.name or 'category'} lacks the pullback of "
                        f"({f!r}, {g!r})") from None


def kernel_pair_gcwf(C: FinCategory) -> Gcwf:
    """(cod, cod∘U, U ⊣ K) over a category with all pullbacks.

    Context extension of a type f: B -> Γ is its kernel pair K_f with the
    diagonal section d(f); the counit component at f is the cartesian
    square built from pullback(f, f).
    """
    _check_all_pullbacks(C)
    arrow, cod_forget, sq = _arrow_category(C)
    sections, secs_forget, sec_data, sec_pair = _sections_category(C)
    u = Fibration(cod_forget)
    udot = Fibration(secs_forget)

    def square_id(a, b, f, g):
        mid = f"[{a};{b}|{f}>{g}]"
        assert mid in arrow.morphisms, mid
        return mid

    def secmor_id(a, b, o1, o2):
        mid = f"[{a};{b}|{o1}>{o2}]"
        assert mid in sections.morphisms, mid
        return mid

    # Sigma = U: forget the section
    sig_obj = {o: sec_data[o][1] for o in sections.objects}
    sig_mor = {}
    for m, (o1, o2) in sections.morphisms.items():
        a, b = sec_pair[m]
        sig_mor[m] = square_id(a, b, sig_obj[o1], sig_obj[o2])
    Sigma = FinFunctor(sections, arrow, sig_obj, sig_mor, name="U")

    # Delta = K: kernel pairs with diagonal sections
    kp = {}
    for f in arrow.objects:
        pb = pullback(C, f, f)
        p1, p2 = pb.projections
        X = C.dom(f)
        diag = pb.mediators[(C.identity[X], C.identity[X])]
        kp[f] = (pb, diag, p1, p2)
    del_obj, del_mor = {}, {}
    for f in arrow.objects:
        pb, diag, p1, p2 = kp[f]
        del_obj[f] = f"({diag};{p1})"
        assert del_obj[f] in sections.objects, del_obj[f]
    for m, (f, g) in arrow.morphisms.items():
        a, b = sq[m]
        pbf, diagf, p1f, p2f = kp[f]
        pbg, diagg, p1g, p2g = kp[g]
        med = pbg.mediators[(C.c(a, p1f), C.c(a, p2f))]
        del_mor[m] = secmor_id(med, a, del_obj[f], del_obj[g])
    Delta = FinFunctor(arrow, sections, del_obj, del_mor, name="K")

    eta_components = {}
    for o in sections.objects:
        s, f = sec_data[o]
        pb, diag, p1, p2 = kp[f]
        X = C.dom(f)
        a = pb.mediators[(C.c(s, f), C.identity[X])]
        eta_components[o] = secmor_id(a, s, o, del_obj[f])
    eps_components = {}
    for f in arrow.objects:
        pb, diag, p1, p2 = kp[f]
        eps_components[f] = square_id(p2, f, p1, f)

    eta = NatTransformation(FinFunctor.identity(sections), Sigma.then(Delta),
                            eta_components, name="eta")
    eps = NatTransformation(Delta.then(Sigma), FinFunctor.identity(arrow),
                            eps_components, name="eps")
    return Gcwf(C, u, udot, Sigma, Delta, eta, eps,
                name=f"kernel-pair({C.name})")


# ---------------------------------------------------------------------------
# subobject gcwf over finite sets


def subobject_gcwf(n: int) -> Gcwf:
    """Slices over Ω = 2 and over 1 for skeletal finite sets of size <= n.

    The equivalence E ≃ E/1 is realized identity-on-objects, so the term
    fibration is the identity fibration on E and Σ_⊤ is literally
    postcomposition with truth.
    """
    if n > 4:
        raise TooLarge(f"subobject_gcwf({n}): table blow-up")
    if n < 2:
        raise TooLarge(f"subobject_gcwf({n}): needs the 2-element object Ω")
    E = finset_skeleton(n)
    omega = finset_obj(2)
    slice_cat, dom_forget, leg = _slice_category(E, omega)
    u = Fibration(dom_forget)
    udot = Fibration(FinFunctor.identity(E, name="E/1"))

    def const_true(k: int) -> str:
        return finset_mor(k, 2, tuple(1 for _ in range(k)))

    sig_obj = {finset_obj(k): const_true(k) for k in range(n + 1)}
    sig_mor = {}
    for h, (a, b) in E.morphisms.items():
        sig_mor[h] = f"[{h}|{sig_obj[a]}>{sig_obj[b]}]"
    Sigma = FinFunctor(E, slice_cat, sig_obj, sig_mor, name="Sigma_top")

    def parse_pred(phi: str) -> tuple[int, tuple[int, ...]]:
        head, vals = phi.split("|", 1)
        d = int(head.split(">", 1)[0])
        return d, tuple(int(ch) for ch in vals)

    compr, incl = {}, {}
    for phi in slice_cat.objects:
        d, vals = parse_pred(phi)
        sel = tuple(i for i in range(d) if vals[i] == 1)
        compr[phi] = finset_obj(len(sel))
        incl[phi] = finset_mor(len(sel), d, sel)

    del_obj = dict(compr)
    del_mor = {}
    for m, (phi, psi) in slice_cat.morphisms.items():
        h = leg[m]
        dphi, vphi = parse_pred(phi)
        dpsi, vpsi = parse_pred(psi)
        _, hvals = _finset_fun(h)
        sel_phi = [i for i in range(dphi) if vphi[i] == 1]
        sel_psi = [i for i in range(dpsi) if vpsi[i] == 1]
        del_mor[m] = finset_mor(len(sel_phi), len(sel_psi),
                                tuple(sel_psi.index(hvals[i]) for i in sel_phi))
    Delta = FinFunctor(slice_cat, E, del_obj, del_mor, name="Delta_top")

    eta_components = {x: E.identity[x] for x in E.objects}
    eps_components = {}
    for phi in slice_cat.objects:
        mid = f"[{incl[phi]}|{sig_obj[compr[phi]]}>{phi}]"
        assert mid in slice_cat.morphisms, mid
        eps_components[phi] = mid

    eta = NatTransformation(FinFunctor.identity(E), Sigma.then(Delta),
                            eta_components, name="eta")
    eps = NatTransformation(Delta.then(Sigma), FinFunctor.identity(slice_cat),
                            eps_components, name="eps")
    return Gcwf(E, u, udot, Sigma, Delta, eta, eps, name=f"subobject({n})")


def _finset_fun(m: str) -> tuple[int, tuple[int, ...]]:
    head, vals = m.split("|", 1)
    d = int(head.split(">", 1)[0])
    return d, tuple(int(ch) for ch in vals)


# ---------------------------------------------------------------------------
# doctrine gcwf: terms are witnesses to entailment


def doctrine_gcwf(p: Fibration) -> Gcwf:
    """(p, e, Cod ⊣ Diag) for a faithful fibration p.

    The term category has the p-vertical arrows as objects; a term morphism
    (ψ ⊢ φ) -> (ψ' ⊢ φ') is carried by a map of conclusions φ -> φ' in the
    total category.  With that hom-structure the adjunction unit is
    cartesian, which the naive all-commuting-squares reading fails.
    """
    if not p.classify().faithful:
        raise NotFaithful("doctrine_gcwf requires a faithful fibration")
    T = p.total
    verts = p.vertical_morphisms()
    objs = list(verts)
    mors, ident, comp = {}, {}, {}
    leg = {}
    for v1 in verts:
        c1 = T.cod(v1)
        for v2 in verts:
            c2 = T.cod(v2)
            for n in T.hom(c1, c2):
                mid = f"[{n}|{v1}>{v2}]"
                mors[mid] = (v1, v2)
                leg[mid] = n
    for v in verts:
        ident[v] = f"[{T.identity[T.cod(v)]}|{v}>{v}]"
    for m2, (d2, c2) in mors.items():
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                comp[(m2, m1)] = f"[{T.c(leg[m2], leg[m1])}|{d1}>{c2}]"
    term_cat = FinCategory(objs, mors, ident, comp, name=f"vert({T.name})")
    e = FinFunctor(term_cat, p.base,
                   {v: p.p_obj(T.cod(v)) for v in verts},
                   {m: p.p_mor(leg[m]) for m in mors}, name="e")
    udot = Fibration(e)

    Sigma = FinFunctor(term_cat, T, {v: T.cod(v) for v in verts},
                       {m: leg[m] for m in mors}, name="Cod")
    Delta = FinFunctor(T, term_cat, {A: T.identity[A] for A in T.objects},
                       {n: f"[{n}|{T.identity[T.dom(n)]}>{T.identity[T.cod(n)]}]"
                        for n in T.morphisms}, name="Diag")

    eta_components = {v: f"[{T.identity[T.cod(v)]}|{v}>{T.identity[T.cod(v)]}]"
                      for v in verts}
    eps_components = {A: T.identity[A] for A in T.objects}
    eta = NatTransformation(FinFunctor.identity(term_cat), Sigma.then(Delta),
                            eta_components, name="eta")
    eps = NatTransformation(Delta.then(Sigma), FinFunctor.identity(T),
                            eps_components, name="eps")
    return Gcwf(p.base, p, udot, Sigma, Delta, eta, eps,
                name=f"doctrine({p.p.name})")


# ---------------------------------------------------------------------------
# the finite Lindenbaum-Tarski sample


@dataclass(frozen=True)
class HeytingFiberSpec:
    base: FinCategory
    elements: dict      # base object -> tuple of fiber elements
    leq: dict           # base object -> set of (a, b) pairs with a <= b
    meet: dict          # base object -> {(a, b): a ∧ b}
    top: dict           # base object -> top element
    imp: dict           # base object -> {(a, b): a ⇒ b}
    reindex_obj: dict   # base morphism -> {element -> element}


def _chain(els):
    order = {e: i for i, e in enumerate(els)}
    leq = {(a, b) for a in els for b in els if order[a] <= order[b]}
    meet = {(a, b): (a if order[a] <= order[b] else b) for a in els for b in els}
    imp = {}
    for a in els:
        for b in els:
            imp[(a, b)] = els[-1] if order[a] <= order[b] else b
    return leq, meet, imp


def _diamond():
    els = ("bot", "a", "b", "top")
    leq = {(x, x) for x in els} | {("bot", x) for x in els} | \
          {(x, "top") for x in els}
    def mt(x, y):
        if (x, y) in leq:
            return x
        if (y, x) in leq:
            return y
        return "bot"
    meet = {(x, y): mt(x, y) for x in els for y in els}
    imp = {}
    for x in els:
        for y in els:
            cands = [c for c in els if (meet[(c, x)], y) in leq]
            best = [c for c in cands if all((d, c) in leq for d in cands)]
            assert len(best) == 1, (x, y, cands)
            imp[(x, y)] = best[0]
    return els, leq, meet, imp


def heyting_sample() -> tuple[Fibration, HeytingFiberSpec]:
    """A split faithful fibration over contexts of 0, 1 and 2 variables.

    Fibers are the Heyting algebras of upsets of a point, a 2-chain and a
    2-antichain (a 2-chain, the 3-chain 0<m<1, and the 4-element diamond);
    reindexings are the preimage maps of the underlying p-morphisms, so
    they preserve meets, top and implication strictly.
    """
    base = FinCategory(
        ["x0", "x1", "x2"],
        {"id:x0": ("x0", "x0"), "id:x1": ("x1", "x1"), "id:x2": ("x2", "x2"),
         "w": ("x2", "x1"), "!1": ("x1", "x0"), "!2": ("x2", "x0")},
        {"x0": "id:x0", "x1": "id:x1", "x2": "id:x2"},
        {("id:x0", "id:x0"): "id:x0", ("id:x1", "id:x1"): "id:x1",
         ("id:x2", "id:x2"): "id:x2",
         ("w", "id:x2"): "w", ("id:x1", "w"): "w",
         ("!1", "id:x1"): "!1", ("id:x0", "!1"): "!1",
         ("!2", "id:x2"): "!2", ("id:x0", "!2"): "!2",
         ("!1", "w"): "!2"},
        name="ctx")

    chain2 = ("F", "T")
    chain3 = ("0", "m", "1")
    leq2, meet2, imp2 = _chain(chain2)
    leq3, meet3, imp3 = _chain(chain3)
    els4, leq4, meet4, imp4 = _diamond()

    elements = {"x0": chain2, "x1": chain3, "x2": els4}
    leq = {"x0": leq2, "x1": leq3, "x2": leq4}
    meet = {"x0": meet2, "x1": meet3, "x2": meet4}
    imp = {"x0": imp2, "x1": imp3, "x2": imp4}
    top = {"x0": "T", "x1": "1", "x2": "top"}

    reindex_obj = {
        "id:x0": {e: e for e in chain2},
        "id:x1": {e: e for e in chain3},
        "id:x2": {e: e for e in els4},
        "!1": {"F": "0", "T": "1"},
        "!2": {"F": "bot", "T": "top"},
        "w": {"0": "bot", "m": "top", "1": "top"},
    }

    fibers = {x: poset_category(elements[x], lambda a, b, x=x: (a, b) in leq[x],
                                name=f"H({x})") for x in base.objects}
    reindex = {}
    for s, (d, c) in base.morphisms.items():
        omap = dict(reindex_obj[s])
        mmap = {f"le[{a}<{b}]": f"le[{omap[a]}<{omap[b]}]"
                for (a, b) in leq[c]}
        reindex[s] = FinFunctor(fibers[c], fibers[d], omap, mmap, name=f"{s}*")
    X = IndexedCategory(base, fibers, reindex, name="LT")
    fib = grothendieck(X)
    spec = HeytingFiberSpec(base, elements, leq, meet, top, imp, reindex_obj)
    return fib, spec


def validate_heyting_spec(spec: HeytingFiberSpec) -> Report:
    """Residuation c <= (a⇒b) iff c∧a <= b, and structure preservation."""
    rep = Report("heyting")
    for x in spec.base.objects:
        els, leq = spec.elements[x], spec.leq[x]
        meet, imp, top = spec.meet[x], spec.imp[x], spec.top[x]
        for a in els:
            if (a, top) not in leq:
                rep.fail("top", f"{x}: {a} <= top fails")
            for b in els:
                for c in els:
                    lhs = (c, imp[(a, b)]) in leq
                    rhs = (meet[(c, a)], b) in leq
                    if lhs != rhs:
                        rep.fail("residuation", f"{x}: c={c}, a={a}, b={b}")
    for s, (d, c) in spec.base.morphisms.items():
        h = spec.reindex_obj[s]
        if h[spec.top[c]] != spec.top[d]:
            rep.fail("reindex-top", s)
        for a in spec.elements[c]:
            for b in spec.elements[c]:
                if h[spec.meet[c][(a, b)]] != spec.meet[d][(h[a], h[b])]:
                    rep.fail("reindex-meet", f"{s}: ({a}, {b})")
                if h[spec.imp[c][(a, b)]] != spec.imp[d][(h[a], h[b])]:
                    rep.fail("reindex-imp", f"{s}: ({a}, {b})")
                if ((a, b) in spec.leq[c]) and (h[a], h[b]) not in spec.leq[d]:
                    rep.fail("reindex-monotone", f"{s}: ({a}, {b})")
    return rep
