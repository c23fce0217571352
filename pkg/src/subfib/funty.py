"""Function types with subtyping: the weakening functor, the mixed-variance
corner with a vertical-opposite first component, and the two derived rules.

Stage 1 (Fun is a functor on the corner) validates the subtyping rule by
itself; stage 2 (the lam square is a pullback of categories) additionally
validates lam-typing.  The two are reported separately because the doctrine
models pass stage 1 while genuinely failing stage 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MismatchedJudgements, StageTwoUnavailable
from .fincat import FinCategory, FinFunctor, validate
from .fibration import (Fibration, base_pair_fibration, groth_mor_id,
                        groth_obj_id, vertical_opposite)
from .gcwf import (CoercedTermJ, Gcwf, SubtypeJ, check_judgement,
                   context_extension)
from .report import Report


def pair_obj_id(x: str, y: str) -> str:
    return f"({x},{y})"


def pair_mor_id(m: str, n: str) -> str:
    return f"({m},{n})"


def ext_obj_id(a: str, c: str) -> str:
    return f"({a};{c})"


def ext_mor_id(m: str, n: str, o1: str, o2: str) -> str:
    return f"[{m};{n}|{o1}>{o2}]"


@dataclass
class FunStructure:
    owner: Gcwf
    vop: Fibration                  # vertical opposite of the type fibration
    corner: FinCategory             # total of u^vop ×_base u
    corner_proj: tuple[FinFunctor, FinFunctor]
    corner_base: dict               # corner object/morphism -> base image
    Fun: FinFunctor                 # corner -> u.total
    W: FinFunctor                   # plain pairs -> extended pairs
    pairs: FinCategory              # total of u ×_base u (W's domain)
    P: FinCategory                  # W-pulled-back pairs (A, B, b)
    P_parts: dict                   # P object -> (corner obj, b); morphisms -> (k, t)
    lam: FinFunctor                 # P -> udot.total
    squares: dict                   # recorded functor equations of the two squares
    vop_obj: dict                   # u-total object -> vop object
    vop_vert: dict                  # u-total vertical morphism -> vop morphism
    _stage_reports: Report | None = field(default=None, repr=False)

    def stage_reports(self) -> Report:
        if self._stage_reports is None:
            self._stage_reports = check_fun_structure(self.owner, self)
        return self._stage_reports


# ---------------------------------------------------------------------------
# corner and weakening machinery


def _vop_maps(u: Fibration, vop: Fibration) -> tuple[dict, dict]:
    """Object and reversed-vertical-morphism correspondences u -> u^vop."""
    obj_map, vert_map = {}, {}
    if u.origin_names is not None:
        obj_origin, mor_origin = u.origin_names
        for A in u.total.objects:
            obj_map[A] = A          # grothendieck naming is stable under vop
        for f in u.vertical_morphisms():
            sigma, v, _a = mor_origin[f]
            _gamma, a_dom = obj_origin[u.total.dom(f)]
            vert_map[f] = groth_mor_id(sigma, v, a_dom)
    else:
        for A in u.total.objects:
            obj_map[A] = groth_obj_id(u.p_obj(A), A)
        for f in u.vertical_morphisms():
            gamma = u.p_obj(u.total.dom(f))
            vert_map[f] = groth_mor_id(u.base.id_of(gamma), f, u.total.dom(f))
    for A, x in obj_map.items():
        assert x in vop.total.objects, (A, x)
    for f, m in vert_map.items():
        assert m in vop.total.morphisms, (f, m)
        assert vop.total.dom(m) == obj_map[u.total.cod(f)]
        assert vop.total.cod(m) == obj_map[u.total.dom(f)]
    return obj_map, vert_map


def _corner(G: Gcwf) -> tuple[Fibration, FinCategory, tuple, dict, dict, dict]:
    u = G.u
    if u.cleavage is None or not u.splitness_report().passed:
        _complete_cleavage(u)
    vop = vertical_opposite(u)
    cfib, projs = base_pair_fibration(vop, u)
    base_of = {}
    for o in cfib.total.objects:
        base_of[o] = cfib.p_obj(o)
    for m in cfib.total.morphisms:
        base_of[m] = cfib.p_mor(m)
    obj_map, vert_map = _vop_maps(u, vop)
    return vop, cfib.total, projs, base_of, obj_map, vert_map


def _complete_cleavage(F: Fibration) -> None:
    for A in F.total.objects:
        for sigma in F.base.mors_into(F.p_obj(A)):
            F.cartesian_lift(A, sigma)
    F.split_marked = F.splitness_report().passed


def weakened_type(G: Gcwf, A: str, B: str) -> str:
    """(u eps_A)* B: the second component of W on objects."""
    _ext, proj = context_extension(G, A)
    return G.u.total.dom(G.u.cartesian_lift(B, proj))


def weakening_functor(G: Gcwf) -> FinFunctor:
    """W: same-context pairs -> (type, type-over-extension) pairs.

    W(A, B) = (A, (u eps_A)* B); on morphisms the second component is the
    unique filler between the chosen lifts over the comprehension map
    udot(Delta a).
    """
    U = G.u
    pfib, (pr1, pr2) = base_pair_fibration(U, U)
    pairs = pfib.total

    # extended-pairs category
    eobjs, emors, eident, ecomp = [], {}, {}, {}
    eparts = {}
    for A in U.total.objects:
        ext, _ = context_extension(G, A)
        for C in U.total.objects:
            if U.p_obj(C) == ext:
                oid = ext_obj_id(A, C)
                eobjs.append(oid)
                eparts[oid] = (A, C)
    em_parts = {}
    for o1 in eobjs:
        A1, C1 = eparts[o1]
        for o2 in eobjs:
            A2, C2 = eparts[o2]
            for a in U.total.hom(A1, A2):
                chi = G.udot.p_mor(G.Delta.on_mor(a))
                for c in U.total.hom(C1, C2):
                    if U.p_mor(c) == chi:
                        mid = ext_mor_id(a, c, o1, o2)
                        emors[mid] = (o1, o2)
                        em_parts[mid] = (a, c)
    for o in eobjs:
        A, C = eparts[o]
        eident[o] = ext_mor_id(U.total.identity[A], U.total.identity[C], o, o)
    for m2, (d2, c2) in emors.items():
        a2, b2 = em_parts[m2]
        for m1, (d1, c1) in emors.items():
            if c1 == d2:
                a1, b1 = em_parts[m1]
                ecomp[(m2, m1)] = ext_mor_id(U.total.c(a2, a1),
                                             U.total.c(b2, b1), d1, c2)
    epairs = FinCategory(eobjs, emors, eident, ecomp,
                         name=f"extpairs({G.name})")

    omap, mmap = {}, {}
    wsecond_obj = {}
    for o in pairs.objects:
        A, B = pr1.on_obj(o), pr2.on_obj(o)
        wb = weakened_type(G, A, B)
        wsecond_obj[o] = wb
        omap[o] = ext_obj_id(A, wb)
    for mid in pairs.morphisms:
        a, b = pr1.on_mor(mid), pr2.on_mor(mid)
        o1, o2 = pairs.morphisms[mid]
        A1, B1 = pr1.on_obj(o1), pr2.on_obj(o1)
        A2, B2 = pr1.on_obj(o2), pr2.on_obj(o2)
        _, proj1 = context_extension(G, A1)
        _, proj2 = context_extension(G, A2)
        lift1 = U.cartesian_lift(B1, proj1)
        lift2 = U.cartesian_lift(B2, proj2)
        chi = G.udot.p_mor(G.Delta.on_mor(a))
        wk = U.filler(lift2, U.total.c(b, lift1), chi)
        mmap[mid] = ext_mor_id(a, wk, omap[o1], omap[o2])
        assert mmap[mid] in epairs.morphisms, mmap[mid]
    return FinFunctor(pairs, epairs, omap, mmap, name="W")


# ---------------------------------------------------------------------------
# building Fun structures


def _generic_fun_mor(G: Gcwf, corner: FinCategory, projs, base_of,
                     fun_obj: dict) -> dict:
    """Morphism action of Fun by unique search over the base image.

    If no morphism matches, the identity at the domain is recorded so that
    stage 1 reports the offending arrow pair instead of crashing.
    """
    U = G.u
    mmap = {}
    for mid, (o1, o2) in corner.morphisms.items():
        sigma = base_of[mid]
        cands = [t for t in U.total.hom(fun_obj[o1], fun_obj[o2])
                 if U.p_mor(t) == sigma]
        if len(cands) == 1:
            mmap[mid] = cands[0]
        else:
            mmap[mid] = U.total.identity[fun_obj[o1]]
    return mmap


def _build_structure(G: Gcwf, fun_obj_fn, lam_obj_fn) -> FunStructure:
    vop, corner, projs, base_of, vop_obj, vop_vert = _corner(G)
    pr1, pr2 = projs
    U, Ud = G.u, G.udot

    inv_vop_obj = {x: A for A, x in vop_obj.items()}
    fun_obj = {}
    for o in corner.objects:
        A = inv_vop_obj[pr1.on_obj(o)]
        B = pr2.on_obj(o)
        fun_obj[o] = fun_obj_fn(A, B)
        assert fun_obj[o] in U.total.objects, (o, fun_obj[o])
    fun_mor = _generic_fun_mor(G, corner, projs, base_of, fun_obj)
    Fun = FinFunctor(corner, U.total, fun_obj, fun_mor, name="Fun")

    W = weakening_functor(G)

    # P: objects (corner object, term of the weakened second type)
    pobjs, pparts = [], {}
    for o in corner.objects:
        A = inv_vop_obj[pr1.on_obj(o)]
        B = pr2.on_obj(o)
        wb = weakened_type(G, A, B)
        for b in Ud.total.objects:
            if G.Sigma.on_obj(b) == wb:
                oid = pair_obj_id(o, b)
                pobjs.append(oid)
                pparts[oid] = (o, b)
    pmors, pident, pcomp = {}, {}, {}
    pm_parts = {}
    lifts = {}
    for o in corner.objects:
        A = inv_vop_obj[pr1.on_obj(o)]
        B = pr2.on_obj(o)
        _, proj = context_extension(G, A)
        lifts[o] = U.cartesian_lift(B, proj)
    for po1 in pobjs:
        o1, b1 = pparts[po1]
        for po2 in pobjs:
            o2, b2 = pparts[po2]
            for k in corner.hom(o1, o2):
                n = pr2.on_mor(k)
                rhs = U.total.c(n, lifts[o1])
                for t in Ud.total.hom(b1, b2):
                    if U.total.c(lifts[o2], G.Sigma.on_mor(t)) == rhs:
                        mid = pair_mor_id(k, t)
                        pmors[mid] = (po1, po2)
                        pm_parts[mid] = (k, t)
    for po in pobjs:
        o, b = pparts[po]
        pident[po] = pair_mor_id(corner.identity[o], Ud.total.identity[b])
    for m2, (d2, c2) in pmors.items():
        k2, t2 = pm_parts[m2]
        for m1, (d1, c1) in pmors.items():
            if c1 == d2:
                k1, t1 = pm_parts[m1]
                pcomp[(m2, m1)] = pair_mor_id(corner.c(k2, k1),
                                              Ud.total.c(t2, t1))
    P = FinCategory(pobjs, pmors, pident, pcomp, name=f"P({G.name})")
    P_parts = dict(pparts)
    P_parts.update(pm_parts)

    lam_obj = {}
    for po in pobjs:
        o, b = pparts[po]
        A = inv_vop_obj[pr1.on_obj(o)]
        B = pr2.on_obj(o)
        lam_obj[po] = lam_obj_fn(A, B, b)
        assert lam_obj[po] in Ud.total.objects, (po, lam_obj[po])
    lam_mor = {}
    for mid, (po1, po2) in pmors.items():
        k, t = pm_parts[mid]
        want = fun_mor[k]
        cands = [s for s in Ud.total.hom(lam_obj[po1], lam_obj[po2])
                 if G.Sigma.on_mor(s) == want]
        if len(cands) == 1:
            lam_mor[mid] = cands[0]
        else:
            lam_mor[mid] = Ud.total.identity[lam_obj[po1]]
    lam = FinFunctor(P, Ud.total, lam_obj, lam_mor, name="lam")

    proj_corner = FinFunctor(P, corner, {po: pparts[po][0] for po in pobjs},
                             {mid: pm_parts[mid][0] for mid in pmors},
                             name="pr")
    squares = {
        "right-square": (lam.then(G.Sigma), proj_corner.then(Fun)),
    }
    return FunStructure(G, vop, corner, projs, base_of, Fun, W,
                        W.source, P, P_parts, lam, squares, vop_obj, vop_vert)


def fun_structure_subobject(G: Gcwf) -> FunStructure:
    """Pointwise Boolean implication on predicates over the same set."""
    def fun_obj(A: str, B: str) -> str:
        da, va = _pred(A)
        db, vb = _pred(B)
        assert da == db
        vals = tuple(1 if (va[i] == 0 or vb[i] == 1) else 0 for i in range(da))
        return f"{da}>2|{''.join(map(str, vals))}"

    def lam_obj(A: str, B: str, b: str) -> str:
        return G.u.p_obj(A)     # the context object carries the unique term

    return _build_structure(G, fun_obj, lam_obj)


def _pred(phi: str) -> tuple[int, tuple[int, ...]]:
    head, vals = phi.split("|", 1)
    return int(head.split(">", 1)[0]), tuple(int(ch) for ch in vals)


def fun_structure_doctrine(G: Gcwf, hspec, imp_override=None) -> FunStructure:
    """Fiberwise Heyting implication; `imp_override` lets tests install a
    deliberately broken table (e.g. covariant in the first argument)."""
    imp = imp_override if imp_override is not None else hspec.imp
    obj_origin, _ = G.u.origin_names

    def fun_obj(A: str, B: str) -> str:
        gamma, a = obj_origin[A]
        _g2, b = obj_origin[B]
        return groth_obj_id(gamma, imp[gamma][(a, b)])

    def lam_obj(A: str, B: str, b_term: str) -> str:
        # b_term: psi |- B with trivial weakening; compose with B <= (A => B)
        gamma, _a = obj_origin[A]
        src = G.u.total.dom(b_term)
        _g, psi = obj_origin[src]
        target = fun_obj(A, B)
        _g3, tgt = obj_origin[target]
        mid = groth_mor_id(G.base.id_of(gamma), f"le[{psi}<{tgt}]", tgt)
        if mid not in G.u.total.morphisms:
            return b_term   # broken tables land here; stage checks report it
        return mid

    return _build_structure(G, fun_obj, lam_obj)


# ---------------------------------------------------------------------------
# checking and the two derived rules


def check_fun_structure(G: Gcwf, FS: FunStructure) -> Report:
    """Stage 1: Fun is a functor on the mixed-variance corner (validates the
    subtyping rule).  Stage 2: the lam square is a pullback of categories,
    checked through the comparison with the strict pullback."""
    rep = Report(f"fun-structure:{G.name or 'G'}")
    U, Ud = G.u, G.udot

    v = validate(FS.Fun)
    for cid, status, detail in v.entries:
        rep.entries.append((f"stage1.{cid}", status, detail))
    for o in FS.corner.objects:
        if U.p_obj(FS.Fun.on_obj(o)) != FS.corner_base[o]:
            rep.fail("stage1.context-preserving", o)
    for m in FS.corner.morphisms:
        if U.p_mor(FS.Fun.on_mor(m)) != FS.corner_base[m]:
            rep.fail("stage1.context-preserving-mor", m)

    v = validate(FS.lam)
    for cid, status, detail in v.entries:
        rep.entries.append((f"stage2.lam-{cid}", status, detail))
    left, right = FS.squares["right-square"]
    for po in FS.P.objects:
        if left.on_obj(po) != right.on_obj(po):
            rep.fail("stage2.square", f"object {po}")
    for pm in FS.P.morphisms:
        if left.on_mor(pm) != right.on_mor(pm):
            rep.fail("stage2.square", f"morphism {pm}")

    # comparison with the strict pullback of Sigma along Fun
    qobjs = set()
    for o in FS.corner.objects:
        fo = FS.Fun.on_obj(o)
        for s in Ud.total.objects:
            if G.Sigma.on_obj(s) == fo:
                qobjs.add((o, s))
    image = {}
    for po in FS.P.objects:
        o, _b = FS.P_parts[po]
        key = (o, FS.lam.on_obj(po))
        if key in image:
            rep.fail("stage2.comparison-injective-objects",
                     f"{image[key]} and {po} collide")
        image[key] = po
    missing = qobjs - set(image)
    extra = set(image) - qobjs
    for key in sorted(missing):
        rep.fail("stage2.comparison-surjective-objects", str(key))
    for key in sorted(extra):
        rep.fail("stage2.comparison-image-objects", str(key))

    qmors = set()
    for k, (o1, o2) in FS.corner.morphisms.items():
        fk = FS.Fun.on_mor(k)
        for t, (s1, s2) in Ud.total.morphisms.items():
            if G.Sigma.on_mor(t) == fk:
                qmors.add((k, t))
    imagem = {}
    for pm, (po1, po2) in FS.P.morphisms.items():
        k, _t = FS.P_parts[pm]
        key = (k, FS.lam.on_mor(pm))
        if key in imagem:
            rep.fail("stage2.comparison-injective-morphisms",
                     f"{imagem[key]} and {pm} collide")
        imagem[key] = pm
    missing = qmors - set(imagem)
    extra = set(imagem) - qmors
    for key in sorted(missing):
        rep.fail("stage2.comparison-surjective-morphisms", str(key))
    for key in sorted(extra):
        rep.fail("stage2.comparison-image-morphisms", str(key))
    return rep


def stage_passed(rep: Report, stage: str) -> bool:
    return not [e for e in rep.failures if e[0].startswith(stage)]


def fun_type(FS: FunStructure, A: str, B: str) -> str:
    """Fun(A, B) for two types over the same context."""
    o = pair_obj_id(FS.vop_obj[A], B)
    return FS.Fun.on_obj(o)


def derive_fun_subtyping(FS: FunStructure, st1: SubtypeJ, st2: SubtypeJ) -> SubtypeJ:
    """From A' <=_f A and B <=_g B' conclude Fun(A,B) <=_{Fun(f,g)} Fun(A',B')."""
    G = FS.owner
    check_judgement(G, st1)
    check_judgement(G, st2)
    if st1.ctx != st2.ctx:
        raise MismatchedJudgements("premises must share a context")
    if not stage_passed(FS.stage_reports(), "stage1"):
        raise MismatchedJudgements("stage 1 of check_fun_structure failed")
    k = pair_mor_id(FS.vop_vert[st1.witness], st2.witness)
    if k not in FS.corner.morphisms:
        raise MismatchedJudgements(f"no corner morphism for {k!r}")
    witness = FS.Fun.on_mor(k)
    out = SubtypeJ(st1.ctx, witness,
                   fun_type(FS, st1.sup, st2.sub),
                   fun_type(FS, st1.sub, st2.sup))
    check_judgement(G, out)
    return out


def unweaken_type(FS: FunStructure, A: str, Cw: str) -> str:
    """The type over the base context whose weakening along A is Cw."""
    G = FS.owner
    gamma = G.u.p_obj(A)
    cands = [B for B in G.types_over(gamma) if weakened_type(G, A, B) == Cw]
    if len(cands) != 1:
        raise MismatchedJudgements(
            f"{Cw!r} has {len(cands)} preimages under weakening by {A!r}")
    return cands[0]


def derive_lam_typing(FS: FunStructure, A: str, bt: CoercedTermJ,
                      B: str | None = None) -> CoercedTermJ:
    """From Γ.A |- b :_f B-weakened conclude Γ |- lam(A,b) :_{Fun(id,f)} Fun(A,B)."""
    G = FS.owner
    check_judgement(G, bt)
    rep = FS.stage_reports()
    if not stage_passed(rep, "stage2"):
        raise StageTwoUnavailable("the pullback stage failed on this structure")
    ext, _proj = context_extension(G, A)
    if bt.ctx != ext:
        raise MismatchedJudgements(f"term must live over {ext!r}")
    if B is None:
        B = unweaken_type(FS, A, bt.type_)
    # resolve the unweakened type of the term jointly with the witness:
    # (B0, f0) with W(A, B0) = Sigma(term) and f0 weakening to the witness
    gamma = G.u.p_obj(A)
    sig_b = G.Sigma.on_obj(bt.term)
    pairs = []
    for B0 in G.types_over(gamma):
        if weakened_type(G, A, B0) != sig_b:
            continue
        for f0 in G.u.total.hom(B0, B):
            if G.u.is_vertical(f0) and \
                    G.u.reindex_vertical(f0, _proj) == bt.witness:
                pairs.append((B0, f0))
    if len(pairs) != 1:
        raise MismatchedJudgements(
            f"witness does not unweaken uniquely ({len(pairs)} candidates)")
    B0, f0 = pairs[0]
    po = pair_obj_id(pair_obj_id(FS.vop_obj[A], B0), bt.term)
    if po not in FS.P.objects:
        raise MismatchedJudgements(f"({A}, {B0}, {bt.term}) is not in P")
    lam_b = FS.lam.on_obj(po)
    ida = G.u.total.identity[A]
    k = pair_mor_id(FS.vop_vert[ida], f0)
    if k not in FS.corner.morphisms:
        raise MismatchedJudgements(f"no corner morphism for {k!r}")
    witness = FS.Fun.on_mor(k)
    out = CoercedTermJ(gamma, lam_b, witness, fun_type(FS, A, B))
    check_judgement(G, out)
    return out
