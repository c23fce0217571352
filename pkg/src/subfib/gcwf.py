"""Generalized categories with families: record, axiom checker, judgements,
and the four structural subtyping rules executed as algorithms.

Definitional equality is identifier equality throughout; derived witnesses
are named deterministically by the underlying morphism identifiers, so
derivation transcripts are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MismatchedJudgements, UnknownType
from .fincat import FinCategory, FinFunctor, NatTransformation, validate
from .fibration import Fibration, is_fibration_morphism
from .report import Report


@dataclass
class Gcwf:
    base: FinCategory
    u: Fibration          # types
    udot: Fibration       # terms
    Sigma: FinFunctor     # udot.total -> u.total, over the base
    Delta: FinFunctor     # u.total -> udot.total (not over the base)
    eta: NatTransformation    # Id_udot -> Delta∘Sigma
    eps: NatTransformation    # Sigma∘Delta -> Id_u
    name: str = ""

    def types_over(self, gamma: str) -> list[str]:
        return [A for A in self.u.total.objects if self.u.p_obj(A) == gamma]

    def terms_over(self, gamma: str) -> list[str]:
        return [a for a in self.udot.total.objects if self.udot.p_obj(a) == gamma]


# ---------------------------------------------------------------------------
# judgement forms


@dataclass(frozen=True)
class TypeJ:
    ctx: str
    type_: str


@dataclass(frozen=True)
class TermJ:
    ctx: str
    term: str
    type_: str


@dataclass(frozen=True)
class SubtypeJ:
    ctx: str
    witness: str
    sub: str
    sup: str


@dataclass(frozen=True)
class CoercedTermJ:
    ctx: str
    term: str
    witness: str
    type_: str


Judgement = TypeJ | TermJ | SubtypeJ | CoercedTermJ


def judgement_errors(G: Gcwf, j: Judgement) -> list[str]:
    """Violations of the judgement invariants; empty iff the judgement holds."""
    errs = []
    U, Ud = G.u, G.udot
    if isinstance(j, TypeJ):
        if j.type_ not in U.total.objects:
            return [f"unknown type {j.type_!r}"]
        if U.p_obj(j.type_) != j.ctx:
            errs.append(f"u({j.type_}) = {U.p_obj(j.type_)} != {j.ctx}")
    elif isinstance(j, TermJ):
        if j.term not in Ud.total.objects:
            return [f"unknown term {j.term!r}"]
        if Ud.p_obj(j.term) != j.ctx:
            errs.append(f"udot({j.term}) != {j.ctx}")
        if G.Sigma.on_obj(j.term) != j.type_:
            errs.append(f"Sigma({j.term}) != {j.type_}")
    elif isinstance(j, SubtypeJ):
        if j.witness not in U.total.morphisms:
            return [f"unknown witness {j.witness!r}"]
        if U.total.dom(j.witness) != j.sub or U.total.cod(j.witness) != j.sup:
            errs.append(f"witness {j.witness} is not {j.sub} -> {j.sup}")
        if not U.is_vertical(j.witness):
            errs.append(f"witness {j.witness} is not vertical")
        elif U.p_obj(j.sup) != j.ctx:
            errs.append(f"witness {j.witness} does not live over {j.ctx}")
    elif isinstance(j, CoercedTermJ):
        if j.term not in Ud.total.objects:
            return [f"unknown term {j.term!r}"]
        if j.witness not in U.total.morphisms:
            return [f"unknown witness {j.witness!r}"]
        sa = G.Sigma.on_obj(j.term)
        if U.total.dom(j.witness) != sa or U.total.cod(j.witness) != j.type_:
            errs.append(f"witness {j.witness} is not Sigma({j.term}) -> {j.type_}")
        if not U.is_vertical(j.witness):
            errs.append(f"witness {j.witness} is not vertical")
        if Ud.p_obj(j.term) != j.ctx:
            errs.append(f"udot({j.term}) != {j.ctx}")
    else:
        errs.append(f"not a judgement: {j!r}")
    return errs


def check_judgement(G: Gcwf, j: Judgement) -> None:
    errs = judgement_errors(G, j)
    if errs:
        raise MismatchedJudgements("; ".join(errs))


def render_judgement(j: Judgement) -> str:
    """One-line transcript form: `CTX |- ... [witness=...]`."""
    if isinstance(j, TypeJ):
        return f"{j.ctx} |- {j.type_} type"
    if isinstance(j, TermJ):
        return f"{j.ctx} |- {j.term} : {j.type_}"
    if isinstance(j, SubtypeJ):
        return f"{j.ctx} |- {j.sub} <= {j.sup} [witness={j.witness}]"
    if isinstance(j, CoercedTermJ):
        return f"{j.ctx} |- {j.term} :~ {j.type_} [witness={j.witness}]"
    raise MismatchedJudgements(f"not a judgement: {j!r}")


def enumerate_judgements(G: Gcwf, form: str, ctx: str | None = None,
                         **filters) -> list[Judgement]:
    """All judgements of the requested form, optionally filtered.

    `form` is one of "type", "term", "subtype", "coerced-term"; filters may
    pin `type_`, `term`, `sub`, `sup`.
    """
    out: list[Judgement] = []
    ctxs = [ctx] if ctx is not None else list(G.base.objects)
    for gamma in ctxs:
        if form == "type":
            for A in G.types_over(gamma):
                out.append(TypeJ(gamma, A))
        elif form == "term":
            for a in G.terms_over(gamma):
                out.append(TermJ(gamma, a, G.Sigma.on_obj(a)))
        elif form == "subtype":
            idg = G.base.id_of(gamma)
            for f, (d, c) in G.u.total.morphisms.items():
                if G.u.p_mor(f) == idg:
                    out.append(SubtypeJ(gamma, f, d, c))
        elif form == "coerced-term":
            idg = G.base.id_of(gamma)
            for a in G.terms_over(gamma):
                sa = G.Sigma.on_obj(a)
                for g in G.u.total.mors_from(sa):
                    if G.u.p_mor(g) == idg:
                        out.append(CoercedTermJ(gamma, a, g, G.u.total.cod(g)))
        else:
            raise MismatchedJudgements(f"unknown judgement form {form!r}")
    for key, val in filters.items():
        out = [j for j in out if getattr(j, key) == val]
    return sorted(out, key=repr)


# ---------------------------------------------------------------------------
# context extension and the structural rules


def context_extension(G: Gcwf, A: str) -> tuple[str, str]:
    """(Γ.A, projection): the base image of the counit component at A."""
    if A not in G.u.total.objects:
        raise UnknownType(A)
    proj = G.u.p_mor(G.eps.at(A))
    return G.base.dom(proj), proj


def rule_sbsm(G: Gcwf, ct: CoercedTermJ, st: SubtypeJ) -> CoercedTermJ:
    """(Sbsm): from a :_g A' and A' <=_f A conclude a :_{f∘g} A."""
    check_judgement(G, ct)
    check_judgement(G, st)
    if ct.ctx != st.ctx or ct.type_ != st.sub:
        raise MismatchedJudgements(
            f"subsumption needs cod(g) = {st.sub!r}, got {ct.type_!r}")
    out = CoercedTermJ(ct.ctx, ct.term, G.u.total.c(st.witness, ct.witness), st.sup)
    check_judgement(G, out)
    return out


def rule_trans(G: Gcwf, st1: SubtypeJ, st2: SubtypeJ) -> SubtypeJ:
    """(Trans): from A' <=_f A and A'' <=_g A' conclude A'' <=_{f∘g} A."""
    check_judgement(G, st1)
    check_judgement(G, st2)
    if st1.ctx != st2.ctx or st2.sup != st1.sub:
        raise MismatchedJudgements(
            f"transitivity needs matching middle type {st1.sub!r}")
    out = SubtypeJ(st1.ctx, G.u.total.c(st1.witness, st2.witness),
                   st2.sub, st1.sup)
    check_judgement(G, out)
    return out


def rule_wkn(G: Gcwf, st: SubtypeJ, B: str) -> SubtypeJ:
    """(Wkn): reindex the witness along the projection of the extension by B."""
    check_judgement(G, st)
    if B not in G.u.total.objects or G.u.p_obj(B) != st.ctx:
        raise MismatchedJudgements(f"{B!r} is not a type over {st.ctx!r}")
    ext, proj = context_extension(G, B)
    w = G.u.reindex_vertical(st.witness, proj)
    out = SubtypeJ(ext, w, G.u.total.dom(w), G.u.total.cod(w))
    check_judgement(G, out)
    return out


def rule_sbst(G: Gcwf, st: SubtypeJ, tm: CoercedTermJ) -> SubtypeJ:
    """(Sbst): substitute a coerced term into a subtyping over the extension.

    The substitution map is udot(Δg ∘ η_a); the unique-filler step through
    the cartesian counit component is re-verified rather than assumed.
    """
    check_judgement(G, st)
    check_judgement(G, tm)
    A = tm.type_
    ext, _proj = context_extension(G, A)
    if st.ctx != ext:
        raise MismatchedJudgements(
            f"premise must live over the extension {ext!r}, got {st.ctx!r}")
    Ud, U = G.udot, G.u
    delta_g = G.Delta.on_mor(tm.witness)
    unit_a = G.eta.at(tm.term)
    to_delta = Ud.total.c(delta_g, unit_a)         # a -> ΔA in udot
    sigma = Ud.p_mor(to_delta)                     # Γ -> Γ.A in the base
    if G.base.dom(sigma) != tm.ctx or G.base.cod(sigma) != ext:
        raise MismatchedJudgements(
            f"substitution map {sigma!r} is not {tm.ctx!r} -> {ext!r}")
    # the unique map through the cartesian counit component at A
    lifted = G.Sigma.on_mor(to_delta)              # Σa -> ΣΔA in u
    eps_A = G.eps.at(A)
    fillers = [t for t in U.total.hom(U.total.dom(lifted), U.total.dom(eps_A))
               if U.p_mor(t) == sigma and U.total.c(eps_A, t) == tm.witness]
    if fillers != [lifted]:
        raise MismatchedJudgements(
            f"counit filler at {A!r} not unique: {fillers!r}")
    w = U.reindex_vertical(st.witness, sigma)
    out = SubtypeJ(tm.ctx, w, U.total.dom(w), U.total.cod(w))
    check_judgement(G, out)
    return out


# ---------------------------------------------------------------------------
# the axiom checker


def check_gcwf(G: Gcwf) -> Report:
    """Exhaustively verify every Gcwf invariant; empty report iff all hold."""
    rep = Report(f"gcwf:{G.name or 'anonymous'}")
    U, Ud = G.u, G.udot

    for label, fib in (("u", U), ("udot", Ud)):
        v = validate(fib.p)
        if v.failures:
            rep.extend(v)
        if fib.base != G.base:
            rep.fail(f"{label}-base", "fibration not over the record base")
        if not fib.classify().is_fibration:
            rep.fail(f"{label}-fibration", "missing cartesian lifts")

    # Sigma is a fibration morphism udot -> u
    sig = is_fibration_morphism(G.Sigma, Ud, U)
    if sig.failures:
        rep.extend(sig)

    # Delta is a plain functor u -> udot
    dv = validate(G.Delta)
    if dv.failures:
        rep.extend(dv)

    # unit and counit: shapes, naturality, triangle identities, cartesianness
    id_udot = FinFunctor.identity(Ud.total)
    id_u = FinFunctor.identity(U.total)
    eta_expected = (id_udot, G.Sigma.then(G.Delta))
    eps_expected = (G.Delta.then(G.Sigma), id_u)
    if (G.eta.source, G.eta.target) != eta_expected:
        rep.fail("eta-shape", "eta is not Id -> ΔΣ")
    else:
        nv = validate(G.eta)
        if nv.failures:
            rep.extend(nv)
    if (G.eps.source, G.eps.target) != eps_expected:
        rep.fail("eps-shape", "eps is not ΣΔ -> Id")
    else:
        nv = validate(G.eps)
        if nv.failures:
            rep.extend(nv)

    for x in Ud.total.objects:
        left = U.total.c(G.eps.at(G.Sigma.on_obj(x)),
                         G.Sigma.on_mor(G.eta.at(x)))
        if left != U.total.identity[G.Sigma.on_obj(x)]:
            rep.fail("triangle-sigma", x)
    for A in U.total.objects:
        left = Ud.total.c(G.Delta.on_mor(G.eps.at(A)),
                          G.eta.at(G.Delta.on_obj(A)))
        if left != Ud.total.identity[G.Delta.on_obj(A)]:
            rep.fail("triangle-delta", A)

    eta_flags = Ud.cartesian_flags
    for x in Ud.total.objects:
        if not eta_flags[G.eta.at(x)]:
            rep.fail("eta-cartesian", x)
    eps_flags = U.cartesian_flags
    for A in U.total.objects:
        if not eps_flags[G.eps.at(A)]:
            rep.fail("eps-cartesian", A)
    return rep


def check_sigma_faithful(G: Gcwf) -> Report:
    """Unit components monic, Σ injective on hom-sets, and the image
    bijection onto the compatibility subset, with the inverse recovered
    through cartesianness of the unit."""
    rep = Report(f"sigma-faithful:{G.name or 'anonymous'}")
    U, Ud = G.u, G.udot
    T = Ud.total

    for b in T.objects:
        eta_b = G.eta.at(b)
        for x in T.objects:
            seen = {}
            for f in T.hom(x, b):
                key = T.c(eta_b, f)
                if key in seen:
                    rep.fail("eta-monic", f"eta_{b} merges {seen[key]} and {f}")
                seen[key] = f

    for a in T.objects:
        for b in T.objects:
            hom = T.hom(a, b)
            image = [G.Sigma.on_mor(f) for f in hom]
            if len(set(image)) != len(image):
                rep.fail("sigma-injective", f"hom({a}, {b})")
            sa, sb = G.Sigma.on_obj(a), G.Sigma.on_obj(b)
            compat = []
            for f in U.total.hom(sa, sb):
                lhs = U.total.c(G.Sigma.on_mor(G.eta.at(b)), f)
                rhs = U.total.c(G.Sigma.on_mor(G.Delta.on_mor(f)),
                                G.Sigma.on_mor(G.eta.at(a)))
                if lhs == rhs:
                    compat.append(f)
            if sorted(image) != sorted(compat):
                rep.fail("sigma-bijection",
                         f"hom({a}, {b}): image {sorted(image)} != "
                         f"compatible {sorted(compat)}")
                continue
            # inverse via cartesianness of eta_b: the unique g over u(f)
            # with eta_b ∘ g = Δf ∘ eta_a
            for f in compat:
                target = T.c(G.Delta.on_mor(f), G.eta.at(a))
                gs = [g for g in T.hom(a, b)
                      if Ud.p_mor(g) == U.p_mor(f) and T.c(G.eta.at(b), g) == target]
                if len(gs) != 1 or G.Sigma.on_mor(gs[0]) != f:
                    rep.fail("sigma-inverse", f"f={f} in hom({a}, {b})")
    return rep


# ---------------------------------------------------------------------------
# morphisms of gcwfs


@dataclass(frozen=True)
class GcwfMorphism:
    H: FinFunctor      # u.total -> v.total
    Hdot: FinFunctor   # udot.total -> vdot.total
    name: str = field(default="", compare=False)


def check_gcwf_morphism(G: Gcwf, G2: Gcwf, m: GcwfMorphism) -> Report:
    rep = Report(f"gcwf-morphism:{m.name or 'anonymous'}")
    if G.base != G2.base:
        rep.fail("base", "gcwf morphism requires equal bases")
        return rep
    h = is_fibration_morphism(m.H, G.u, G2.u)
    if h.failures:
        rep.extend(h)
    hd = is_fibration_morphism(m.Hdot, G.udot, G2.udot)
    if hd.failures:
        rep.extend(hd)
    for a in G.udot.total.objects:
        if m.H.on_obj(G.Sigma.on_obj(a)) != G2.Sigma.on_obj(m.Hdot.on_obj(a)):
            rep.fail("sigma-square-objects", a)
    for f in G.udot.total.morphisms:
        if m.H.on_mor(G.Sigma.on_mor(f)) != G2.Sigma.on_mor(m.Hdot.on_mor(f)):
            rep.fail("sigma-square-morphisms", f)
    return rep
