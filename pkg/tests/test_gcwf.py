import pytest

from subfib.errors import MismatchedJudgements
from subfib.fincat import FinFunctor, NatTransformation
from subfib.fibration import Fibration, groth_mor_id, groth_obj_id
from subfib.gcwf import (CoercedTermJ, Gcwf, GcwfMorphism, SubtypeJ,
                         check_gcwf, check_gcwf_morphism,
                         check_judgement, check_sigma_faithful,
                         context_extension, enumerate_judgements,
                         judgement_errors, rule_sbsm, rule_sbst, rule_trans,
                         rule_wkn)


def test_check_gcwf_subobject(subobject2):
    assert check_gcwf(subobject2).passed
    assert subobject2.u.classify().discrete
    assert subobject2.udot.classify().discrete


def test_check_gcwf_kernel_pair(kernel1):
    assert check_gcwf(kernel1).passed


def test_check_gcwf_doctrine(doctrine):
    assert check_gcwf(doctrine).passed


def _all_squares_doctrine():
    """The naive doctrine with all commuting squares as term morphisms.

    Its unit components are not cartesian; check_gcwf must name them.
    """
    from subfib.fincat import FinCategory, poset_category, terminal_category
    chain = poset_category(["0", "m", "1"],
                           lambda a, b: "0m1".index(a) <= "0m1".index(b))
    B = terminal_category()
    p = FinFunctor(chain, B, {x: "*" for x in chain.objects},
                   {m: "id*" for m in chain.morphisms}, name="p")
    u = Fibration(p)
    verts = sorted(chain.morphisms)
    mors, leg = {}, {}
    for v1 in verts:
        for v2 in verts:
            for m in chain.hom(chain.dom(v1), chain.dom(v2)):
                for n in chain.hom(chain.cod(v1), chain.cod(v2)):
                    if chain.c(v2, m) == chain.c(n, v1):
                        mid = f"[{m};{n}|{v1}>{v2}]"
                        mors[mid] = (v1, v2)
                        leg[mid] = (m, n)
    ident = {v: f"[{chain.identity[chain.dom(v)]};{chain.identity[chain.cod(v)]}|{v}>{v}]"
             for v in verts}
    comp = {}
    for m2, (d2, c2) in mors.items():
        a2, b2 = leg[m2]
        for m1, (d1, c1) in mors.items():
            if c1 == d2:
                a1, b1 = leg[m1]
                comp[(m2, m1)] = f"[{chain.c(a2, a1)};{chain.c(b2, b1)}|{d1}>{c2}]"
    sq = FinCategory(verts, mors, ident, comp, name="squares")
    e = FinFunctor(sq, B, {v: "*" for v in verts},
                   {m: "id*" for m in mors}, name="e")
    udot = Fibration(e)
    Sigma = FinFunctor(sq, chain, {v: chain.cod(v) for v in verts},
                       {m: leg[m][1] for m in mors}, name="Cod")
    Delta = FinFunctor(chain, sq, {x: chain.identity[x] for x in chain.objects},
                       {n: f"[{n};{n}|{chain.identity[chain.dom(n)]}>{chain.identity[chain.cod(n)]}]"
                        for n in chain.morphisms}, name="Diag")
    eta = NatTransformation(
        FinFunctor.identity(sq), Sigma.then(Delta),
        {v: f"[{v};{chain.identity[chain.cod(v)]}|{v}>{chain.identity[chain.cod(v)]}]"
         for v in verts}, name="eta")
    eps = NatTransformation(Delta.then(Sigma), FinFunctor.identity(chain),
                            {x: chain.identity[x] for x in chain.objects},
                            name="eps")
    return Gcwf(B, u, udot, Sigma, Delta, eta, eps, name="naive-doctrine")


def test_all_squares_doctrine_fails_unit_cartesianness():
    # the deliberately broken record: the all-commuting-squares term
    # category satisfies the adjunction but not cartesianness of the unit
    G = _all_squares_doctrine()
    rep = check_gcwf(G)
    assert not rep.passed
    bad = {cid for cid, _s, _d in rep.failures}
    assert bad == {"eta-cartesian"}
    named = {d for cid, _s, d in rep.failures if cid == "eta-cartesian"}
    assert "le[0<m]" in named


# -- context extension ---------------------------------------------------------


def test_context_extension_doctrine_trivial(doctrine):
    for A in doctrine.u.total.objects:
        ext, proj = context_extension(doctrine, A)
        assert ext == doctrine.u.p_obj(A)
        assert doctrine.base.is_identity(proj)


def test_context_extension_subobject_comprehension(subobject2):
    ext, proj = context_extension(subobject2, "2>2|10")
    assert ext == "1"           # one element satisfies the predicate
    assert proj == "1>2|0"      # its monotone inclusion


def test_context_extension_kernel_pair(kernel1):
    # extension of the type f is its kernel-pair object with projection f
    ext, proj = context_extension(kernel1, "0>1|")
    assert ext == "0" and proj == "0>1|"
    ext, proj = context_extension(kernel1, "1>1|0")
    assert ext == "1" and proj == "1>1|0"


# -- judgement enumeration -----------------------------------------------------


def test_discrete_gcwf_subtypes_are_identities(subobject2):
    for j in enumerate_judgements(subobject2, "subtype"):
        assert subobject2.u.total.is_identity(j.witness)


def test_discrete_gcwf_term_enumerations_coincide(subobject2):
    terms = enumerate_judgements(subobject2, "term")
    coerced = enumerate_judgements(subobject2, "coerced-term")
    assert len(terms) == len(coerced)
    pairs = {(j.ctx, j.term, j.type_) for j in terms}
    for j in coerced:
        assert subobject2.u.total.is_identity(j.witness)
        assert (j.ctx, j.term, j.type_) in pairs


def test_doctrine_chain_subtype_has_one_witness(doctrine):
    js = enumerate_judgements(doctrine, "subtype", ctx="x1",
                              sub="x1|0", sup="x1|1")
    assert len(js) == 1


def test_doctrine_terms_of_top_type(doctrine, heyting):
    js = enumerate_judgements(doctrine, "term", ctx="x1",
                              type_=groth_obj_id("x1", "1"))
    assert len(js) == 3


def test_faithful_u_gives_at_most_one_witness(doctrine, subobject2):
    for G in (doctrine, subobject2):
        seen = {}
        for j in enumerate_judgements(G, "subtype"):
            key = (j.ctx, j.sub, j.sup)
            assert key not in seen, key
            seen[key] = j


# -- structural rules ----------------------------------------------------------


def test_rule_sbsm_identity_witness(doctrine):
    ct = enumerate_judgements(doctrine, "coerced-term", ctx="x1")[0]
    ident = SubtypeJ("x1", doctrine.u.total.identity[ct.type_],
                     ct.type_, ct.type_)
    assert rule_sbsm(doctrine, ct, ident) == ct


def test_rule_trans_chain(doctrine):
    st1 = SubtypeJ("x1", groth_mor_id("id:x1", "le[m<1]", "1"), "x1|m", "x1|1")
    st2 = SubtypeJ("x1", groth_mor_id("id:x1", "le[0<m]", "m"), "x1|0", "x1|m")
    out = rule_trans(doctrine, st1, st2)
    assert out == SubtypeJ("x1", groth_mor_id("id:x1", "le[0<1]", "1"),
                           "x1|0", "x1|1")


def test_rule_trans_unit_and_associativity_exact(doctrine):
    subs = enumerate_judgements(doctrine, "subtype")
    by_endpoints = {}
    for st in subs:
        by_endpoints.setdefault((st.ctx, st.sup), []).append(st)
    for st in subs:
        ident_sup = SubtypeJ(st.ctx, doctrine.u.total.identity[st.sup],
                             st.sup, st.sup)
        ident_sub = SubtypeJ(st.ctx, doctrine.u.total.identity[st.sub],
                             st.sub, st.sub)
        assert rule_trans(doctrine, ident_sup, st) == st
        assert rule_trans(doctrine, st, ident_sub) == st
    for st1 in subs:
        for st2 in by_endpoints.get((st1.ctx, st1.sub), []):
            for st3 in by_endpoints.get((st2.ctx, st2.sub), []):
                left = rule_trans(doctrine, rule_trans(doctrine, st1, st2), st3)
                right = rule_trans(doctrine, st1, rule_trans(doctrine, st2, st3))
                assert left == right


def test_rule_trans_distinct_composites_in_non_thin_fibers(kernel1, cod_finset2):
    # with parallel witnesses available the composites stay distinct; the
    # size-2 skeleton provides the two injections 1 -> 2 as witnesses
    T = cod_finset2.total
    wits = [m for m in T.hom("1>1|0", "2>1|00") if cod_finset2.is_vertical(m)]
    assert len(wits) == 2
    swap = "[2>2|10;1>1|0|2>1|00>2>1|00]"
    assert swap in T.morphisms
    comps = {T.c(swap, w) for w in wits}
    assert len(comps) == 2 and comps == set(wits)


def test_rule_wkn_doctrine_trivial_extension(doctrine):
    st = SubtypeJ("x1", groth_mor_id("id:x1", "le[0<m]", "m"), "x1|0", "x1|m")
    out = rule_wkn(doctrine, st, groth_obj_id("x1", "1"))
    assert out == st        # reindexing along an identity projection


def test_rule_wkn_identity_witness(subobject2):
    st = SubtypeJ("2", subobject2.u.total.identity["2>2|10"],
                  "2>2|10", "2>2|10")
    out = rule_wkn(subobject2, st, "2>2|11")
    assert subobject2.u.total.is_identity(out.witness)
    ext, _ = context_extension(subobject2, "2>2|11")
    assert out.ctx == ext


def test_rule_wkn_kernel_pair_reindexes_triangles(kernel1):
    st = enumerate_judgements(kernel1, "subtype", ctx="1")[0]
    out = rule_wkn(kernel1, st, "1>1|0")
    assert not judgement_errors(kernel1, out)


def test_rule_sbst_doctrine_trivial(doctrine):
    A = groth_obj_id("x1", "m")
    tm = CoercedTermJ("x1", "[id:x1;le[0<m]>m]",
                      doctrine.u.total.identity[A], A)
    check_judgement(doctrine, tm)
    st = SubtypeJ("x1", groth_mor_id("id:x1", "le[0<1]", "1"), "x1|0", "x1|1")
    out = rule_sbst(doctrine, st, tm)
    assert out == st        # the substitution map is an identity here


def test_rule_sbst_kernel_pair_full_enumeration(kernel1):
    # substitute every coerced term into every compatible dependent subtype
    count = 0
    for tm in enumerate_judgements(kernel1, "coerced-term"):
        ext, _ = context_extension(kernel1, tm.type_)
        for st in enumerate_judgements(kernel1, "subtype", ctx=ext):
            out = rule_sbst(kernel1, st, tm)
            assert not judgement_errors(kernel1, out)
            count += 1
    assert count > 0


def test_rule_mismatches_raise(doctrine):
    st1 = SubtypeJ("x1", groth_mor_id("id:x1", "le[m<1]", "1"), "x1|m", "x1|1")
    with pytest.raises(MismatchedJudgements):
        rule_trans(doctrine, st1, st1)   # middle type does not match


def test_wkn_then_sbst_recovers_witness(doctrine):
    # weaken a subtyping by B, then substitute any term of B back in: the
    # original witness returns on the nose in the split setting
    B = groth_obj_id("x1", "1")
    st = SubtypeJ("x1", groth_mor_id("id:x1", "le[0<m]", "m"), "x1|0", "x1|m")
    wk = rule_wkn(doctrine, st, B)
    for tm in enumerate_judgements(doctrine, "coerced-term", ctx="x1",
                                   type_=B):
        back = rule_sbst(doctrine, wk, tm)
        assert back == st


# -- every rule output passes the invariant checker ------------------------------


def test_all_rule_outputs_validate(doctrine, kernel1):
    for G in (doctrine, kernel1):
        subs = enumerate_judgements(G, "subtype")
        cts = enumerate_judgements(G, "coerced-term")
        for ct in cts:
            for st in subs:
                if st.ctx == ct.ctx and st.sub == ct.type_:
                    assert not judgement_errors(G, rule_sbsm(G, ct, st))
        for st1 in subs:
            for st2 in subs:
                if st1.ctx == st2.ctx and st2.sup == st1.sub:
                    assert not judgement_errors(G, rule_trans(G, st1, st2))
        for st in subs:
            for B in G.types_over(st.ctx):
                assert not judgement_errors(G, rule_wkn(G, st, B))


# -- faithfulness of Sigma --------------------------------------------------------


def test_sigma_faithful_all_three(doctrine, subobject2, kernel1):
    for G in (doctrine, subobject2, kernel1):
        assert check_sigma_faithful(G).passed, G.name


# -- gcwf morphisms ----------------------------------------------------------------


def test_identity_gcwf_morphism(doctrine):
    m = GcwfMorphism(FinFunctor.identity(doctrine.u.total),
                     FinFunctor.identity(doctrine.udot.total), name="id")
    assert check_gcwf_morphism(doctrine, doctrine, m).passed


def test_gcwf_morphism_square_violation_is_named(kernel1):
    # collapse every term onto the empty section: the Sigma square breaks
    # at the other section and the report names it
    S = kernel1.udot.total
    zero = "(0>0|;0>0|)"
    const = FinFunctor(S, S, {o: zero for o in S.objects},
                       {m: S.identity[zero] for m in S.morphisms},
                       name="collapse")
    m = GcwfMorphism(FinFunctor.identity(kernel1.u.total), const, name="broken")
    rep = check_gcwf_morphism(kernel1, kernel1, m)
    assert not rep.passed
    bad = [d for cid, _s, d in rep.failures if cid == "sigma-square-objects"]
    assert "(1>1|0;1>1|0)" in bad
