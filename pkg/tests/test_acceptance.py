"""Acceptance suite: one test per criterion, each printing a pass/fail line.

All comparisons are exact (identifier equality); the only tolerances are
the stated wall-clock budgets, which are asserted.  Criterion 3 names a
kernel-pair fixture over the size-2 skeleton; that category provably lacks
the pullback 2 x_1 2 = 4, so the gcwf cannot exist there (see the decisions
ledger).  The criterion is split into its constructible content plus a
strict xfail documenting the defect.
"""

import time

import pytest

from subfib.errors import NoLift, NoPullback
from subfib.fincat import (FinFunctor, discrete_category, poset_category,
                           validate, walking_arrow)
from subfib.fibration import (IndexedCategory, groth_mor_id, groth_obj_id,
                              grothendieck, indexed_of)
from subfib.funty import (check_fun_structure, derive_fun_subtyping,
                          fun_structure_doctrine, fun_structure_subobject,
                          fun_type, stage_passed)
from subfib.gcwf import (SubtypeJ, check_gcwf, check_sigma_faithful,
                         context_extension, enumerate_judgements,
                         judgement_errors, rule_sbsm, rule_sbst, rule_trans,
                         rule_wkn)
from subfib.models import finset_skeleton, kernel_pair_gcwf
from subfib.monad import (T_fib, T_gcwf, check_monad_laws_fib,
                          check_monad_laws_gcwf, comma_unit, term_obj_id)


def report(num: int, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {num} failed: {detail}"


# -- 1: factorization suite ------------------------------------------------------


def test_acceptance_1_factorization_suite(cod_finset2):
    t0 = time.time()
    F = cod_finset2
    T = F.total
    flags = F.cartesian_flags
    verts = set(F.vertical_morphisms())
    n_fact = n_nolift = 0
    for r in T.morphisms:
        # independent oracle: every vertical/cartesian factorization of r
        pairs = [(v, c)
                 for v in T.mors_from(T.dom(r)) if v in verts
                 for c in T.hom(T.cod(v), T.cod(r))
                 if flags[c] and F.p_mor(c) == F.p_mor(r)
                 and T.c(c, v) == r]
        # each cartesian part admits exactly one vertical filler
        per_c = {}
        for v, c in pairs:
            assert per_c.setdefault(c, v) == v, (r, c)
        try:
            v, c = F.factorize(r)
            n_fact += 1
            assert (v, c) in pairs, r
            assert T.c(c, v) == r
            chosen = F.cartesian_lift(T.cod(r), F.p_mor(r))
            unique_for_chosen = [(vv, cc) for vv, cc in pairs if cc == chosen]
            assert unique_for_chosen == [(v, c)], r
        except NoLift:
            n_nolift += 1
            assert not pairs, f"{r} has factorizations but factorize refused"
    elapsed = time.time() - t0
    assert len(T.morphisms) == 249
    assert n_fact == 186 and n_nolift == 63
    report(1, n_fact >= 100 and elapsed < 10.0,
           f"{n_fact} factorized + {n_nolift} oracle-confirmed missing lifts "
           f"over the truncated skeleton, {elapsed:.1f}s")


# -- 2: Grothendieck round trip ---------------------------------------------------


def _discrete_indexed():
    base = walking_arrow()
    fa = discrete_category(["p", "q", "r"], name="Fa")
    fb = discrete_category(["u", "v"], name="Fb")
    ra = FinFunctor(fa, fa, {o: o for o in fa.objects},
                    {m: m for m in fa.morphisms})
    rb = FinFunctor(fb, fb, {o: o for o in fb.objects},
                    {m: m for m in fb.morphisms})
    ar = FinFunctor(fb, fa, {"u": "p", "v": "r"},
                    {"id:u": "id:p", "id:v": "id:r"})
    return IndexedCategory(base, {"a": fa, "b": fb},
                           {"id:a": ra, "id:b": rb, "ar": ar}, name="disc")


def _poset_indexed():
    base = walking_arrow()
    fa = poset_category(["0", "1"], lambda x, y: x <= y, name="Pa")
    fb = poset_category(["x", "y", "z"], lambda x, y: x <= y, name="Pb")
    ra = FinFunctor(fa, fa, {o: o for o in fa.objects},
                    {m: m for m in fa.morphisms})
    rb = FinFunctor(fb, fb, {o: o for o in fb.objects},
                    {m: m for m in fb.morphisms})
    omap = {"x": "0", "y": "0", "z": "1"}
    ar = FinFunctor(fb, fa, omap,
                    {m: f"le[{omap[fb.dom(m)]}<{omap[fb.cod(m)]}]"
                     for m in fb.morphisms})
    return IndexedCategory(base, {"a": fa, "b": fb},
                           {"id:a": ra, "id:b": rb, "ar": ar}, name="pos")


def test_acceptance_2_grothendieck_round_trip(heyting):
    fixtures = [heyting[0].origin_indexed, _discrete_indexed(), _poset_indexed()]
    for X in fixtures:
        F = grothendieck(X)
        assert indexed_of(F) == X                  # identity on strict data
        F2 = grothendieck(indexed_of(F))
        assert F2.total == F.total and F2.p == F.p # isomorphism on the nose
        assert F2.cleavage == F.cleavage
    report(2, True, f"{len(fixtures)} indexed categories, exact equality")


# -- 3: gcwf axiom suite -----------------------------------------------------------


def test_acceptance_3_gcwf_axiom_suite(subobject2, doctrine, kernel1):
    t0 = time.time()
    results = {}
    for G in (kernel1, subobject2, doctrine):
        rep = check_gcwf(G)
        results[G.name] = rep.passed
        assert rep.passed, rep.render()
        eta_flags = G.udot.cartesian_flags
        eps_flags = G.u.cartesian_flags
        assert all(eta_flags[G.eta.at(x)] for x in G.udot.total.objects)
        assert all(eps_flags[G.eps.at(A)] for A in G.u.total.objects)
    # the subobject model really is a cwf: both fibrations discrete
    assert subobject2.u.classify().discrete
    assert subobject2.udot.classify().discrete
    elapsed = time.time() - t0
    report(3, elapsed < 60.0,
           "kernel-pair at its constructible scale (size-1 skeleton), "
           f"subobject(2), doctrine; {elapsed:.1f}s; size-2 kernel-pair "
           "fixture is impossible, see the xfail and the ledger")


@pytest.mark.xfail(strict=True, raises=NoPullback, reason=(
    "spec defect: finset_skeleton(2) lacks the pullback of 2->1 along "
    "itself (the apex has 4 elements), so cod is not a fibration there and "
    "kernel_pair_gcwf cannot be assembled; no finite truncation beyond "
    "size 1 admits the full arrow-category model"))
def test_acceptance_3_kernel_pair_finset2_as_stated():
    G = kernel_pair_gcwf(finset_skeleton(2))
    assert check_gcwf(G).passed


# -- 4: structural rules ------------------------------------------------------------


def test_acceptance_4_structural_rules(doctrine, kernel1):
    n = 0
    for G in (doctrine, kernel1):
        subs = enumerate_judgements(G, "subtype")
        cts = enumerate_judgements(G, "coerced-term")
        for ct in cts:
            for st in subs:
                if st.ctx == ct.ctx and st.sub == ct.type_:
                    assert not judgement_errors(G, rule_sbsm(G, ct, st))
                    n += 1
        by_endpoints = {}
        for st in subs:
            by_endpoints.setdefault((st.ctx, st.sup), []).append(st)
        for st1 in subs:
            for st2 in by_endpoints.get((st1.ctx, st1.sub), []):
                assert not judgement_errors(G, rule_trans(G, st1, st2))
                n += 1
                for st3 in by_endpoints.get((st2.ctx, st2.sub), []):
                    left = rule_trans(G, rule_trans(G, st1, st2), st3)
                    right = rule_trans(G, st1, rule_trans(G, st2, st3))
                    assert left == right
        for st in subs:
            ident_sup = SubtypeJ(st.ctx, G.u.total.identity[st.sup],
                                 st.sup, st.sup)
            ident_sub = SubtypeJ(st.ctx, G.u.total.identity[st.sub],
                                 st.sub, st.sub)
            assert rule_trans(G, ident_sup, st) == st
            assert rule_trans(G, st, ident_sub) == st
            for B in G.types_over(st.ctx):
                assert not judgement_errors(G, rule_wkn(G, st, B))
                n += 1
        for tm in cts:
            ext, _ = context_extension(G, tm.type_)
            for st in enumerate_judgements(G, "subtype", ctx=ext):
                assert not judgement_errors(G, rule_sbst(G, st, tm))
                n += 1
    report(4, n > 0, f"{n} premise combinations, 100% valid outputs")


# -- 5: faithfulness ------------------------------------------------------------------


def test_acceptance_5_sigma_faithful(doctrine, subobject2, kernel1):
    for G in (doctrine, subobject2, kernel1):
        rep = check_sigma_faithful(G)
        assert rep.passed, rep.render()
    report(5, True, "unit monic, Sigma injective, image bijection exact "
           "on all three fixtures")


# -- 6: non-uniqueness witness ---------------------------------------------------------


def test_acceptance_6_two_subtype_witnesses(cod_finset2):
    # A' = (id: 1 -> 1), A = ([id,id]: 2 -> 1) in the kernel-pair reading of
    # the cod fibration over the size-2 skeleton: the two coproduct
    # injections witness A' <= A independently
    T = cod_finset2.total
    wits = [m for m in T.hom("1>1|0", "2>1|00")
            if cod_finset2.is_vertical(m)]
    assert len(wits) >= 2
    legs = set()
    for m in wits:
        legs.add(cod_finset2.total.morphisms[m][0])
    injections = {w.split(";")[0][1:] for w in wits}
    assert injections == {"1>2|0", "1>2|1"}
    report(6, len(wits) == 2, "the two injections 1 -> 2, by enumeration")


# -- 7: monad laws ----------------------------------------------------------------------


def test_acceptance_7_monad_laws(doctrine, subobject2):
    t0 = time.time()
    rep1 = check_monad_laws_fib(doctrine.u)
    assert rep1.passed, rep1.render()
    rep2 = check_monad_laws_gcwf(doctrine)
    assert rep2.passed, rep2.render()
    # (p/p) of the discrete subobject fibration is isomorphic to itself:
    # the unit is bijective on objects and morphisms and functorial
    u = subobject2.u
    Tp = T_fib(u)
    eta = comma_unit(u, Tp)
    assert validate(eta).passed
    assert len(Tp.total.objects) == len(u.total.objects)
    assert len(Tp.total.morphisms) == len(u.total.morphisms)
    assert len(set(eta.object_map.values())) == len(eta.object_map)
    assert len(set(eta.morphism_map.values())) == len(eta.morphism_map)
    elapsed = time.time() - t0
    report(7, elapsed < 60.0, f"fib + gcwf laws on the doctrine, comma of "
           f"the discrete fibration collapses; {elapsed:.1f}s")


# -- 8: function types -------------------------------------------------------------------


def test_acceptance_8_function_types(doctrine, heyting, subobject2):
    FS_doc = fun_structure_doctrine(doctrine, heyting[1])
    rep_doc = check_fun_structure(doctrine, FS_doc)
    assert stage_passed(rep_doc, "stage1"), rep_doc.render()
    # the stage-2 failure on the doctrine is expected behaviour: trivial
    # comprehension cannot make the lam square a pullback
    assert not stage_passed(rep_doc, "stage2")

    FS_sub = fun_structure_subobject(subobject2)
    rep_sub = check_fun_structure(subobject2, FS_sub)
    assert stage_passed(rep_sub, "stage1")
    assert stage_passed(rep_sub, "stage2")

    one, m = groth_obj_id("x1", "1"), groth_obj_id("x1", "m")
    assert fun_type(FS_doc, one, m) == m
    assert fun_type(FS_doc, m, one) == one
    st = SubtypeJ("x1", groth_mor_id("id:x1", "le[m<1]", "1"), m, one)
    out = derive_fun_subtyping(FS_doc, st, st)
    assert (out.sub, out.sup) == (m, one)
    assert not judgement_errors(doctrine, out)
    report(8, True, "stage 1 on the Heyting doctrine (all corner arrows), "
           "both stages on subobject(2), Fun(1,m)=m <= Fun(m,1)=1, "
           "doctrine stage-2 failure asserted as expected")


# -- 9: judgement correspondence in T(G) -----------------------------------------------


def test_acceptance_9_judgement_correspondence(doctrine):
    TD = T_gcwf(doctrine)
    TG = TD.T_object
    for gamma in doctrine.base.objects:
        subs = enumerate_judgements(doctrine, "subtype", ctx=gamma)
        types = enumerate_judgements(TG, "type", ctx=gamma)
        assert {j.witness for j in subs} == {j.type_ for j in types}, gamma
        cts = enumerate_judgements(doctrine, "coerced-term", ctx=gamma)
        terms = enumerate_judgements(TG, "term", ctx=gamma)
        assert {term_obj_id(j.witness, j.term) for j in cts} == \
            {j.term for j in terms}, gamma
        for j in terms:
            g, _a = TD.term_parts[j.term]
            assert j.type_ == g
    report(9, True, "SubtypeJ = TypeJ and CoercedTermJ = TermJ under the "
           "canonical mapping, all contexts")


# -- 10: CLI round trips ----------------------------------------------------------------


def test_acceptance_10_cli_fixtures(tmp_path):
    from subfib.cli import main as cli
    from subfib.modelio import canonical_dumps, encode_model, load_model
    fixtures = [
        ("kernel_pair_finset1.json", ["build", "kernel-pair", "--n", "1"]),
        ("subobject2.json", ["build", "subobject", "--n", "2"]),
        ("doctrine.json", ["build", "doctrine"]),
    ]
    for fname, cmd in fixtures:
        path = str(tmp_path / fname)
        assert cli(cmd + ["-o", path]) == 0
        assert cli(["validate", path]) == 0
        assert cli(["check", "gcwf", "--model", path]) == 0
        assert cli(["check", "faithful", "--model", path]) == 0
        raw = open(path, "rb").read()
        again = canonical_dumps(encode_model(load_model(path))).encode()
        assert raw == again
    report(10, True, f"{len(fixtures)} fixtures: build, check exit 0, "
           "byte-identical round trip")
