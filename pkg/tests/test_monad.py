import pytest

from subfib.errors import TooLarge
from subfib.fincat import validate
from subfib.gcwf import check_gcwf, enumerate_judgements
from subfib.monad import (T_fib, T_fib_morphism, T_gcwf, check_counit_universal,
                          check_monad_laws_fib, check_monad_laws_gcwf,
                          comma_unit, iterate)


# -- the comma endofunctor on fibrations ------------------------------------------


def test_comma_of_discrete_is_isomorphic_to_source(subobject2):
    u = subobject2.u
    Tp = T_fib(u)
    # only identity verticals: eta is bijective on objects and morphisms
    eta = comma_unit(u, Tp)
    assert validate(eta).passed
    assert len(Tp.total.objects) == len(u.total.objects)
    assert len(Tp.total.morphisms) == len(u.total.morphisms)
    assert len(set(eta.object_map.values())) == len(eta.object_map)
    assert len(set(eta.morphism_map.values())) == len(eta.morphism_map)


def test_comma_of_cod_finset1_has_four_triangles(cod_finset1):
    Tp = T_fib(cod_finset1)
    assert len(Tp.total.objects) == 4
    assert validate(Tp.fibration.p).passed
    assert Tp.fibration.classify().is_fibration


def test_comma_projections_are_fibration_morphisms(cod_finset1):
    from subfib.fibration import is_fibration_morphism
    Tp = T_fib(cod_finset1)
    assert is_fibration_morphism(Tp.dom_proj, Tp.fibration, cod_finset1).passed
    assert is_fibration_morphism(Tp.cod_proj, Tp.fibration, cod_finset1).passed


def test_comma_cartesian_morphisms_are_pairwise_cartesian(cod_finset1):
    # the brute-force flags on (p/p) agree with componentwise cartesianness
    Tp = T_fib(cod_finset1)
    src_flags = cod_finset1.cartesian_flags
    for mid, flag in Tp.fibration.cartesian_flags.items():
        m, n = Tp.mor_pair[mid]
        assert flag == (src_flags[m] and src_flags[n]), mid


def test_comma_preserves_faithfulness(heyting):
    fib, _ = heyting
    assert T_fib(fib).fibration.classify().faithful


def test_T_fib_on_identity_morphism_is_identity(cod_finset1):
    from subfib.fincat import FinFunctor
    Tp = T_fib(cod_finset1)
    TH = T_fib_morphism(FinFunctor.identity(cod_finset1.total), Tp, Tp)
    assert all(TH.on_obj(v) == v for v in Tp.total.objects)
    assert all(TH.on_mor(k) == k for k in Tp.total.morphisms)


def test_comma_guard(heyting):
    fib, _ = heyting
    with pytest.raises(TooLarge):
        T_fib(fib, max_objects=3)


# -- monad laws at the fibration level ---------------------------------------------


def test_monad_laws_fib_discrete(subobject2):
    assert check_monad_laws_fib(subobject2.u).passed


def test_monad_laws_fib_doctrine(heyting):
    fib, _ = heyting
    assert check_monad_laws_fib(fib).passed


def test_monad_laws_fib_cod_finset1(cod_finset1):
    # the size-1 skeleton has all pullbacks, so cod is a genuine fibration
    assert cod_finset1.classify().is_fibration
    assert check_monad_laws_fib(cod_finset1).passed


# -- the lift to gcwfs ---------------------------------------------------------------


def test_T_gcwf_discrete_collapses(subobject2):
    TD = T_gcwf(subobject2)
    TG = TD.T_object
    assert check_gcwf(TG).passed
    assert len(TG.u.total.objects) == len(subobject2.u.total.objects)
    assert len(TG.udot.total.objects) == len(subobject2.udot.total.objects)


def test_T_gcwf_doctrine_passes_check(doctrine):
    TD = T_gcwf(doctrine)          # verify=True runs check_gcwf internally
    assert check_gcwf(TD.T_object).passed


def test_T_gcwf_deltabar_on_identity(doctrine):
    TD = T_gcwf(doctrine)
    TG = TD.T_object
    for A in doctrine.u.total.objects:
        ida = doctrine.u.total.identity[A]
        ob = TG.Delta.on_obj(ida)
        g, a = TD.term_parts[ob]
        assert doctrine.u.total.is_identity(g)


def test_counit_universal_property(doctrine, kernel1, subobject2):
    for G in (doctrine, kernel1, subobject2):
        TD = T_gcwf(G)
        assert check_counit_universal(G, TD).passed, G.name


def test_monad_laws_gcwf_discrete(subobject2):
    assert check_monad_laws_gcwf(subobject2).passed


def test_monad_laws_gcwf_doctrine(doctrine):
    assert check_monad_laws_gcwf(doctrine).passed


def test_monad_laws_gcwf_kernel_pair(kernel1):
    assert check_monad_laws_gcwf(kernel1).passed


def test_unit_is_a_gcwf_morphism(doctrine):
    from subfib.gcwf import check_gcwf_morphism
    TD = T_gcwf(doctrine)
    assert check_gcwf_morphism(doctrine, TD.T_object, TD.unit).passed


# -- judgement correspondence and iteration ------------------------------------------


def test_subtypes_become_types_in_TG(doctrine):
    TD = T_gcwf(doctrine)
    TG = TD.T_object
    for gamma in doctrine.base.objects:
        subs = enumerate_judgements(doctrine, "subtype", ctx=gamma)
        types = enumerate_judgements(TG, "type", ctx=gamma)
        assert {j.witness for j in subs} == {j.type_ for j in types}


def test_coerced_terms_become_terms_in_TG(doctrine):
    TD = T_gcwf(doctrine)
    TG = TD.T_object
    from subfib.monad import term_obj_id
    for gamma in doctrine.base.objects:
        cts = enumerate_judgements(doctrine, "coerced-term", ctx=gamma)
        terms = enumerate_judgements(TG, "term", ctx=gamma)
        assert {term_obj_id(j.witness, j.term) for j in cts} == \
            {j.term for j in terms}
        # the type of the image term is the witness
        for j in terms:
            g, a = TD.term_parts[j.term]
            assert j.type_ == g


def test_rules_inside_TG_are_squares_of_rules(doctrine):
    # composition of subtype witnesses in T(G) is componentwise composition
    TD = T_gcwf(doctrine)
    TG = TD.T_object
    T = TG.u.total
    for (k2, k1), k21 in T.compose.items():
        m2, n2 = TD.Tu.mor_pair[k2]
        m1, n1 = TD.Tu.mor_pair[k1]
        mc, nc = TD.Tu.mor_pair[k21]
        assert mc == doctrine.u.total.c(m2, m1)
        assert nc == doctrine.u.total.c(n2, n1)


def test_rule_wkn_inside_TG_is_componentwise(doctrine):
    # weakening a subtype-of-squares in T(G) reindexes both components,
    # matching weakening of the component subtypings in G
    from subfib.gcwf import rule_wkn
    TD = T_gcwf(doctrine)
    TG = TD.T_object
    sts = enumerate_judgements(TG, "subtype", ctx="x1")
    for st in sts[:12]:
        for B in TG.types_over("x1")[:4]:
            out = rule_wkn(TG, st, B)
            m, n = TD.Tu.mor_pair[st.witness]
            mo, no = TD.Tu.mor_pair[out.witness]
            ext_proj = TG.u.p_mor(TG.eps.at(B))
            assert mo == doctrine.u.reindex_vertical(m, ext_proj)
            assert no == doctrine.u.reindex_vertical(n, ext_proj)


def test_iterate_zero_and_guard(doctrine):
    assert iterate(doctrine, 0) is doctrine
    with pytest.raises(TooLarge):
        iterate(doctrine, 3)


def test_iterate_once_on_discrete_keeps_counts(subobject2):
    G1 = iterate(subobject2, 1)
    assert len(G1.u.total.objects) == len(subobject2.u.total.objects)


def test_iterate_twice_counts_squares(chain2_doctrine):
    # type objects of the second iteration are the commuting squares of the
    # 2-chain; counted against a direct enumeration
    G2 = iterate(chain2_doctrine, 2)
    els = ["0", "1"]
    leq = lambda a, b: a <= b
    oracle = sum(1 for x in els for y in els for x2 in els for y2 in els
                 if leq(x, y) and leq(x2, y2) and leq(x, x2) and leq(y, y2))
    assert len(G2.u.total.objects) == oracle == 6
    assert check_gcwf(G2).passed


def test_T_fib_refuses_partial_fibrations(cod_finset2):
    from subfib.errors import NotAFibration
    with pytest.raises(NotAFibration):
        T_fib(cod_finset2)
