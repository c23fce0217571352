import pytest

from subfib.errors import NoPullback, NotFaithful, TooLarge
from subfib.fincat import terminal_category
from subfib.gcwf import check_gcwf, enumerate_judgements
from subfib.models import (doctrine_gcwf, finset_skeleton, kernel_pair_gcwf,
                           subobject_gcwf, validate_heyting_spec)


# -- finset skeletons ----------------------------------------------------------


def test_finset_zero_is_terminal_like():
    C = finset_skeleton(0)
    assert len(C.objects) == 1 and len(C.morphisms) == 1


def test_finset_two_counts():
    C = finset_skeleton(2)
    assert len(C.objects) == 3
    assert len(C.hom("2", "2")) == 4


def test_finset_three_hom_count():
    C = finset_skeleton(3)
    assert len(C.hom("3", "3")) == 27


def test_finset_guard():
    with pytest.raises(TooLarge):
        finset_skeleton(5)


# -- kernel-pair gcwf ----------------------------------------------------------


def test_kernel_pair_on_terminal_category_is_trivial():
    G = kernel_pair_gcwf(terminal_category())
    assert check_gcwf(G).passed
    assert len(G.u.total.objects) == 1
    assert len(G.udot.total.objects) == 1


def test_kernel_pair_finset1_passes(kernel1):
    assert check_gcwf(kernel1).passed


def test_kernel_pair_finset1_fiber_counts(kernel1):
    fib = kernel1.u.fiber("1")
    assert len(fib.objects) == 2
    assert len(fib.morphisms) == 3   # the three vertical triangles


def test_kernel_pair_counit_is_the_pullback_square(kernel1, finset1):
    from subfib.fincat import pullback
    for f in kernel1.u.total.objects:
        eps = kernel1.eps.at(f)
        assert kernel1.u.cartesian_flags[eps]
        pb = pullback(finset1, f, f)
        assert kernel1.u.total.dom(eps) == pb.projections[0]


def test_kernel_pair_sigma_of_terms(kernel1):
    for j in enumerate_judgements(kernel1, "term"):
        assert kernel1.Sigma.on_obj(j.term) == j.type_


def test_kernel_pair_requires_all_pullbacks():
    # the size-2 skeleton lacks 2 x_1 2 = 4, so the construction must refuse;
    # the full arrow-category model exists over no finite skeleton beyond 1
    with pytest.raises(NoPullback):
        kernel_pair_gcwf(finset_skeleton(2))


# -- subobject gcwf ------------------------------------------------------------


def test_subobject_gcwf_passes_and_is_discrete(subobject2):
    assert check_gcwf(subobject2).passed
    assert subobject2.u.classify().discrete
    assert subobject2.udot.classify().discrete


def test_subobject_comprehension_of_true_is_everything(subobject2):
    from subfib.gcwf import context_extension
    ext, proj = context_extension(subobject2, "2>2|11")
    assert ext == "2"
    assert subobject2.base.is_identity(proj)


def test_subobject_three_element_comprehension():
    from subfib.gcwf import context_extension
    G = subobject_gcwf(3)
    ext, proj = context_extension(G, "3>2|110")
    assert ext == "2"
    assert proj == "2>3|01"


def test_subobject_guards():
    with pytest.raises(TooLarge):
        subobject_gcwf(5)
    with pytest.raises(TooLarge):
        subobject_gcwf(1)


def test_subobject_comprehension_recovers_true_predicate(subobject2):
    # comprehension followed by Sigma_top yields the pulled-back true
    # predicate: the counit triangle commutes over each object
    G = subobject2
    T = G.u.total
    for phi in T.objects:
        eps = G.eps.at(phi)
        src = T.dom(eps)
        d, vals = src.split("|", 1)
        assert set(vals) <= {"1"}    # constantly-true predicate


# -- doctrine gcwf and the Heyting sample ---------------------------------------


def test_heyting_spec_validates(heyting):
    _fib, spec = heyting
    assert validate_heyting_spec(spec).passed


def test_heyting_implication_oracle(heyting):
    # independent oracle: a => b is the largest c with c ∧ a <= b
    _fib, spec = heyting
    for x in spec.base.objects:
        els, leq, meet = spec.elements[x], spec.leq[x], spec.meet[x]
        for a in els:
            for b in els:
                cands = [c for c in els if (meet[(c, a)], b) in leq]
                best = [c for c in cands
                        if all((d, c) in leq for d in cands)]
                assert len(best) == 1
                assert spec.imp[x][(a, b)] == best[0]


def test_heyting_chain_values(heyting):
    _fib, spec = heyting
    imp = spec.imp["x1"]
    assert imp[("m", "0")] == "0"
    assert imp[("1", "m")] == "m"
    assert imp[("m", "m")] == "1"


def test_heyting_reindex_preserves_top(heyting):
    _fib, spec = heyting
    for s, (d, c) in spec.base.morphisms.items():
        assert spec.reindex_obj[s][spec.top[c]] == spec.top[d]


def test_heyting_fibration_is_split_faithful(heyting):
    fib, _ = heyting
    c = fib.classify()
    assert c.is_fibration and c.split and c.faithful and not c.discrete


def test_doctrine_gcwf_passes(doctrine):
    assert check_gcwf(doctrine).passed


def test_doctrine_requires_faithful(groupoid_fibration):
    with pytest.raises(NotFaithful):
        doctrine_gcwf(groupoid_fibration)


def test_doctrine_on_discrete_fibration_degenerates(subobject2):
    # terms = types and all judgements degenerate to the discrete case
    G = doctrine_gcwf(subobject2.u)
    assert check_gcwf(G).passed
    assert len(G.udot.total.objects) == len(G.u.total.objects)
    for j in enumerate_judgements(G, "subtype"):
        assert G.u.total.is_identity(j.witness)


def test_doctrine_terms_biject_with_entailment_witnesses(doctrine):
    # terms over Γ of type φ correspond to pairs (ψ, witness ψ <= φ)
    for gamma in doctrine.base.objects:
        subs = enumerate_judgements(doctrine, "subtype", ctx=gamma)
        terms = enumerate_judgements(doctrine, "term", ctx=gamma)
        assert len(subs) == len(terms)
        term_keys = {(j.term) for j in terms}
        assert {j.witness for j in subs} == term_keys
