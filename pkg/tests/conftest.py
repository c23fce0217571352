import pytest

from subfib.fincat import FinCategory, FinFunctor, poset_category, terminal_category
from subfib.fibration import Fibration, IndexedCategory, grothendieck
from subfib.fincat import _arrow_category
from subfib.models import (doctrine_gcwf, finset_skeleton, heyting_sample,
                           kernel_pair_gcwf, subobject_gcwf)


@pytest.fixture(scope="session")
def finset1():
    return finset_skeleton(1)


@pytest.fixture(scope="session")
def finset2():
    return finset_skeleton(2)


@pytest.fixture(scope="session")
def heyting():
    return heyting_sample()


@pytest.fixture(scope="session")
def doctrine(heyting):
    fib, _spec = heyting
    return doctrine_gcwf(fib)


@pytest.fixture(scope="session")
def subobject2():
    return subobject_gcwf(2)


@pytest.fixture(scope="session")
def kernel1(finset1):
    return kernel_pair_gcwf(finset1)


@pytest.fixture(scope="session")
def cod_finset1(finset1):
    _arrow, forget, _sq = _arrow_category(finset1)
    return Fibration(forget)


@pytest.fixture(scope="session")
def cod_finset2(finset2):
    _arrow, forget, _sq = _arrow_category(finset2)
    return Fibration(forget)


def z2_category():
    return FinCategory(
        ["*"], {"e": ("*", "*"), "g": ("*", "*")}, {"*": "e"},
        {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"},
        name="Z2")


def chain_base():
    return FinCategory(
        ["b0", "b1", "b2"],
        {"i0": ("b0", "b0"), "i1": ("b1", "b1"), "i2": ("b2", "b2"),
         "s": ("b2", "b1"), "t": ("b1", "b0"), "ts": ("b2", "b0")},
        {"b0": "i0", "b1": "i1", "b2": "i2"},
        {("i0", "i0"): "i0", ("i1", "i1"): "i1", ("i2", "i2"): "i2",
         ("s", "i2"): "s", ("i1", "s"): "s", ("t", "i1"): "t",
         ("i0", "t"): "t", ("ts", "i2"): "ts", ("i0", "ts"): "ts",
         ("t", "s"): "ts"},
        name="chain-base")


@pytest.fixture()
def groupoid_fibration():
    """Z2 fibers over a 3-chain base: a split fibration with parallel
    vertical arrows (not faithful)."""
    z2 = z2_category()
    base = chain_base()
    idf = FinFunctor(z2, z2, {"*": "*"}, {"e": "e", "g": "g"})
    X = IndexedCategory(base, {b: z2 for b in base.objects},
                        {m: idf for m in base.morphisms}, name="z2idx")
    return grothendieck(X)


@pytest.fixture(scope="session")
def chain2_doctrine():
    """Doctrine gcwf over the terminal base with a single 2-chain fiber."""
    chain2 = poset_category(["0", "1"], lambda a, b: a <= b, name="2chain")
    B = terminal_category()
    idf = FinFunctor(chain2, chain2, {o: o for o in chain2.objects},
                     {m: m for m in chain2.morphisms})
    X = IndexedCategory(B, {"*": chain2}, {"id*": idf}, name="c2")
    return doctrine_gcwf(grothendieck(X))
