import pytest
from hypothesis import given, strategies as st

from gcadec import corpus as C
from gcadec.groups.core import CyclicGroup, ProductGroup, make_group
from gcadec.groups.subgroups import commutator_subgroup, is_normal
from gcadec.groups.verbal import (GroupWord, characteristic_simple_decomposition,
                                  find_invariance_violation, find_nontrivial_proper_verbal,
                                  is_fully_invariant, is_simple, power_subgroup, reduced_words,
                                  verbal_subgroup)


def test_word_parse_and_print():
    w = GroupWord.parse("x1^-1 x2^-1 x1 x2")
    assert w == GroupWord.commutator()
    assert str(GroupWord.parse("x^30")) == "x1^30"
    assert GroupWord.parse("x1 x1^-1").letters == ()
    with pytest.raises(ValueError):
        GroupWord.parse("z2")


def test_reduced_word_counts():
    # 2k (2k-1)^(n-1) reduced words of length n on k letters
    words = list(reduced_words(2, 3))
    assert len(words) == 4 + 12 + 36
    assert all(len(w.letters) <= 3 for w in words)


def test_commutator_word_gives_derived_subgroup():
    for name in ("S3", "S4", "A4", "D4", "Q8"):
        g = make_group(name)
        assert verbal_subgroup(g, GroupWord.commutator()) == commutator_subgroup(g)


def test_sl25_power_word_is_center():
    sl = make_group("SL25")
    h = verbal_subgroup(sl, GroupWord.parse("x^30"))
    assert h.order == 2
    assert power_subgroup(sl, 30) == h


@pytest.mark.parametrize("name", ["Z2", "Z3", "Z5", "Z2^2", "Z3^2", "A5", "A5^2"])
def test_no_proper_verbal_subgroup_for_simple_powers(name):
    g = C.group(name)
    assert find_nontrivial_proper_verbal(g, exhaustive_len=3) is None
    assert characteristic_simple_decomposition(g) is not None


@pytest.mark.parametrize("name", ["Z4", "Z6", "Z8", "S3", "D4", "Q8", "A4", "S4", "SL25"])
def test_proper_verbal_subgroup_found_and_fully_invariant(name):
    g = C.group(name)
    found = find_nontrivial_proper_verbal(g)
    assert found is not None
    h, word = found
    assert 1 < h.order < g.order
    assert verbal_subgroup(g, word) == h
    assert is_normal(g, h)
    if g.order <= 24:
        assert find_invariance_violation(g, h) is None
    assert is_fully_invariant(g, h)
    assert characteristic_simple_decomposition(g) is None


def test_invariance_violation_for_non_characteristic_subgroup():
    # the first coordinate axis of Z2^2 is normal but swapped by an automorphism
    g = C.group("Z2^2")
    from gcadec.groups.subgroups import Subgroup
    axis = Subgroup.generated(g, [g.element([1, 0])])
    assert find_invariance_violation(g, axis) is not None


def test_simple_detection():
    assert is_simple(make_group("A5"))
    assert is_simple(CyclicGroup(7))
    assert not is_simple(CyclicGroup(6))
    assert not is_simple(make_group("A4"))
    assert not is_simple(make_group("SL25"))


def test_factorization_of_a5_power():
    fac = characteristic_simple_decomposition(C.group("A5^3"))
    assert not fac.abelian and fac.multiplicity == 3 and fac.simple.order == 60
    fac = characteristic_simple_decomposition(C.group("Z3^2"))
    assert fac.abelian and fac.prime == 3 and fac.multiplicity == 2


def test_mixed_product_is_not_simple_power():
    g = ProductGroup([CyclicGroup(2), CyclicGroup(3)])
    assert characteristic_simple_decomposition(g) is None
    g = ProductGroup([CyclicGroup(5), make_group("A5")])
    assert characteristic_simple_decomposition(g) is None


@given(st.sampled_from(["S3", "D4", "Q8", "A4", "Z4", "Z6"]),
       st.lists(st.tuples(st.integers(1, 2), st.sampled_from([1, -1])), min_size=1, max_size=5))
def test_every_verbal_subgroup_is_fully_invariant(name, letters):
    g = C.group(name)
    h = verbal_subgroup(g, GroupWord(2, tuple(letters)))
    assert find_invariance_violation(g, h) is None
