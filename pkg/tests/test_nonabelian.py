from collections import Counter

import numpy as np
import pytest

from gcadec import corpus as C
from gcadec.errors import LemmaVerificationError
from gcadec.gca import equals_shift, make_gca, power, transport
from gcadec.groups.homs import Homomorphism, constant_e, product_endomorphism
from gcadec.nonabelian import (build_flow, is_transitive_nonabelian, lemma_exponent, lemma_shift,
                               minimal_components, structural_surjectivity, verify_lemma)
from gcadec.oracles import kernel_finite_search, local_image_deficiency


def test_single_automorphism_leaf():
    leaf, reason = structural_surjectivity(C.a5_conjugation_rule())
    assert reason is None and leaf.image_sets == [{0}]


def test_constant_rule_not_surjective():
    a5 = C.group("A5")
    leaf, reason = structural_surjectivity(make_gca(a5, [(0,)], [constant_e(a5)]))
    assert leaf is None and reason["condition"] == "a"


def test_swap_flow():
    leaf, _ = structural_surjectivity(C.a5_swap_rule())
    assert leaf.image_sets == [{0, 1}]
    flow = build_flow(leaf)
    assert flow.cycle_notation() == "(1 2)"
    assert flow.order == 2 and flow.alpha == 1 and flow.beta == (0,)
    assert flow.cycles[0].return_orders == [1, 1]
    ok, ev = is_transitive_nonabelian(C.a5_swap_rule())
    assert not ok
    assert equals_shift(power(C.a5_swap_rule(), 2), (0,))


@pytest.mark.parametrize("u", [(0,), (1,), (-2,)])
def test_identity_hom_shift(u):
    rule = C.shift_rule("A5", u)
    leaf, _ = structural_surjectivity(rule)
    flow = build_flow(leaf)
    assert (flow.order, flow.alpha, flow.beta) == (1, 1, u)
    assert is_transitive_nonabelian(rule)[0] is (u != (0,))


def test_conjugation_planar_flow():
    a5 = C.group("A5")
    for order in (2, 3, 5):
        g = int(np.flatnonzero(a5.element_orders == order)[0])
        rule = C.a5_conjugation_rule(g, offset=(1, 0))
        flow = build_flow(structural_surjectivity(rule)[0])
        assert flow.alpha == order and flow.beta == (1, 0)


def test_conjugation_lemma_sign():
    # with shift(u)(c)_v = c_{v+u}, F^alpha is shift(+alpha) for this rule
    rule = C.a5_conjugation_rule()
    ok, ev = is_transitive_nonabelian(rule, verify=True)
    assert ok
    assert ev["components"][0]["lemma"] == {"exponent": 5, "shift": [5], "verified": True}
    assert equals_shift(power(rule, 5), (5,))
    assert not equals_shift(power(rule, 5), (-5,))


def test_two_fixed_points_split():
    g = C.group("A5^2")
    a5 = C.group("A5")
    h1 = product_endomorphism(g, [(0, 0, a5.elements)])
    h2 = product_endomorphism(g, [(1, 1, a5.elements)])
    rule = make_gca(g, [(1,), (-1,)], [h1, h2])
    leaf, _ = structural_surjectivity(rule)
    flow = build_flow(leaf)
    comps = minimal_components(leaf, flow)
    assert len(comps) == 2
    assert sorted(c.beta for _, c in comps) == [(-1,), (1,)]
    for sub, cyc in comps:
        assert sub.group.order == 60
        verify_lemma(sub, cyc)


def test_four_factors_two_cycles():
    autos = C.a5_automorphisms()
    rule = C.simple_power_rule(4, [(0,), (1,)], [0, 1, 1, 0], [1, 0, 3, 2], [autos[1], autos[7], autos[0], autos[30]])
    leaf, _ = structural_surjectivity(rule)
    flow = build_flow(leaf)
    assert flow.cycle_notation() == "(1 2)(3 4)"
    comps = minimal_components(leaf, flow)
    assert [c.length for _, c in comps] == [2, 2]
    for sub, cyc in comps:
        verify_lemma(sub, cyc)


def test_corrupted_alpha_is_caught():
    rule = C.a5_conjugation_rule()
    leaf, _ = structural_surjectivity(rule)
    cyc = build_flow(leaf).cycles[0]
    cyc.alpha = 2
    with pytest.raises(LemmaVerificationError):
        verify_lemma(rule, cyc)


@pytest.mark.parametrize("seed", range(15))
def test_lemma_on_random_minimal_leaves(seed):
    rng = np.random.default_rng(seed)
    rule = C.random_minimal_leaf(rng, int(rng.integers(1, 4)), int(rng.integers(1, 3)))
    leaf, reason = structural_surjectivity(rule)
    assert reason is None
    flow = build_flow(leaf)
    assert len(flow.cycles) == 1
    cyc = flow.cycles[0]
    assert equals_shift(power(rule, lemma_exponent(cyc)), lemma_shift(cyc))


def relabel(rule, perm):
    """Move factor ``j`` to position ``perm[j]``."""
    g = rule.group
    coords = g.coords(g.elements)
    new = [None] * len(coords)
    for j, c in enumerate(coords):
        new[perm[j]] = c
    return transport(rule, Homomorphism(g, g, g.combine(new)))


def signature(ev):
    return Counter((len(c["cycle"]), c["alpha"], tuple(c["beta"])) for c in ev["components"])


@pytest.mark.parametrize("seed", range(10))
def test_relabeling_stability(seed):
    rng = np.random.default_rng(1000 + seed)
    m = 2 + seed % 2
    rule = C.random_simple_power_rule(rng, m, d=1 + seed % 2)
    ok, ev = is_transitive_nonabelian(rule)
    for _ in range(3):
        perm = [int(x) for x in rng.permutation(m)]
        ok2, ev2 = is_transitive_nonabelian(relabel(rule, perm))
        assert ok2 == ok
        if ev["surjective"]:
            assert signature(ev2) == signature(ev)


@pytest.mark.parametrize("seed", range(10))
def test_beta_additivity(seed):
    rng = np.random.default_rng(2000 + seed)
    rule = C.random_simple_power_rule(rng, 3, d=2, surjective_bias=1.0)
    leaf, _ = structural_surjectivity(rule)
    flow = build_flow(leaf)
    total = tuple(sum(c.beta[k] for c in flow.cycles) for k in range(2))
    assert total == flow.beta


@pytest.mark.parametrize("seed", range(8))
def test_non_surjective_leaves_have_obstruction(seed):
    rng = np.random.default_rng(3000 + seed)
    rule = C.random_simple_power_rule(rng, 1 + seed % 2, surjective_bias=0.0)
    leaf, reason = structural_surjectivity(rule)
    assert leaf is None
    assert local_image_deficiency(rule) is not None or kernel_finite_search(rule, 4) is not None
