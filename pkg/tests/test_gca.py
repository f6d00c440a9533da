import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gcadec import corpus as C
from gcadec.errors import RuleError
from gcadec.gca import (as_shift, compose, equals_shift, identity_gca, make_gca, power, product_gca,
                        projection, quotient_rule, random_config, restrict_rule, shift_gca, shifted,
                        step, step_literal, transport)
from gcadec.groups.homs import constant_e, identity_map, isomorphism, power_map
from gcadec.groups.subgroups import center, commutator_subgroup


def test_xor_step():
    f = C.xor_rule()
    c = random_config(f.group, (7,), np.random.default_rng(1))
    out = step(f, c)
    assert np.array_equal(out.cells, (c.cells + np.roll(c.cells, -1)) % 2)


def test_shift_convention():
    # shift(u)(c)_v = c_{v+u}
    g = C.group("Z5")
    s = shift_gca(g, 1, (1,))
    c = random_config(g, (6,), np.random.default_rng(0))
    assert step(s, c).cells[0] == c.cells[1]
    assert step(s, c) == shifted(c, (1,))


def test_duplicate_offsets_merge():
    g = C.group("Z3")
    f = make_gca(g, [(1,), (1,)], [identity_map(g), identity_map(g)])
    assert len(f.canonical.entries) == 1
    assert list(f.canonical.entries[0][1].images) == [0, 2, 1]


def test_trivial_entries_dropped_and_identity_shift():
    g = C.group("Z3")
    f = make_gca(g, [(0,), (1,)], [identity_map(g), constant_e(g)])
    assert equals_shift(f, (0,))
    assert as_shift(f) == (0,)


def test_non_commuting_images_rejected():
    s3 = C.group("S3")
    with pytest.raises(RuleError):
        make_gca(s3, [(0,), (1,)], [identity_map(s3), identity_map(s3)])


RULES = [("Z4", 1), ("S3", 1), ("D4", 1), ("Z2^2", 2), ("Q8", 1)]


def _rule(name, d, seed):
    rng = np.random.default_rng(seed)
    g = C.group(name)
    return C.random_rule(rng, g, C.endomorphism_pool(g), d=d)


@settings(max_examples=30)
@given(st.sampled_from(RULES), st.integers(0, 10 ** 6))
def test_step_matches_literal_and_compose(case, seed):
    name, d = case
    f = _rule(name, d, seed)
    g2 = _rule(name, d, seed + 1)
    rng = np.random.default_rng(seed)
    c = random_config(f.group, (7,) * d, rng)
    assert step(f, c) == step_literal(f, c)
    assert step(compose(f, g2), c) == step(f, step(g2, c))
    assert step(power(f, 3), c) == step(f, c, 3)


def test_power_zero_is_identity():
    f = C.xor_rule()
    assert equals_shift(power(f, 0), (0,))
    assert power(f, 1).canonical == f.canonical


def test_xor_power_of_two():
    # F^(2^k)(c)_v = c_v + c_{v + 2^k} over Z/2
    f = C.xor_rule()
    p = power(f, 8)
    assert sorted(u for u, _ in p.canonical.entries) == [(0,), (8,)]


@pytest.mark.parametrize("name", ["SL25", "D4", "Z4", "S3"])
def test_quotient_and_restriction_commute_with_projection(name):
    g = C.group(name)
    rng = np.random.default_rng(3)
    f = C.random_rule(rng, g, C.endomorphism_pool(g))
    h = commutator_subgroup(g) if not g.is_abelian else center(g)
    if name == "Z4":
        from gcadec.groups.verbal import power_subgroup
        h = power_subgroup(g, 2)
    q = quotient_rule(f, h)
    pi = projection(q)
    c = random_config(g, (9,), rng)
    lhs = pi.images[step(f, c).cells]
    rhs = step(q, type(c)(pi.images[c.cells])).cells
    assert np.array_equal(lhs, rhs)
    r = restrict_rule(f, h)
    local = h.local_ids(h.members)
    sub_cells = h.members[rng.integers(0, h.order, size=9)]
    out = step(f, type(c)(sub_cells)).cells
    assert h.contains(out).all()
    assert np.array_equal(h.local_ids(out), step(r, type(c)(h.local_ids(sub_cells))).cells)
    assert local.size == h.order


def test_transport_conjugates_dynamics():
    g = C.group("Z6")
    from gcadec.groups.core import CyclicGroup, ProductGroup
    target = ProductGroup([CyclicGroup(2), CyclicGroup(3)])
    iso = isomorphism(g, target)
    f = make_gca(g, [(0,), (1,)], [power_map(g, 5), power_map(g, 2)])
    t = transport(f, iso)
    c = random_config(g, (8,), np.random.default_rng(5))
    assert np.array_equal(iso.images[step(f, c).cells], step(t, type(c)(iso.images[c.cells])).cells)


def test_product_gca_acts_coordinatewise():
    f1 = C.xor_rule()
    f2 = _rule("S3", 1, 4)
    p = product_gca(f1, f2)
    rng = np.random.default_rng(6)
    c1 = random_config(f1.group, (7,), rng)
    c2 = random_config(f2.group, (7,), rng)
    joint = type(c1)(p.group.combine([c1.cells, c2.cells]))
    out = step(p, joint).cells
    a, b = p.group.coords(out)
    assert np.array_equal(a, step(f1, c1).cells)
    assert np.array_equal(b, step(f2, c2).cells)


def test_dimension_mismatch():
    f = C.xor_rule()
    c = random_config(f.group, (3, 3), np.random.default_rng(0))
    with pytest.raises(RuleError):
        step(f, c)
    with pytest.raises(RuleError):
        compose(f, identity_gca(f.group, 2))
