"""Reusable groups and rules: the small corpus used by examples, tests, and the CLI demos."""

from __future__ import annotations

import itertools
from functools import cache

import numpy as np

from .errors import RuleError
from .gca import make_gca
from .groups.core import ID, CyclicGroup, ProductGroup, make_group
from .groups.homs import Endomorphism, identity_map, product_endomorphism


@cache
def group(name):
    """Shared instance of a corpus group (``"A5"``, ``"Z4"``, ``"Z2^2"``, ``"A5^2"`` ...)."""
    if "^" in name:
        base, m = name.split("^")
        return ProductGroup([group(base) for _ in range(int(m))], name=name)
    if name.startswith("Z"):
        return CyclicGroup(int(name[1:]))
    return make_group(name)


def perm_automorphism(g, s):
    """Conjugation by the permutation ``s`` (rows of ``g.perms`` mapped to ``s p s^-1``)."""
    s = np.asarray(s, dtype=ID)
    s_inv = np.argsort(s)
    rows = s[g.perms[:, s_inv]]
    return Endomorphism(g, g._lookup_perm_rows(rows))


@cache
def a5_automorphisms():
    """All 120 automorphisms of A5, as conjugations by elements of S5 (lexicographic order)."""
    a5 = group("A5")
    return tuple(perm_automorphism(a5, s) for s in itertools.permutations(range(5)))


def simple_power_rule(m, offsets, assignment, perm, autos, base="A5"):
    """Rule over ``base^m`` where factor ``j`` goes to factor ``perm[j]`` through
    automorphism ``autos[j]`` inside hom ``assignment[j]`` (at ``offsets[assignment[j]]``)."""
    g = group(f"{base}^{m}") if m > 1 else group(base)
    offsets = [tuple(u) for u in offsets]
    homs = []
    for i in range(len(offsets)):
        blocks = [(j, perm[j], autos[j].images) for j in range(m) if assignment[j] == i]
        if m == 1:
            if blocks:
                homs.append(Endomorphism(g, blocks[0][2]))
            else:
                homs.append(Endomorphism(g, np.zeros(g.order, dtype=ID)))
        else:
            homs.append(product_endomorphism(g, blocks))
    return make_gca(g, offsets, homs)


def random_cycle(rng, m):
    order = list(rng.permutation(m))
    perm = [0] * m
    for a in range(m):
        perm[order[a]] = int(order[(a + 1) % m])
    return perm


def random_minimal_leaf(rng, m, d, k=None):
    """Random structurally surjective rule over ``A5^m`` whose factor permutation is one cycle."""
    autos = a5_automorphisms()
    k = k or int(rng.integers(1, m + 1))
    offsets = set()
    while len(offsets) < k:
        offsets.add(tuple(int(x) for x in rng.integers(-1, 2, size=d)))
    offsets = sorted(offsets)
    assignment = [int(rng.integers(0, k)) for _ in range(m)]
    perm = random_cycle(rng, m)
    chosen = [autos[int(rng.integers(0, len(autos)))] for _ in range(m)]
    return simple_power_rule(m, offsets, assignment, perm, chosen)


def linear_rule(p, matrices, offsets):
    """Rule over ``(Z/p)^n`` from F_p matrices acting on coordinate columns."""
    matrices = [np.asarray(a, dtype=np.int64) % p for a in matrices]
    n = matrices[0].shape[0]
    g = group(f"Z{p}^{n}") if n > 1 else group(f"Z{p}")
    if n == 1:
        homs = [Endomorphism(g, (int(a[0, 0]) * g.elements) % p) for a in matrices]
    else:
        coords = np.stack(g.coords(g.elements), axis=1)
        homs = []
        for a in matrices:
            out = (coords @ a.T) % p
            homs.append(Endomorphism(g, g.combine(list(out.T))))
    return make_gca(g, [tuple(u) for u in offsets], homs)


def shift_rule(name, u):
    g = group(name)
    return make_gca(g, [tuple(u)], [identity_map(g)])


def identity_rule(name, d=1):
    return shift_rule(name, (0,) * d)


def xor_rule():
    g = group("Z2")
    return make_gca(g, [(0,), (1,)], [identity_map(g), identity_map(g)])


def a5_conjugation_rule(g_id=None, offset=(1,)):
    """Conjugation by an element of A5 at a single offset."""
    a5 = group("A5")
    if g_id is None:
        g_id = int(np.flatnonzero(a5.element_orders == 5)[0])
    return make_gca(a5, [tuple(offset)], [Endomorphism(a5, a5.conj_array(g_id, a5.elements))])


def a5_swap_rule():
    g = group("A5^2")
    a5 = group("A5")
    swap = product_endomorphism(g, [(0, 1, a5.elements), (1, 0, a5.elements)])
    return make_gca(g, [(0,)], [swap])


def random_rule(rng, g, pool, d=1, max_k=3, tries=200):
    """Random valid rule over ``g`` with endomorphisms drawn from ``pool`` and offsets in ``{-1,0,1}^d``."""
    cells = list(itertools.product((-1, 0, 1), repeat=d))
    for _ in range(tries):
        k = int(rng.integers(1, max_k + 1))
        picks = rng.choice(len(cells), size=k, replace=False)
        offsets = [cells[int(i)] for i in picks]
        homs = [pool[int(rng.integers(0, len(pool)))] for _ in range(k)]
        try:
            return make_gca(g, offsets, homs, dim=d)
        except RuleError:
            continue
    raise RuleError("could not draw a rule with commuting images")


def endomorphism_pool(g):
    """Endomorphisms to draw rules from: all of them for small groups, else trivial map plus
    conjugations by generators and their products."""
    from .groups.homs import constant_e, conjugation, enumerate_endomorphisms
    if g.order <= 24:
        return enumerate_endomorphisms(g)
    pool = [constant_e(g)]
    seen = set()
    for x in list(g.generators) + [g.mul(a, b) for a in g.generators for b in g.generators]:
        h = conjugation(g, x)
        key = h.images.tobytes()
        if key not in seen:
            seen.add(key)
            pool.append(h)
    return pool


def random_linear_rule(rng, p, n, d=1, max_k=3):
    cells = list(itertools.product((-1, 0, 1), repeat=d))
    k = int(rng.integers(1, max_k + 1))
    picks = rng.choice(len(cells), size=k, replace=False)
    mats = [rng.integers(0, p, size=(n, n)) for _ in range(k)]
    return linear_rule(p, mats, [cells[int(i)] for i in picks])


def random_simple_power_rule(rng, m, d=1, surjective_bias=0.7):
    """Random rule over ``A5^m``: usually structurally surjective, sometimes deliberately not."""
    autos = a5_automorphisms()
    cells = list(itertools.product((-1, 0, 1), repeat=d))
    if rng.random() < surjective_bias:
        k = int(rng.integers(1, m + 1))
        picks = rng.choice(len(cells), size=k, replace=False)
        offsets = [cells[int(i)] for i in picks]
        assignment = [int(rng.integers(0, k)) for _ in range(m)]
        perm = [int(x) for x in rng.permutation(m)]
        chosen = [autos[int(rng.integers(0, len(autos)))] for _ in range(m)]
        return simple_power_rule(m, offsets, assignment, perm, chosen)
    g = group(f"A5^{m}") if m > 1 else group("A5")
    u = cells[int(rng.integers(0, len(cells)))]
    a5 = group("A5")
    if m == 1 or rng.random() < 0.5:
        # kill one factor (or everything when m = 1)
        if m == 1:
            return make_gca(g, [u], [Endomorphism(g, np.zeros(g.order, dtype=ID))])
        keep = int(rng.integers(0, m))
        return make_gca(g, [u], [product_endomorphism(g, [(keep, keep, a5.elements)])])
    # diagonal image: factor 0 copied into factors 0 and 1
    blocks = [(0, 0, a5.elements), (0, 1, a5.elements)]
    return make_gca(g, [u], [product_endomorphism(g, blocks)])
