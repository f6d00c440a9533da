"""Homomorphisms between finite groups, stored as image arrays over element ids."""

from __future__ import annotations

import itertools
from math import lcm

import numpy as np

from .. import config
from ..errors import BudgetExceeded, GroupError, HomomorphismError
from .core import ID, ProductGroup, as_ids
from .subgroups import QuotientGroup, Subgroup, is_normal


class Homomorphism:
    """A map ``source -> target`` given by ``images[x]`` for every id ``x``."""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = as_ids(images)
        self.images.setflags(write=False)
        if self.images.shape != (source.order,):
            raise HomomorphismError(f"map must have {source.order} entries, got {self.images.shape}")

    def __call__(self, x):
        if np.ndim(x) == 0:
            return int(self.images[int(x)])
        return self.images[as_ids(x)]

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and other.source is self.source
                and other.target is self.target and np.array_equal(other.images, self.images))

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.images.tobytes()))

    def compose(self, other):
        """``self o other`` (apply ``other`` first)."""
        cls = Endomorphism if other.source is self.target else Homomorphism
        if cls is Endomorphism:
            return Endomorphism(other.source, self.images[other.images])
        return Homomorphism(other.source, self.target, self.images[other.images])

    def is_trivial(self):
        return bool((self.images == self.target.identity).all())

    def is_bijective(self):
        return self.source.order == self.target.order and np.unique(self.images).size == self.source.order

    def inverse(self):
        if not self.is_bijective():
            raise HomomorphismError("map is not bijective")
        inv = np.empty(self.source.order, dtype=ID)
        inv[self.images] = self.source.elements
        if self.source is self.target:
            return Endomorphism(self.source, inv)
        return Homomorphism(self.target, self.source, inv)

    def __repr__(self):
        return f"<{type(self).__name__} {self.source.name} -> {self.target.name}>"


class Endomorphism(Homomorphism):
    def __init__(self, group, images):
        super().__init__(group, group, images)

    @property
    def group(self):
        return self.source

    def __repr__(self):
        return f"<Endomorphism of {self.group.name}>"


def identity_map(group):
    return Endomorphism(group, group.elements)


def constant_e(group):
    return Endomorphism(group, np.full(group.order, group.identity, dtype=ID))


def power_map(group, n):
    return Endomorphism(group, group.power_array(group.elements, n))


def conjugation(group, g):
    """Inner automorphism ``x -> g x g^-1``."""
    return Endomorphism(group, group.conj_array(g, group.elements))


def pointwise_product(h, k):
    """``x -> h(x) k(x)``; a homomorphism whenever the images of h and k commute."""
    return Endomorphism(h.group, h.group.mul_array(h.images, k.images))


# -- verification -----------------------------------------------------------

def find_hom_violation(source, target, images):
    """First pair ``(a, b)`` with ``map(ab) != map(a) map(b)``, or ``None``.

    Exhaustive over all pairs when ``source`` is small; otherwise checks
    ``map(x g) = map(x) map(g)`` for every ``x`` and every generator ``g``,
    which is equivalent for a total map on a finite group.
    """
    images = as_ids(images)
    if images[source.identity] != target.identity:
        return (source.identity, source.identity)
    n = source.order
    x = source.elements
    if n <= config.budget(config.TABLE_ORDER_BOUND):
        a = np.repeat(x, n)
        b = np.tile(x, n)
        bad = np.flatnonzero(images[source.mul_array(a, b)] != target.mul_array(images[a], images[b]))
        if bad.size:
            return int(a[bad[0]]), int(b[bad[0]])
        return None
    for g in source.generators:
        gg = np.full(n, g, dtype=ID)
        lhs = images[source.mul_array(x, gg)]
        rhs = target.mul_array(images, np.full(n, images[g], dtype=ID))
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            return int(bad[0]), int(g)
    return None


def check_homomorphism(group, mapping, target=None):
    """Validate ``mapping`` (array, dict, or callable over ids) as a homomorphism."""
    target = target or group
    images = _as_images(group, mapping)
    if images.min() < 0 or images.max() >= target.order:
        raise HomomorphismError("map values outside the target group")
    bad = find_hom_violation(group, target, images)
    if bad is not None:
        a, b = bad
        raise HomomorphismError(
            f"not a homomorphism: f({a}*{b}) != f({a})*f({b})", witness=bad)
    if target is group:
        return Endomorphism(group, images)
    return Homomorphism(group, target, images)


def _as_images(group, mapping):
    if callable(mapping) and not isinstance(mapping, (np.ndarray, list, tuple, dict)):
        return as_ids([mapping(x) for x in range(group.order)])
    if isinstance(mapping, dict):
        missing = [x for x in range(group.order) if x not in mapping]
        if missing:
            raise HomomorphismError(f"map is not total: no image for {missing[0]}")
        return as_ids([mapping[x] for x in range(group.order)])
    images = as_ids(mapping)
    if images.shape != (group.order,):
        raise HomomorphismError(f"map must list {group.order} images, got {images.size}")
    return images


def _bfs_layers(group):
    """Spanning tree of the Cayley graph: layers of (element, parent, generator index)."""
    cached = group.__dict__.get("_bfs_layers")
    if cached is not None:
        return cached
    gens = group.generators
    seen = np.zeros(group.order, dtype=bool)
    seen[group.identity] = True
    frontier = as_ids([group.identity])
    layers = []
    while frontier.size:
        elems, parents, which = [], [], []
        for k, g in enumerate(gens):
            nxt = group.mul_array(frontier, np.full(frontier.shape, g, dtype=ID))
            fresh = ~seen[nxt]
            nxt_f, par_f = nxt[fresh], frontier[fresh]
            nxt_f, first = np.unique(nxt_f, return_index=True)
            par_f = par_f[first]
            seen[nxt_f] = True
            elems.append(nxt_f)
            parents.append(par_f)
            which.append(np.full(nxt_f.shape, k, dtype=ID))
        e = np.concatenate(elems)
        if e.size:
            layers.append((e, np.concatenate(parents), np.concatenate(which)))
        frontier = e
    group.__dict__["_bfs_layers"] = layers
    return layers


def extend_generator_images(group, gen_images, target=None):
    """Image array of the unique candidate map sending ``group.generators`` to ``gen_images``.

    The result is a homomorphism only if it passes ``find_hom_violation``.
    """
    target = target or group
    gen_images = as_ids(gen_images)
    if gen_images.size != len(group.generators):
        raise HomomorphismError(
            f"expected {len(group.generators)} generator images, got {gen_images.size}")
    images = np.empty(group.order, dtype=ID)
    images[group.identity] = target.identity
    for elems, parents, which in _bfs_layers(group):
        images[elems] = target.mul_array(images[parents], gen_images[which])
    return images


def from_generator_images(group, gen_images, target=None):
    target = target or group
    images = extend_generator_images(group, gen_images, target)
    return check_homomorphism(group, images, target)


def _generator_check(group, target, images, gen_images):
    x = group.elements
    for g, img in zip(group.generators, gen_images):
        lhs = images[group.mul_array(x, np.full(x.shape, g, dtype=ID))]
        rhs = target.mul_array(images, np.full(x.shape, img, dtype=ID))
        if not np.array_equal(lhs, rhs):
            return False
    return True


def enumerate_homomorphisms(group, target=None, bijective=False, limit=None):
    """Yield every homomorphism ``group -> target`` (pruned by element orders)."""
    target = target or group
    gens = group.generators
    t_orders = target.element_orders
    options = []
    for g in gens:
        o = group.element_order(g)
        if bijective:
            ok = t_orders == o
        else:
            ok = (o % t_orders) == 0
        options.append(np.flatnonzero(ok))
    total = 1
    for opt in options:
        total *= max(1, opt.size)
    budget = config.budget(limit or config.ISOMORPHISM_BUDGET)
    if total > budget:
        raise BudgetExceeded(f"{total} generator-image candidates exceed budget {budget}")
    for choice in itertools.product(*options):
        images = extend_generator_images(group, choice, target)
        if bijective and np.unique(images).size != group.order:
            continue
        if _generator_check(group, target, images, choice):
            if target is group:
                yield Endomorphism(group, images)
            else:
                yield Homomorphism(group, target, images)


def enumerate_endomorphisms(group):
    if group.order > config.budget(config.ENDOMORPHISM_ENUM_ORDER):
        raise BudgetExceeded(f"endomorphism enumeration capped at order {config.ENDOMORPHISM_ENUM_ORDER}")
    return list(enumerate_homomorphisms(group))


def isomorphism(g1, g2):
    """An isomorphism ``g1 -> g2`` or ``None``."""
    if g1.order != g2.order:
        return None
    if g1 is g2:
        return Endomorphism(g1, g1.elements)
    if g1.is_abelian != g2.is_abelian:
        return None
    o1, o2 = np.sort(g1.element_orders), np.sort(g2.element_orders)
    if not np.array_equal(o1, o2):
        return None
    for h in enumerate_homomorphisms(g1, g2, bijective=True):
        return h
    return None


def automorphism_order(h):
    """Least ``m >= 1`` with ``h^m`` the identity map."""
    if not h.is_bijective():
        raise HomomorphismError("automorphism_order needs a bijective map")
    n = h.source.order
    ident = np.arange(n)
    cur = h.images
    m = 1
    while not np.array_equal(cur, ident):
        cur = h.images[cur]
        m += 1
    return m


def permutation_order(images):
    """Order of a permutation array via its cycle lengths."""
    images = np.asarray(images)
    seen = np.zeros(images.size, dtype=bool)
    result = 1
    for start in range(images.size):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = images[x]
            length += 1
        result = lcm(result, length)
    return result


# -- images, kernels, quotients ---------------------------------------------

def image(h):
    gens = np.unique(h.images[as_ids(h.source.generators)]) if h.source.generators else []
    return Subgroup(h.target, np.unique(h.images), gens=[g for g in gens if g != h.target.identity])


def kernel(h):
    return Subgroup(h.source, np.flatnonzero(h.images == h.target.identity))


def map_subgroup(h, sub):
    return Subgroup(h.target, h.images[sub.members])


def quotient(group, normal):
    """Coset group ``group / normal`` and the projection homomorphism."""
    if not is_normal(group, normal):
        raise GroupError("quotient needs a normal subgroup")
    q = QuotientGroup(group, normal)
    return q, Homomorphism(group, q, q.coset_of)


# -- product-group helpers --------------------------------------------------

def product_endomorphism(group, blocks):
    """Endomorphism of a ``ProductGroup`` from factor blocks.

    ``blocks`` is a list of ``(src, dst, arr)`` where ``arr`` maps ids of
    factor ``src`` to ids of factor ``dst``.  Coordinate ``dst`` of the image
    is the product (in list order) of all blocks targeting it.  Blocks into
    one coordinate must have commuting images for the result to be a
    homomorphism; callers are trusted.
    """
    if not isinstance(group, ProductGroup):
        raise GroupError("product_endomorphism needs a ProductGroup")
    coords = group.coords(group.elements)
    out = [np.full(group.order, f.identity, dtype=ID) for f in group.factors]
    for src, dst, arr in blocks:
        f = group.factors[dst]
        out[dst] = f.mul_array(out[dst], as_ids(arr)[coords[src]])
    return Endomorphism(group, group.combine(out))


def product_of_endomorphisms(group, homs):
    """``(x_1..x_r) -> (h_1(x_1)..h_r(x_r))`` on ``ProductGroup(h_i.group ...)``."""
    return product_endomorphism(group, [(j, j, h.images) for j, h in enumerate(homs)])
