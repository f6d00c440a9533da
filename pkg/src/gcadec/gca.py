"""Group cellular automata: validation, canonical form, composition, evaluation.

Conventions: ``F(c)_v = h_1(c_{v+v_1}) ... h_k(c_{v+v_k})`` (left-to-right
product) and ``shift(u)(c)_v = c_{v+u}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import RuleError
from .groups.core import ID, ProductGroup, as_ids
from .groups.homs import (Endomorphism, Homomorphism, constant_e, identity_map,
                          pointwise_product, product_endomorphism, quotient)
from .groups.subgroups import centralizes


def _offset(u, d):
    u = tuple(int(x) for x in np.atleast_1d(u))
    if len(u) != d:
        raise RuleError(f"offset arity mismatch: {u} has length {len(u)}, dimension is {d}")
    return u


def _add(u, w):
    return tuple(a + b for a, b in zip(u, w))


class GCA:
    """A ``d``-dimensional GCA; build with ``make_gca`` to get validation."""

    def __init__(self, group, dim, neighbors, homs):
        self.group = group
        self.dim = dim
        self.neighbors = tuple(neighbors)
        self.homs = tuple(homs)

    @property
    def k(self):
        return len(self.homs)

    @cached_property
    def canonical(self):
        return canonicalize(self)

    @property
    def radius(self):
        return max((max(abs(x) for x in u) for u in self.neighbors), default=0)

    def __repr__(self):
        return f"<GCA d={self.dim} over {self.group.name} k={self.k}>"


def commuting_images_violation(group, homs):
    """``(i, j, a, b)`` with ``h_i(a) h_j(b) != h_j(b) h_i(a)``, or ``None``.

    Images are generated by the images of generators, so checking generator
    pairs is exact.
    """
    gens = as_ids(group.generators)
    for i in range(len(homs)):
        for j in range(i + 1, len(homs)):
            bad = centralizes(group, homs[i].images[gens], homs[j].images[gens])
            if bad is not None:
                x, y = bad
                a = int(gens[np.flatnonzero(homs[i].images[gens] == x)[0]])
                b = int(gens[np.flatnonzero(homs[j].images[gens] == y)[0]])
                return i, j, a, b
    return None


def make_gca(group, neighbors, homs, dim=None):
    """Validated GCA from neighbor offsets and one endomorphism per offset."""
    neighbors = list(neighbors)
    homs = list(homs)
    if not neighbors:
        raise RuleError("a local rule needs at least one neighbor")
    if dim is None:
        dim = len(np.atleast_1d(neighbors[0]))
    neighbors = [_offset(u, dim) for u in neighbors]
    if len(homs) != len(neighbors):
        raise RuleError(f"arity mismatch: {len(neighbors)} neighbors but {len(homs)} homomorphisms")
    for h in homs:
        if not isinstance(h, Endomorphism) or h.group is not group:
            raise RuleError("every rule entry must be an endomorphism of the rule's group")
    bad = commuting_images_violation(group, homs)
    if bad is not None:
        i, j, a, b = bad
        raise RuleError(f"images of h{i + 1} and h{j + 1} do not commute: "
                        f"h{i + 1}({a}) and h{j + 1}({b})", witness=bad)
    return GCA(group, dim, neighbors, homs)


def apply_local(gca, values):
    if len(values) != gca.k:
        raise RuleError(f"local rule takes {gca.k} values, got {len(values)}")
    g = gca.group
    acc = g.identity
    for h, x in zip(gca.homs, values):
        acc = g.mul(acc, h(int(x)))
    return acc


# -- configurations ---------------------------------------------------------

@dataclass(frozen=True)
class PeriodicConfig:
    """An ``L``-periodic configuration; ``cells[v mod L]`` holds element ids."""

    cells: np.ndarray

    @property
    def periods(self):
        return self.cells.shape

    @property
    def dim(self):
        return self.cells.ndim

    def __eq__(self, other):
        return isinstance(other, PeriodicConfig) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.cells.shape, self.cells.tobytes()))


def periodic(cells):
    return PeriodicConfig(np.asarray(cells, dtype=ID))


def random_config(group, periods, rng):
    return PeriodicConfig(rng.integers(0, group.order, size=tuple(periods)).astype(ID))


def shifted(c, u):
    """``shift(u)`` applied to a periodic configuration."""
    cells = c.cells if isinstance(c, PeriodicConfig) else c
    out = np.roll(cells, shift=tuple(-x for x in u), axis=tuple(range(cells.ndim)))
    return PeriodicConfig(out) if isinstance(c, PeriodicConfig) else out


def step(gca, c, n=1):
    """Apply the global map ``n`` times to a periodic configuration."""
    if c.dim != gca.dim:
        raise RuleError(f"configuration has dimension {c.dim}, automaton has {gca.dim}")
    entries = gca.canonical.entries
    g = gca.group
    cells = c.cells
    for _ in range(n):
        acc = np.full(cells.shape, g.identity, dtype=ID)
        for u, h in entries:
            acc = g.mul_array(acc, h.images[shifted(cells, u)])
        cells = acc
    return PeriodicConfig(cells)


def step_literal(gca, c):
    """One step read straight off the neighbor vector and hom tuple (no canonical form)."""
    g = gca.group
    acc = np.full(c.cells.shape, g.identity, dtype=ID)
    for u, h in zip(gca.neighbors, gca.homs):
        acc = g.mul_array(acc, h.images[shifted(c.cells, u)])
    return PeriodicConfig(acc)


def pointwise_config_product(group, c1, c2):
    return PeriodicConfig(group.mul_array(c1.cells, c2.cells))


def safe_period(gca, steps, support_radius):
    """Torus period large enough that a pattern of the given radius evolves without wrap-around."""
    spread = support_radius + steps * gca.radius
    return 2 * (2 * spread + 1) + 1


# -- canonical rules --------------------------------------------------------

class CanonicalRule:
    """Offset -> endomorphism map with merged duplicates and no trivial entries."""

    def __init__(self, group, dim, entries):
        self.group = group
        self.dim = dim
        self.entries = tuple(sorted(entries, key=lambda e: e[0]))

    def as_dict(self):
        return dict(self.entries)

    def __eq__(self, other):
        if not isinstance(other, CanonicalRule) or other.group is not self.group:
            return False
        if len(self.entries) != len(other.entries):
            return False
        return all(u == w and np.array_equal(h.images, k.images)
                   for (u, h), (w, k) in zip(self.entries, other.entries))

    def __hash__(self):
        return hash(tuple((u, h.images.tobytes()) for u, h in self.entries))

    def to_gca(self):
        if not self.entries:
            return GCA(self.group, self.dim, [(0,) * self.dim], [constant_e(self.group)])
        gca = GCA(self.group, self.dim, [u for u, _ in self.entries], [h for _, h in self.entries])
        gca.__dict__["canonical"] = self
        return gca

    def __repr__(self):
        return f"<CanonicalRule offsets={[u for u, _ in self.entries]}>"


def _merge(group, dim, pairs):
    merged = {}
    for u, h in pairs:
        merged[u] = pointwise_product(merged[u], h) if u in merged else h
    return CanonicalRule(group, dim, [(u, h) for u, h in merged.items() if not h.is_trivial()])


def canonicalize(gca):
    return _merge(gca.group, gca.dim, zip(gca.neighbors, gca.homs))


def from_canonical(rule):
    return rule.to_gca()


def compose(g1, g2):
    """GCA computing ``g1 o g2`` (apply ``g2`` first), canonicalized."""
    if g1.group is not g2.group or g1.dim != g2.dim:
        raise RuleError("compose needs automata over the same group and dimension")
    pairs = []
    for v, h in g1.canonical.entries:
        for w, k in g2.canonical.entries:
            pairs.append((_add(v, w), h.compose(k)))
    return _merge(g1.group, g1.dim, pairs).to_gca()


def power(gca, n):
    """``gca`` composed with itself ``n`` times (``n = 0`` gives the identity)."""
    result = identity_gca(gca.group, gca.dim)
    base = gca
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def shift_gca(group, dim, u):
    return GCA(group, dim, [_offset(u, dim)], [identity_map(group)])


def identity_gca(group, dim):
    return shift_gca(group, dim, (0,) * dim)


def equals_shift(gca, u):
    return gca.canonical == shift_gca(gca.group, gca.dim, u).canonical


def as_shift(gca):
    """The offset ``u`` if ``gca`` is exactly ``shift(u)``, else ``None``."""
    entries = gca.canonical.entries
    if len(entries) == 1 and np.array_equal(entries[0][1].images, gca.group.elements):
        return entries[0][0]
    return None


# -- induced automata -------------------------------------------------------

def _check_invariant(gca, sub):
    for i, h in enumerate(gca.homs):
        if not sub.contains(h.images[sub.members]).all():
            raise RuleError(f"h{i + 1} does not map the subgroup into itself")


def restrict_rule(gca, sub):
    """The automaton induced on configurations with values in ``sub``."""
    _check_invariant(gca, sub)
    h_group = sub.as_group()
    homs = [Endomorphism(h_group, sub.local_ids(h.images[sub.members])) for h in gca.homs]
    return GCA(h_group, gca.dim, gca.neighbors, homs)


def quotient_rule(gca, normal):
    """The automaton induced on ``G/normal``; ``result.group.coset_of`` is the projection."""
    _check_invariant(gca, normal)
    q, _ = quotient(gca.group, normal)
    return quotient_rule_on(gca, q)


def quotient_rule_on(gca, q):
    homs = [Endomorphism(q, q.coset_of[h.images[q.reps]]) for h in gca.homs]
    return GCA(q, gca.dim, gca.neighbors, homs)


def projection(qgca):
    q = qgca.group
    return Homomorphism(q.parent, q, q.coset_of)


def transport(gca, iso):
    """Conjugate the rule along an isomorphism ``iso: G -> G'``."""
    inv = iso.inverse()
    target = iso.target
    homs = [Endomorphism(target, iso.images[h.images[inv.images]]) for h in gca.homs]
    return GCA(target, gca.dim, gca.neighbors, homs)


def product_gca(g1, g2, group=None):
    """``F_1 x F_2`` acting coordinatewise on ``(G_1 x G_2)^(Z^d)``."""
    if g1.dim != g2.dim:
        raise RuleError("product of automata of different dimensions")
    group = group or ProductGroup([g1.group, g2.group])
    offsets = {}
    for j, g in enumerate((g1, g2)):
        for u, h in g.canonical.entries:
            offsets.setdefault(u, []).append((j, j, h.images))
    if not offsets:
        return CanonicalRule(group, g1.dim, []).to_gca()
    neighbors = sorted(offsets)
    homs = [product_endomorphism(group, offsets[u]) for u in neighbors]
    return GCA(group, g1.dim, neighbors, homs)
