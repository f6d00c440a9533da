"""Subgroups, normal closures, conjugacy classes, and coset groups."""

from __future__ import annotations

from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import GroupError
from .core import ID, FiniteGroup, as_ids, closure, greedy_generators


class Subgroup:
    """A subgroup of ``parent`` given by its sorted member ids."""

    def __init__(self, parent, members, gens=None):
        self.parent = parent
        self.members = np.unique(as_ids(members))
        if gens is not None:
            self._gens = [int(g) for g in gens]

    @classmethod
    def generated(cls, parent, gens):
        gens = [int(g) for g in gens]
        return cls(parent, closure(parent, gens), gens=[g for g in gens if g != parent.identity])

    @property
    def order(self):
        return int(self.members.size)

    def __len__(self):
        return self.order

    def is_trivial(self):
        return self.order == 1

    def is_whole(self):
        return self.order == self.parent.order

    @cached_property
    def generators(self):
        gens = getattr(self, "_gens", None)
        if gens is None:
            gens = greedy_generators(self.parent, self.members[::-1])
        return greedy_generators(self.parent, gens)

    @cached_property
    def _mask(self):
        mask = np.zeros(self.parent.order, dtype=bool)
        mask[self.members] = True
        return mask

    def contains(self, x):
        x = as_ids(x)
        if self.parent.order <= 50_000_000:
            return self._mask[x]
        pos = np.clip(np.searchsorted(self.members, x), 0, self.members.size - 1)
        return self.members[pos] == x

    def __contains__(self, x):
        return bool(self.contains(int(x)))

    def issubset(self, other):
        return bool(other.contains(self.members).all())

    def local_ids(self, x):
        """Positions of parent ids ``x`` in ``members`` (ids of ``as_group()``)."""
        x = as_ids(x)
        pos = np.searchsorted(self.members, x)
        if (pos >= self.members.size).any() or (self.members[np.minimum(pos, self.members.size - 1)] != x).any():
            raise GroupError("element outside the subgroup")
        return pos.astype(ID)

    def as_group(self):
        return self._group

    @cached_property
    def _group(self):
        return SubgroupGroup(self)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and np.array_equal(other.members, self.members))

    def __hash__(self):
        return hash((id(self.parent), self.members.tobytes()))

    def __repr__(self):
        return f"<Subgroup of {self.parent.name} order={self.order}>"


class SubgroupGroup(FiniteGroup):
    """A subgroup viewed as a group in its own right (ids = member positions)."""

    def __init__(self, sub):
        self.sub = sub
        self.parent = sub.parent
        self.order = sub.order
        self.identity = int(sub.local_ids([sub.parent.identity])[0])
        self.name = f"<{sub.order} in {sub.parent.name}>"

    def mul_array(self, a, b):
        m = self.sub.members
        return self.sub.local_ids(self.parent.mul_array(m[as_ids(a)], m[as_ids(b)]))

    def inv_array(self, a):
        return self.sub.local_ids(self.parent.inv_array(self.sub.members[as_ids(a)]))

    @cached_property
    def generators(self):
        return [int(x) for x in self.sub.local_ids(self.sub.generators)]

    @cached_property
    def element_orders(self):
        return self.parent.element_orders[self.sub.members]

    def label(self, a):
        return self.parent.label(int(self.sub.members[a]))


def trivial_subgroup(group):
    return Subgroup(group, [group.identity], gens=[])


def whole(group):
    return Subgroup(group, group.elements, gens=group.generators)


def subgroup_generated(group, elements):
    return Subgroup.generated(group, elements)


def conjugation_permutation(group, g):
    return group.conj_array(g, group.elements)


def conjugacy_classes(group):
    """List of classes (sorted id arrays), the identity class first."""
    n = group.order
    rows, cols = [], []
    x = group.elements
    for g in group.generators:
        rows.append(x)
        cols.append(conjugation_permutation(group, g))
    if not rows:
        return [as_ids([group.identity])]
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=True, connection="weak")
    order = np.argsort(labels, kind="stable")
    splits = np.flatnonzero(np.diff(labels[order])) + 1
    classes = np.split(order.astype(ID), splits)
    classes.sort(key=lambda c: (group.identity not in c, c.size, int(c[0])))
    return classes


def normal_closure(group, elements):
    """Smallest normal subgroup containing ``elements``."""
    gens = [int(e) for e in elements if int(e) != group.identity]
    members = closure(group, gens)
    mask = np.zeros(group.order, dtype=bool)
    mask[members] = True
    pending = list(gens)
    while pending:
        new = []
        arr = as_ids(pending)
        for g in group.generators:
            for c in group.conj_array(g, arr):
                c = int(c)
                if not mask[c]:
                    new.append(c)
                    gens.append(c)
                    members = closure(group, gens)
                    mask[members] = True
        pending = new
    return Subgroup(group, members, gens=gens)


def is_normal(group, sub):
    gens = as_ids(sub.generators)
    if gens.size == 0:
        return True
    return all(sub.contains(group.conj_array(g, gens)).all() for g in group.generators)


def commutator_subgroup(group):
    """Derived subgroup: normal closure of the commutators of generators."""
    gens = group.generators
    comms = []
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            c = group.mul(group.mul(group.inv(a), group.inv(b)), group.mul(a, b))
            comms.append(c)
    return normal_closure(group, comms)


def centralizes(group, a_elems, b_elems):
    """Whether every element of ``a_elems`` commutes with every one of ``b_elems``."""
    a_elems, b_elems = as_ids(a_elems), as_ids(b_elems)
    if a_elems.size == 0 or b_elems.size == 0:
        return None
    a = np.repeat(a_elems, b_elems.size)
    b = np.tile(b_elems, a_elems.size)
    ab = group.mul_array(a, b)
    ba = group.mul_array(b, a)
    bad = np.flatnonzero(ab != ba)
    if bad.size:
        return int(a[bad[0]]), int(b[bad[0]])
    return None


def center(group):
    x = group.elements
    keep = np.ones(group.order, dtype=bool)
    for g in group.generators:
        gg = np.full(x.shape, g, dtype=ID)
        keep &= group.mul_array(x, gg) == group.mul_array(gg, x)
    return Subgroup(group, x[keep])


def left_cosets(group, sub):
    """``coset_of`` array over parent ids and the minimal representative per coset."""
    coset_of = np.full(group.order, -1, dtype=ID)
    reps = []
    members = sub.members
    start = 0
    while True:
        free = np.flatnonzero(coset_of[start:] < 0)
        if free.size == 0:
            break
        x = start + int(free[0])
        start = x
        coset = group.mul_array(np.full(members.shape, x, dtype=ID), members)
        coset_of[coset] = len(reps)
        reps.append(x)
    return coset_of, as_ids(reps)


class QuotientGroup(FiniteGroup):
    """``parent / normal`` with cosets numbered by their minimal element."""

    def __init__(self, parent, normal):
        self.parent = parent
        self.normal = normal
        self.coset_of, self.reps = left_cosets(parent, normal)
        self.order = int(self.reps.size)
        self.identity = int(self.coset_of[parent.identity])
        self.name = f"{parent.name}/<{normal.order}>"

    def mul_array(self, a, b):
        return self.coset_of[self.parent.mul_array(self.reps[as_ids(a)], self.reps[as_ids(b)])]

    def inv_array(self, a):
        return self.coset_of[self.parent.inv_array(self.reps[as_ids(a)])]

    @cached_property
    def generators(self):
        cands = [int(c) for c in np.unique(self.coset_of[as_ids(self.parent.generators)])
                 if c != self.identity] if self.parent.generators else []
        return greedy_generators(self, cands)

    def label(self, a):
        return "[" + self.parent.label(int(self.reps[a])) + "]"
