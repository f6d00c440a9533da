"""Finite groups with vectorized multiplication.

Elements are always the integers ``0 .. order-1``.  Each backend provides
``mul_array`` / ``inv_array`` over numpy integer arrays; scalar ``mul`` and
``inv`` are thin wrappers.  Backends:

* ``TableGroup``: explicit Cayley table (order bounded by
  ``config.TABLE_ORDER_BOUND``).
* ``CyclicGroup``: ``Z/n`` with modular addition, any ``n``.
* ``PermGroup``: closure of permutation generators.  The product ``p * q``
  is the composition ``p o q`` (apply ``q`` first).  Small closures get a
  table, large ones fall back to a lookup dictionary.
* ``ProductGroup``: direct product; element ids are mixed-radix encodings
  of coordinate tuples, first factor most significant.
* ``SubgroupGroup`` / ``QuotientGroup``: subgroups and coset groups of a
  parent, created by ``groups.subgroups``.
"""

from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .. import config
from ..errors import GroupError

ID = np.int64


def as_ids(values):
    return np.asarray(values, dtype=ID)


class FiniteGroup:
    """Abstract finite group on the ids ``0 .. order-1``."""

    order: int
    identity: int
    name: str = "G"
    labels = None

    def mul_array(self, a, b):
        raise NotImplementedError

    def inv_array(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        return int(self.mul_array(as_ids([a]), as_ids([b]))[0])

    def inv(self, a):
        return int(self.inv_array(as_ids([a]))[0])

    def prod(self, elements):
        acc = self.identity
        for x in elements:
            acc = self.mul(acc, x)
        return acc

    def power(self, a, n):
        if n < 0:
            a, n = self.inv(a), -n
        result, base = self.identity, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def power_array(self, a, n):
        a = as_ids(a)
        if n < 0:
            a, n = self.inv_array(a), -n
        result = np.full(a.shape, self.identity, dtype=ID)
        base = a
        while n:
            if n & 1:
                result = self.mul_array(result, base)
            base = self.mul_array(base, base)
            n >>= 1
        return result

    def conj_array(self, g, a):
        """``g a g^-1`` for a scalar ``g`` and an id array ``a``."""
        a = as_ids(a)
        g_arr = np.full(a.shape, g, dtype=ID)
        return self.mul_array(self.mul_array(g_arr, a), self.inv_array(g_arr))

    @property
    def elements(self):
        return np.arange(self.order, dtype=ID)

    def label(self, a):
        if self.labels is not None:
            return self.labels[a]
        return str(a)

    @cached_property
    def element_orders(self):
        """Order of every element, as an array indexed by id."""
        x = self.elements
        orders = np.ones(self.order, dtype=ID)
        cur = x.copy()
        pending = cur != self.identity
        k = 1
        while pending.any():
            k += 1
            cur[pending] = self.mul_array(cur[pending], x[pending])
            done = pending & (cur == self.identity)
            orders[done] = k
            pending &= ~done
        return orders

    def element_order(self, a):
        return int(self.element_orders[a])

    @cached_property
    def exponent(self):
        return int(np.lcm.reduce(np.unique(self.element_orders)))

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily by decreasing element order."""
        return greedy_generators(self, self._generator_candidates())

    def _generator_candidates(self):
        orders = self.element_orders
        return [int(x) for x in np.argsort(-orders, kind="stable") if x != self.identity]

    @cached_property
    def is_abelian(self):
        gens = self.generators
        for g, h in itertools.combinations(gens, 2):
            if self.mul(g, h) != self.mul(h, g):
                return False
        return True

    def commutes(self, a, b):
        return self.mul(a, b) == self.mul(b, a)

    def cayley_table(self):
        if self.order > config.budget(config.TABLE_ORDER_BOUND):
            raise GroupError(f"order {self.order} exceeds the table bound")
        x = self.elements
        a = np.repeat(x, self.order)
        b = np.tile(x, self.order)
        return self.mul_array(a, b).reshape(self.order, self.order)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} order={self.order}>"


def closure(group, gens):
    """Sorted member array of the subgroup generated by ``gens``."""
    seen = np.zeros(group.order, dtype=bool)
    seen[group.identity] = True
    kept = []
    for g in (int(g) for g in gens):
        if seen[g]:
            continue
        kept.append(g)
        # Re-close: every current member times every kept generator.
        frontier = np.flatnonzero(seen).astype(ID)
        while frontier.size:
            fresh = []
            for h in kept:
                nxt = group.mul_array(frontier, np.full(frontier.shape, h, dtype=ID))
                nxt = np.unique(nxt[~seen[nxt]])
                seen[nxt] = True
                fresh.append(nxt)
            frontier = np.concatenate(fresh)
    return np.flatnonzero(seen).astype(ID)


def greedy_generators(group, candidates):
    """Pick generators from ``candidates`` until they generate ``group``."""
    seen = np.zeros(group.order, dtype=bool)
    seen[group.identity] = True
    gens = []
    for g in candidates:
        if seen[g]:
            continue
        gens.append(int(g))
        members = closure(group, gens)
        seen[members] = True
        if members.size == group.order:
            break
    return gens


class TableGroup(FiniteGroup):
    def __init__(self, table, name="G", labels=None, check=True):
        table = np.asarray(table, dtype=ID)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = table.shape[0]
        if n > config.budget(config.TABLE_ORDER_BOUND):
            raise GroupError(f"order {n} exceeds the table bound {config.TABLE_ORDER_BOUND}")
        if table.min() < 0 or table.max() >= n:
            raise GroupError("Cayley table entries out of range")
        self.table = table
        self.order = n
        self.name = name
        self.labels = labels
        ident = [e for e in range(n) if np.array_equal(table[e], np.arange(n))
                 and np.array_equal(table[:, e], np.arange(n))]
        if not ident:
            raise GroupError("Cayley table has no identity element")
        self.identity = ident[0]
        sorted_rows = np.sort(table, axis=1)
        sorted_cols = np.sort(table, axis=0)
        full = np.arange(n)
        if not ((sorted_rows == full).all() and (sorted_cols == full[:, None]).all()):
            raise GroupError("Cayley table is not a Latin square: inverses missing")
        rows, cols = np.nonzero(table == self.identity)
        self._inverse = np.empty(n, dtype=ID)
        self._inverse[rows] = cols
        if check:
            self._check_associative()

    def _check_associative(self):
        n = self.order
        t = self.table
        if n ** 3 <= 8_000_000:
            left = t[t, :]                      # (a*b)*c indexed [a, b, c]
            right = t[:, t]                     # a*(b*c) indexed [a, b, c]
            bad = np.argwhere(left != right)
        else:
            # Light's test over a generating set of the magma.
            bad = []
            for g in self.generators:
                left = t[t[:, g], :]            # (x*g)*y
                right = t[:, t[g, :]]           # x*(g*y)
                hit = np.argwhere(left != right)
                if hit.size:
                    x, y = hit[0]
                    bad = [(x, g, y)]
                    break
            bad = np.asarray(bad)
        if len(bad):
            a, b, c = (int(v) for v in bad[0])
            raise GroupError(f"table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")

    def mul_array(self, a, b):
        return self.table[as_ids(a), as_ids(b)]

    def inv_array(self, a):
        return self._inverse[as_ids(a)]


class CyclicGroup(FiniteGroup):
    def __init__(self, n):
        if n < 1:
            raise GroupError("cyclic group order must be positive")
        self.order = n
        self.identity = 0
        self.name = f"Z{n}"

    def mul_array(self, a, b):
        return (as_ids(a) + as_ids(b)) % self.order

    def inv_array(self, a):
        return (-as_ids(a)) % self.order

    @cached_property
    def generators(self):
        return [1] if self.order > 1 else []


class PermGroup(FiniteGroup):
    """Permutation group given by generators; elements sorted lexicographically."""

    def __init__(self, degree, generators, name="G"):
        perms = []
        for g in generators:
            g = tuple(int(v) for v in g)
            if len(g) != degree:
                raise GroupError(f"generator {g} has degree {len(g)}, expected {degree}")
            if sorted(g) != list(range(degree)):
                raise GroupError(f"generator {g} is not a permutation of 0..{degree - 1}")
            perms.append(g)
        self.degree = degree
        self.name = name
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in perms:
                    q = tuple(p[i] for i in g)       # p o g
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        elems = sorted(seen)
        self.perms = np.asarray(elems, dtype=ID).reshape(len(elems), degree)
        self.order = len(elems)
        self.identity = 0
        self._index = {p: i for i, p in enumerate(elems)}
        self.generator_ids = [self._index[g] for g in perms]
        self.table = None
        if self.order <= config.budget(config.TABLE_ORDER_BOUND):
            # comp[a, b, i] = perms[a][perms[b][i]]
            comp = np.take_along_axis(
                np.broadcast_to(self.perms[:, None, :], (self.order, self.order, degree)),
                np.broadcast_to(self.perms[None, :, :], (self.order, self.order, degree)),
                axis=2)
            keys = _row_keys(comp.reshape(-1, degree), degree)
            lookup = self._key_lookup()
            self.table = lookup(keys).reshape(self.order, self.order)
        inv = np.argsort(self.perms, axis=1)
        self._inverse = self._lookup_perm_rows(inv)

    def _key_lookup(self):
        keys = _row_keys(self.perms, self.degree)
        order = np.argsort(keys)
        sorted_keys = keys[order]

        def lookup(k):
            pos = np.searchsorted(sorted_keys, k)
            return order[pos].astype(ID)
        return lookup

    def _lookup_perm_rows(self, rows):
        return self._key_lookup()(_row_keys(rows, self.degree))

    def mul_array(self, a, b):
        a, b = as_ids(a), as_ids(b)
        if self.table is not None:
            return self.table[a, b]
        shape = np.broadcast_shapes(a.shape, b.shape)
        a, b = np.broadcast_to(a, shape).ravel(), np.broadcast_to(b, shape).ravel()
        rows = np.take_along_axis(self.perms[a], self.perms[b], axis=1)
        return self._lookup_perm_rows(rows).reshape(shape)

    def inv_array(self, a):
        return self._inverse[as_ids(a)]

    def element(self, perm):
        return self._index[tuple(int(v) for v in perm)]

    def _generator_candidates(self):
        return self.generator_ids + super()._generator_candidates()

    def label(self, a):
        return str(tuple(int(v) for v in self.perms[a]))


def _row_keys(rows, degree):
    rows = np.asarray(rows, dtype=ID)
    base = degree
    keys = np.zeros(rows.shape[0], dtype=ID)
    for j in range(degree):
        keys = keys * base + rows[:, j]
    return keys


class ProductGroup(FiniteGroup):
    def __init__(self, factors, name=None):
        if not factors:
            raise GroupError("product of zero groups")
        self.factors = list(factors)
        sizes = [f.order for f in self.factors]
        self.order = int(np.prod(sizes, dtype=object))
        strides = []
        acc = 1
        for s in reversed(sizes):
            strides.append(acc)
            acc *= s
        self.strides = list(reversed(strides))
        self.identity = self.combine([f.identity for f in self.factors])
        self.name = name or " x ".join(f.name for f in self.factors)

    def coords(self, a):
        a = as_ids(a)
        return [(a // s) % f.order for s, f in zip(self.strides, self.factors)]

    def combine(self, coords):
        total = 0
        for c, s in zip(coords, self.strides):
            total = total + as_ids(c) * s
        if np.ndim(total) == 0:
            return int(total)
        return as_ids(total)

    def element(self, coords):
        return int(self.combine([int(c) for c in coords]))

    def mul_array(self, a, b):
        ca, cb = self.coords(a), self.coords(b)
        return self.combine([f.mul_array(x, y) for f, x, y in zip(self.factors, ca, cb)])

    def inv_array(self, a):
        return self.combine([f.inv_array(x) for f, x in zip(self.factors, self.coords(a))])

    def embed(self, j, a):
        """Embed element(s) of factor ``j`` with identity elsewhere."""
        coords = [np.full(np.shape(a), f.identity, dtype=ID) for f in self.factors]
        coords[j] = as_ids(a)
        return self.combine(coords)

    @cached_property
    def generators(self):
        gens = []
        for j, f in enumerate(self.factors):
            gens.extend(int(self.embed(j, g)) for g in f.generators)
        return gens

    @cached_property
    def element_orders(self):
        parts = [f.element_orders[c] for f, c in zip(self.factors, self.coords(self.elements))]
        return np.lcm.reduce(parts)

    @cached_property
    def is_abelian(self):
        return all(f.is_abelian for f in self.factors)

    def label(self, a):
        return "(" + ",".join(f.label(int(c)) for f, c in zip(self.factors, self.coords(a))) + ")"


# -- named constructors -----------------------------------------------------

def cyclic(n):
    return CyclicGroup(n)


def symmetric(n):
    if n < 1:
        raise GroupError("symmetric degree must be positive")
    gens = []
    if n > 1:
        gens.append([1, 0] + list(range(2, n)))
        gens.append(list(range(1, n)) + [0])
    g = PermGroup(n, gens, name=f"S{n}")
    return g


def alternating(n):
    if n < 1:
        raise GroupError("alternating degree must be positive")
    gens = []
    for k in range(2, n):
        # 3-cycles (0 1 k) generate A_n
        p = list(range(n))
        p[0], p[1], p[k] = 1, k, 0
        gens.append(p)
    return PermGroup(n, gens, name=f"A{n}")


def from_elements(elements, mul, identity, name, labels=None):
    """Table group from an explicit element list and a multiplication function.

    The identity is placed at id 0.
    """
    elements = list(elements)
    elements.remove(identity)
    elements.insert(0, identity)
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    if labels is None:
        labels = [str(e) for e in elements]
    return TableGroup(table, name=name, labels=labels)


def sl2(p):
    """SL(2, p) as a table group; elements are 2x2 matrices (a, b, c, d)."""
    mats = [m for m in itertools.product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)
    return from_elements(mats, mul, (1, 0, 0, 1), f"SL(2,{p})")


def dihedral(n):
    """Dihedral group of order 2n; elements (k, s) meaning r^k s^s."""
    elems = [(k, s) for s in range(2) for k in range(n)]

    def mul(x, y):
        k1, s1 = x
        k2, s2 = y
        return (((k1 + (-k2 if s1 else k2)) % n), s1 ^ s2)
    return from_elements(elems, mul, (0, 0), f"D{n}")


def quaternion():
    """Quaternion group Q8 with elements (sign, unit), unit in 1,i,j,k."""
    units = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]

    def mul(x, y):
        sign, unit = units[(x[1], y[1])]
        return (x[0] * y[0] * sign, unit)
    return from_elements(elems, mul, (1, "1"), "Q8")


def product(*factors):
    return ProductGroup(factors)


def elementary_abelian(p, n):
    return ProductGroup([CyclicGroup(p) for _ in range(n)], name=f"Z{p}^{n}")


NAMED = {
    "S3": lambda: symmetric(3),
    "S4": lambda: symmetric(4),
    "A4": lambda: alternating(4),
    "A5": lambda: alternating(5),
    "SL25": lambda: sl2(5),
    "Q8": quaternion,
    "D4": lambda: dihedral(4),
}


def make_group(spec):
    """Build a group from a description.

    ``spec`` is one of: a ``FiniteGroup`` (returned as is); a name in
    ``NAMED``; a tuple ``("cyclic", n)``, ``("symmetric", n)``,
    ``("alternating", n)``, ``("dihedral", n)``, ``("table", rows)``,
    ``("perm", degree, generators)``, or ``("product", [spec, ...])``.
    """
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        if spec not in NAMED:
            raise GroupError(f"unknown group name {spec!r}")
        return NAMED[spec]()
    kind, *args = spec
    if kind == "cyclic":
        return cyclic(int(args[0]))
    if kind == "symmetric":
        return symmetric(int(args[0]))
    if kind == "alternating":
        return alternating(int(args[0]))
    if kind == "dihedral":
        return dihedral(int(args[0]))
    if kind == "table":
        return TableGroup(args[0])
    if kind == "perm":
        return PermGroup(int(args[0]), args[1])
    if kind == "product":
        return ProductGroup([make_group(s) for s in args[0]])
    raise GroupError(f"unknown group constructor {kind!r}")
