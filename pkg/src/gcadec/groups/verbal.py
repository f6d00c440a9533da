"""Group words, verbal subgroups, and direct-power-of-simple factorizations."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

import numpy as np

from .. import config
from ..errors import BudgetExceeded, InternalInconsistency
from .core import ID, CyclicGroup, ProductGroup, as_ids, closure
from .homs import Homomorphism, conjugation, enumerate_endomorphisms, isomorphism
from .subgroups import (Subgroup, centralizes, commutator_subgroup, conjugacy_classes,
                        normal_closure)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word; ``letters`` are ``(variable, exponent)`` with variables from 1."""

    arity: int
    letters: tuple = ()

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("word arity must be at least 1")
        reduced = []
        for var, exp in self.letters:
            var, exp = int(var), int(exp)
            if not 1 <= var <= self.arity or exp not in (1, -1):
                raise ValueError(f"bad letter {(var, exp)} for arity {self.arity}")
            if reduced and reduced[-1] == (var, -exp):
                reduced.pop()
            else:
                reduced.append((var, exp))
        object.__setattr__(self, "letters", tuple(reduced))

    @classmethod
    def commutator(cls):
        return cls(2, ((1, -1), (2, -1), (1, 1), (2, 1)))

    @classmethod
    def power(cls, n):
        return cls(1, ((1, 1 if n > 0 else -1),) * abs(n))

    @classmethod
    def variable(cls):
        return cls(1, ((1, 1),))

    @classmethod
    def parse(cls, text):
        """Parse ``"x1^-1 x2^-1 x1 x2"`` or ``"x1^30"``; ``x``/``y`` alias ``x1``/``x2``."""
        letters = []
        arity = 1
        for tok in text.replace("*", " ").split():
            m = re.fullmatch(r"(x\d*|y)(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"cannot parse word token {tok!r}")
            name, exp = m.group(1), int(m.group(2) or 1)
            var = 2 if name == "y" else int(name[1:] or 1)
            arity = max(arity, var)
            letters.extend([(var, 1 if exp > 0 else -1)] * abs(exp))
        return cls(arity, tuple(letters))

    def __str__(self):
        if not self.letters:
            return "1"
        parts = []
        for (var, exp), run in itertools.groupby(self.letters):
            n = len(list(run)) * exp
            parts.append(f"x{var}" if n == 1 else f"x{var}^{n}")
        return " ".join(parts)

    def evaluate(self, group, values):
        """Vectorized value for ``values[i]`` = array of substitutions for variable ``i+1``."""
        shape = np.shape(values[0])
        acc = np.full(shape, group.identity, dtype=ID)
        inverses = {}
        for var, exp in self.letters:
            v = values[var - 1]
            if exp < 0:
                if var not in inverses:
                    inverses[var] = group.inv_array(v)
                v = inverses[var]
            acc = group.mul_array(acc, v)
        return acc


def word_values(group, word):
    """All values of ``word`` over every tuple in ``group^arity``."""
    n = group.order
    total = n ** word.arity
    limit = config.budget(config.VERBAL_TUPLE_BUDGET)
    if word.arity > config.VERBAL_MAX_ARITY or total > limit:
        raise BudgetExceeded(f"{total} substitutions for arity {word.arity} exceed budget {limit}")
    grids = np.meshgrid(*([group.elements] * word.arity), indexing="ij")
    return np.unique(word.evaluate(group, [g.ravel() for g in grids]))


def verbal_subgroup(group, word):
    """Subgroup generated by all values of ``word``, by exhaustive substitution."""
    return Subgroup.generated(group, word_values(group, word))


def power_subgroup(group, n):
    """Subgroup generated by all ``n``-th powers (the verbal subgroup of ``x^n``)."""
    return Subgroup.generated(group, np.unique(group.power_array(group.elements, n)))


def reduced_words(arity, max_len):
    """All nonempty freely reduced words up to ``max_len`` letters, shortest first."""
    letters = [(v, e) for v in range(1, arity + 1) for e in (1, -1)]
    level = [()]
    for _ in range(max_len):
        nxt = []
        for w in level:
            for a in letters:
                if w and w[-1] == (a[0], -a[1]):
                    continue
                nxt.append(w + (a,))
        for w in nxt:
            yield GroupWord(arity, w)
        level = nxt


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def candidate_verbal_subgroups(group, exhaustive_len=None):
    """Proper nontrivial verbal subgroups found by the search, with words, deduplicated.

    Order: commutator word, power words ``x^n`` for divisors ``n`` of the
    exponent (increasing), then reduced words of arity <= 2 up to
    ``exhaustive_len`` when the substitution budget allows.
    """
    found = {}

    def offer(sub, word):
        if not sub.is_trivial() and not sub.is_whole():
            key = sub.members.tobytes()
            if key not in found:
                found[key] = (sub, word)

    if group.order == 1:
        return []
    if not group.is_abelian:
        offer(commutator_subgroup(group), GroupWord.commutator())
    for n in divisors(group.exponent)[1:-1]:
        offer(power_subgroup(group, n), GroupWord.power(n))
    max_len = config.VERBAL_SEARCH_MAX_LEN if exhaustive_len is None else exhaustive_len
    if max_len and group.order ** 2 <= config.budget(config.VERBAL_TUPLE_BUDGET):
        cache = {}
        for word in reduced_words(2, max_len):
            vals = word_values(group, word)
            key = vals.tobytes()
            if key in cache:
                continue
            cache[key] = True
            offer(Subgroup.generated(group, vals), word)
    return list(found.values())


def find_nontrivial_proper_verbal(group, exhaustive_len=None, check=True):
    """First ``(H, word)`` with ``{e} < H = word(G) < G``, or ``None``.

    The exhaustive safety net only runs when the commutator and power words
    find nothing.  With ``check`` a ``None`` answer is cross-checked against
    ``characteristic_simple_decomposition`` and a disagreement raises
    ``InternalInconsistency``.
    """
    if group.order == 1:
        return None
    if not group.is_abelian:
        h = commutator_subgroup(group)
        if not h.is_trivial() and not h.is_whole():
            return h, GroupWord.commutator()
    for n in divisors(group.exponent)[1:-1]:
        h = power_subgroup(group, n)
        if not h.is_trivial() and not h.is_whole():
            return h, GroupWord.power(n)
    rest = candidate_verbal_subgroups(group, exhaustive_len)
    if rest:
        return rest[0]
    if check and characteristic_simple_decomposition(group) is None:
        raise InternalInconsistency(
            f"{group.name}: no proper verbal subgroup found, yet the group is not a power of a simple group")
    return None


def is_fully_invariant(group, sub, extra=()):
    """``phi(sub) <= sub`` for every endomorphism ``phi``.

    Exhaustive up to ``config.ENDOMORPHISM_ENUM_ORDER``; above that only
    inner automorphisms by generators and the maps in ``extra`` are tried.
    """
    if sub.is_trivial() or sub.is_whole():
        return True
    if group.order <= config.budget(config.ENDOMORPHISM_ENUM_ORDER):
        maps = enumerate_endomorphisms(group)
    else:
        maps = [conjugation(group, g) for g in group.generators]
    maps = list(maps) + list(extra)
    gens = as_ids(sub.generators)
    return all(sub.contains(phi.images[gens]).all() for phi in maps)


def find_invariance_violation(group, sub):
    """An endomorphism moving ``sub`` outside itself, or ``None`` (small groups only)."""
    gens = as_ids(sub.generators)
    for phi in enumerate_endomorphisms(group):
        if not sub.contains(phi.images[gens]).all():
            return phi
    return None


# -- direct powers of simple groups -----------------------------------------

@dataclass
class SimpleFactorization:
    """``group`` as the internal direct product of ``factors``, each isomorphic to ``simple``.

    ``isos[i]`` maps ``factors[i].as_group()`` onto ``simple``.
    """

    group: object
    factors: list
    simple: object
    isos: list
    abelian: bool
    prime: int | None = None

    @property
    def multiplicity(self):
        return len(self.factors)

    def describe(self):
        if not self.factors:
            return "trivial"
        if self.abelian:
            return f"elementary-abelian(p={self.prime}, n={self.multiplicity})"
        return f"simple-power(S order {self.simple.order}, m={self.multiplicity})"


def _trivial_factorization(group):
    return SimpleFactorization(group, [], None, [], abelian=True, prime=None)


def is_simple(group):
    if group.order == 1:
        return False
    if group.is_abelian:
        n = group.order
        return all(n % d for d in range(2, int(n ** 0.5) + 1)) and n > 1
    for cls in conjugacy_classes(group)[1:]:
        if normal_closure(group, [int(cls[0])]).order != group.order:
            return False
    return True


def elementary_abelian_basis(group):
    """Greedy basis of an elementary abelian group (independent generators)."""
    seen = np.zeros(group.order, dtype=bool)
    seen[group.identity] = True
    basis = []
    for x in range(group.order):
        if seen[x]:
            continue
        basis.append(x)
        members = closure(group, basis)
        seen[members] = True
        if members.size == group.order:
            break
    return basis


def _abelian_factorization(group):
    exp = group.exponent
    if any(exp % d == 0 for d in range(2, int(exp ** 0.5) + 1)):
        return None
    p = exp
    basis = elementary_abelian_basis(group)
    ref = CyclicGroup(p)
    factors, isos = [], []
    for b in basis:
        cyc = [group.identity]
        for _ in range(p - 1):
            cyc.append(group.mul(cyc[-1], b))
        sub = Subgroup(group, cyc, gens=[b])
        local = sub.local_ids(as_ids(cyc))
        images = np.empty(p, dtype=ID)
        images[local] = np.arange(p)
        factors.append(sub)
        isos.append(Homomorphism(sub.as_group(), ref, images))
    return SimpleFactorization(group, factors, ref, isos, abelian=True, prime=p)


def _nonabelian_factorization(group):
    classes = conjugacy_classes(group)[1:]
    normals = {}
    for cls in classes:
        n = normal_closure(group, [int(cls[0])])
        normals.setdefault(n.members.tobytes(), n)
    cands = list(normals.values())
    minimal = [n for n in cands
               if not any(m.order < n.order and m.issubset(n) for m in cands)]
    minimal.sort(key=lambda s: int(s.members[1]) if s.order > 1 else 0)
    total = 1
    for n in minimal:
        total *= n.order
    if total != group.order:
        return None
    for i, a in enumerate(minimal):
        for b in minimal[i + 1:]:
            if centralizes(group, a.generators, b.generators) is not None:
                return None
    if closure(group, [g for n in minimal for g in n.generators]).size != group.order:
        return None
    ref = minimal[0].as_group()
    if ref.is_abelian or not is_simple(ref):
        return None
    isos = []
    for n in minimal:
        iso = isomorphism(n.as_group(), ref)
        if iso is None:
            return None
        isos.append(iso)
    return SimpleFactorization(group, minimal, ref, isos, abelian=False)


def _product_factorization(group):
    parts = [characteristic_simple_decomposition(f) for f in group.factors]
    if any(p is None for p in parts):
        return None
    live = [(j, p) for j, p in enumerate(parts) if p.factors]
    if not live:
        return _trivial_factorization(group)
    ref_part = live[0][1]
    ref = ref_part.simple
    factors, isos = [], []
    for j, part in live:
        if part.abelian != ref_part.abelian:
            return None
        if part.abelian:
            if part.prime != ref_part.prime:
                return None
            to_ref = None
        else:
            to_ref = None
            if part.simple is not ref:
                to_ref = isomorphism(part.simple, ref)
                if to_ref is None:
                    return None
        for sub, iso in zip(part.factors, part.isos):
            emb = Subgroup(group, group.embed(j, sub.members),
                           gens=[int(group.embed(j, g)) for g in sub.generators])
            images = iso.images if to_ref is None else to_ref.images[iso.images]
            factors.append(emb)
            isos.append(Homomorphism(emb.as_group(), ref, images))
    return SimpleFactorization(group, factors, ref, isos, abelian=ref_part.abelian,
                               prime=ref_part.prime)


def characteristic_simple_decomposition(group):
    """Factorization of ``group`` as a direct power of one simple group, or ``None``.

    The trivial group gets the empty factorization.  Direct products are
    handled factor by factor: a product is such a power iff each factor is
    and all factors share the simple type.
    """
    cached = group.__dict__.get("_char_simple")
    if cached is not None:
        return cached or None
    if group.order == 1:
        result = _trivial_factorization(group)
    elif isinstance(group, ProductGroup):
        result = _product_factorization(group)
    elif group.is_abelian:
        result = _abelian_factorization(group)
    else:
        result = _nonabelian_factorization(group)
    group.__dict__["_char_simple"] = result if result is not None else False
    return result
