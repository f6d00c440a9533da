"""Brute-force oracles used to cross-check the deciders at desk scale.

All oracles are exact for what they answer but one-sided for the dynamical
property: reachability only ever confirms cylinder pairs, and a missing
kernel witness does not prove surjectivity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import BudgetExceeded, LemmaVerificationError
from .gca import (PeriodicConfig, compose, equals_shift, identity_gca, power, random_config,
                  shifted, step)
from .groups.core import ID, ProductGroup, as_ids, closure
from .groups.subgroups import Subgroup
from .groups.verbal import (characteristic_simple_decomposition, elementary_abelian_basis,
                            reduced_words, word_values)


# -- linear algebra over F_p ------------------------------------------------

def _row_reduce(mat, p):
    """Reduced row echelon form of an integer matrix mod ``p``; returns ``(rref, pivots)``."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def in_span(columns, target, p):
    """Whether ``target`` is an F_p combination of the given column vectors."""
    target = np.asarray(target, dtype=np.int64) % p
    if not target.any():
        return True
    if len(columns) == 0:
        return False
    a = np.column_stack(columns)
    rank = len(_row_reduce(a.T, p)[1])
    rank2 = len(_row_reduce(np.vstack([a.T, target]), p)[1])
    return rank == rank2


def null_vector(mat, p):
    """A nonzero solution of ``mat @ x = 0`` mod ``p``, or ``None``."""
    mat = np.asarray(mat, dtype=np.int64)
    cols = mat.shape[1]
    rref, pivots = _row_reduce(mat, p)
    free = [c for c in range(cols) if c not in pivots]
    if not free:
        return None
    f = free[0]
    x = np.zeros(cols, dtype=np.int64)
    x[f] = 1
    for i, c in enumerate(pivots):
        x[c] = (-rref[i, f]) % p
    return x


class _Coordinates:
    """F_p coordinates of an elementary abelian group, or ``None`` when not applicable."""

    def __init__(self, group):
        from .abelian import coordinate_table
        fac = characteristic_simple_decomposition(group)
        self.ok = fac is not None and fac.abelian and bool(fac.factors)
        if self.ok:
            self.p = fac.prime
            self.n = fac.multiplicity
            self.basis = elementary_abelian_basis(group)
            self.coords = coordinate_table(group, self.basis, self.p)
            weights = self.p ** np.arange(self.n)
            self.element_of = np.empty(group.order, dtype=ID)
            self.element_of[self.coords @ weights] = group.elements
            self.weights = weights

    def element(self, vec):
        return int(self.element_of[int(np.dot(np.asarray(vec) % self.p, self.weights))])


# -- cylinder reachability --------------------------------------------------

@dataclass
class ReachQuery:
    gca: object
    positions: list
    source: list
    target: list
    max_steps: int

    def __post_init__(self):
        if not (len(self.positions) == len(self.source) == len(self.target)):
            raise ValueError("positions, source and target must have equal length")
        self.positions = [tuple(int(x) for x in u) for u in self.positions]


def _reach_step(gca, rule, positions, source, target, coords, mode):
    """Whether some configuration with ``source`` on ``positions`` is sent by ``rule``
    (a power of the automaton) into ``target`` on ``positions``."""
    group = gca.group
    entries = rule.canonical.entries
    pos_index = {u: i for i, u in enumerate(positions)}
    window = set()
    for m in positions:
        for u, _ in entries:
            window.add(tuple(a + b for a, b in zip(m, u)))
    if len(window) > config.budget(config.REACH_CELL_BUDGET):
        raise BudgetExceeded(f"reach window of {len(window)} cells exceeds the cell budget")
    # contribution of the fixed cells, in the order of the local product
    fixed = []
    for m in positions:
        acc = group.identity
        for u, h in entries:
            w = tuple(a + b for a, b in zip(m, u))
            if w in pos_index:
                acc = group.mul(acc, h(source[pos_index[w]]))
        fixed.append(acc)
    free = sorted(window - set(pos_index))
    # F^n(p z) = F^n(p) F^n(z) and the free cells generate a subgroup of G^M
    needed = [group.mul(group.inv(f), int(q)) for f, q in zip(fixed, target)]
    gen_vectors = []
    offsets = {u: h for u, h in entries}
    gens = group.generators if mode == "group" else coords.basis
    for w in free:
        for g in gens:
            vec = []
            for m in positions:
                u = tuple(a - b for a, b in zip(w, m))
                vec.append(offsets[u](g) if u in offsets else group.identity)
            gen_vectors.append(vec)
    if mode == "linear":
        cols = [coords.coords[as_ids(v)].ravel() for v in gen_vectors]
        tgt = coords.coords[as_ids(needed)].ravel()
        return in_span(cols, tgt, coords.p)
    power_group = ProductGroup([group] * len(positions)) if len(positions) > 1 else group
    if power_group.order > config.budget(config.REACH_STATE_BUDGET):
        raise BudgetExceeded(f"|G|^{len(positions)} = {power_group.order} exceeds the state budget")
    if len(positions) > 1:
        gens_ids = [int(power_group.element(v)) for v in gen_vectors]
        want = int(power_group.element(needed))
    else:
        gens_ids = [int(v[0]) for v in gen_vectors]
        want = int(needed[0])
    span = closure(power_group, sorted(set(gens_ids)))
    pos = np.searchsorted(span, want)
    return bool(pos < span.size and span[pos] == want)


def cylinder_reach(query, mode=None):
    """Smallest ``n <= max_steps`` with ``F^n(Cyl(M, P))`` meeting ``Cyl(M, Q)``, or ``None``.

    Exact for each ``n``.  ``mode`` is ``"linear"`` (F_p elimination, elementary
    abelian groups only), ``"group"`` (subgroup closure), or ``None`` for automatic.
    """
    gca = query.gca
    coords = _Coordinates(gca.group)
    if mode is None:
        mode = "linear" if coords.ok else "group"
    if mode == "linear" and not coords.ok:
        raise ValueError("linear mode needs an elementary abelian group")
    rule = identity_gca(gca.group, gca.dim)
    for n in range(query.max_steps + 1):
        if n:
            rule = compose(rule, gca)
        if _reach_step(gca, rule, query.positions, query.source, query.target, coords, mode):
            return n
    return None


def reach_table(gca, positions, max_steps):
    """Minimal reach time for every pair ``(P, Q)`` on fixed ``positions``.

    Returns ``(table, power_group)`` where ``table[P, Q]`` is the smallest
    ``n <= max_steps`` (or ``-1``) and ``P``, ``Q`` are ids of ``G^|M|``
    (``G`` itself for a single position).  Same procedure as
    ``cylinder_reach`` with the per-``n`` subgroup shared by all pairs.
    """
    group = gca.group
    positions = [tuple(int(x) for x in u) for u in positions]
    size = len(positions)
    pg = ProductGroup([group] * size) if size > 1 else group
    if pg.order ** 2 > config.budget(config.REACH_STATE_BUDGET) * 8:
        raise BudgetExceeded(f"{pg.order}^2 cylinder pairs exceed the state budget")
    coords = pg.coords(pg.elements) if size > 1 else [pg.elements]
    pos_index = {u: i for i, u in enumerate(positions)}
    table = np.full((pg.order, pg.order), -1, dtype=np.int64)
    rule = identity_gca(group, gca.dim)
    for n in range(max_steps + 1):
        if n:
            rule = compose(rule, gca)
        entries = rule.canonical.entries
        offsets = dict(entries)
        window = {tuple(a + b for a, b in zip(m, u)) for m in positions for u, _ in entries}
        if len(window) > config.budget(config.REACH_CELL_BUDGET):
            raise BudgetExceeded(f"reach window of {len(window)} cells exceeds the cell budget")
        fixed = []
        for m in positions:
            acc = np.full(pg.order, group.identity, dtype=ID)
            for u, h in entries:
                w = tuple(a + b for a, b in zip(m, u))
                if w in pos_index:
                    acc = group.mul_array(acc, h.images[coords[pos_index[w]]])
            fixed.append(acc)
        fixed = pg.combine(fixed) if size > 1 else fixed[0]
        gens = set()
        for w in sorted(window - set(pos_index)):
            for g in group.generators:
                vec = []
                for m in positions:
                    u = tuple(a - b for a, b in zip(w, m))
                    vec.append(offsets[u](g) if u in offsets else group.identity)
                gens.add(int(pg.element(vec)) if size > 1 else int(vec[0]))
        span = np.zeros(pg.order, dtype=bool)
        span[closure(pg, sorted(gens))] = True
        inv_fixed = pg.inv_array(fixed)
        ok = span[pg.mul_array(inv_fixed[:, None], pg.elements[None, :])]
        table[(table < 0) & ok] = n
        if (table >= 0).all():
            break
    return table, pg


def unreached_pairs(gca, size, radius, max_steps):
    """Cylinder pairs with ``size`` positions in the radius window that do not reach within ``max_steps``."""
    cells = list(itertools.product(range(-radius, radius + 1), repeat=gca.dim))
    missing = []
    for positions in itertools.combinations(cells, size):
        table, _ = reach_table(gca, positions, max_steps)
        for p, q in zip(*np.nonzero(table < 0)):
            missing.append((positions, int(p), int(q)))
    return missing


def window_pairs(gca, size, radius=1):
    """All cylinder pairs with ``size`` positions in the centered box of the given radius."""
    cells = list(itertools.product(range(-radius, radius + 1), repeat=gca.dim))
    for positions in itertools.combinations(cells, size):
        for source in itertools.product(range(gca.group.order), repeat=size):
            for target in itertools.product(range(gca.group.order), repeat=size):
                yield list(positions), list(source), list(target)


# -- finite kernel witnesses ------------------------------------------------

@dataclass
class KernelWitness:
    pattern: dict   # cell -> nonidentity element id
    box: int


def _box_cells(d, radius):
    return list(itertools.product(range(-radius, radius + 1), repeat=d))


def _image_cells(gca, cells):
    out = set()
    for c in cells:
        for u in gca.neighbors:
            out.add(tuple(a - b for a, b in zip(c, u)))
    return sorted(out)


def apply_finite(gca, pattern):
    """``F`` of a finitely supported configuration, as a dict of its nonidentity cells."""
    group = gca.group
    entries = gca.canonical.entries
    out = {}
    for v in _image_cells(gca, list(pattern)):
        acc = group.identity
        for u, h in entries:
            w = tuple(a + b for a, b in zip(v, u))
            x = pattern.get(w, group.identity)
            acc = group.mul(acc, h(x))
        if acc != group.identity:
            out[v] = acc
    return out


def verify_kernel_witness(gca, witness):
    """Re-check a witness on a periodic window wide enough to avoid wrap-around."""
    group = gca.group
    if not witness.pattern or all(v == group.identity for v in witness.pattern.values()):
        return False
    if any(max(abs(x) for x in c) > witness.box for c in witness.pattern):
        return False
    period = 2 * witness.box + 1 + 2 * gca.radius + 2
    cells = np.full((period,) * gca.dim, group.identity, dtype=ID)
    for c, x in witness.pattern.items():
        cells[tuple(v % period for v in c)] = x
    out = step(gca, PeriodicConfig(cells))
    return bool((out.cells == group.identity).all())


def kernel_finite_search(gca, box):
    """A nontrivial finite configuration inside ``[-box, box]^d`` mapped to the identity, or ``None``.

    Elementary abelian groups are solved by F_p elimination on the box (exact).
    Otherwise supports are enumerated by increasing size within the budget;
    a ``None`` answer then only covers the supports actually tried.
    """
    coords = _Coordinates(gca.group)
    if coords.ok:
        return _kernel_linear(gca, box, coords)
    return _kernel_enumerate(gca, box)


def _kernel_linear(gca, box, coords):
    p, n = coords.p, coords.n
    cells = _box_cells(gca.dim, box)
    index = {c: i for i, c in enumerate(cells)}
    targets = _image_cells(gca, cells)
    mats = {u: coords.coords[h.images[as_ids(coords.basis)]].T for u, h in gca.canonical.entries}
    system = np.zeros((len(targets) * n, len(cells) * n), dtype=np.int64)
    for r, v in enumerate(targets):
        for u, a in mats.items():
            w = tuple(x + y for x, y in zip(v, u))
            if w in index:
                c = index[w]
                system[r * n:(r + 1) * n, c * n:(c + 1) * n] += a
    x = null_vector(system % p, p)
    if x is None:
        return None
    pattern = {}
    for c, i in index.items():
        vec = x[i * n:(i + 1) * n]
        if vec.any():
            pattern[c] = coords.element(vec)
    return KernelWitness(pattern, box)


def _kernel_enumerate(gca, box):
    group = gca.group
    cells = _box_cells(gca.dim, box)
    nonid = [g for g in range(group.order) if g != group.identity]
    budget = config.budget(config.KERNEL_SEARCH_BUDGET)
    tried = 0
    for size in range(1, len(cells) + 1):
        supports = list(itertools.combinations(cells, size))
        if gca.dim == 1:
            # in one dimension a translate puts the leftmost support cell at the box edge
            supports = [s for s in supports if s[0] == cells[0]]
        count = len(supports) * len(nonid) ** size
        if tried + count > budget:
            if size == 1:
                raise BudgetExceeded("kernel search budget exhausted before any support size finished")
            return None
        for support in supports:
            for values in itertools.product(nonid, repeat=size):
                pattern = dict(zip(support, values))
                if not apply_finite(gca, pattern):
                    return KernelWitness(pattern, box)
        tried += count
    return None


def local_image_deficiency(gca):
    """An element outside the image of the local rule on a single cell, or ``None``.

    The image is generated by the (pairwise commuting) images of the homs.
    """
    group = gca.group
    gens = sorted({int(x) for _, h in gca.canonical.entries for x in np.unique(h.images)})
    image = Subgroup.generated(group, gens)
    if image.is_whole():
        return None
    return int(np.flatnonzero(~image.contains(group.elements))[0])


# -- verbal subgroups -------------------------------------------------------

def verbal_exhaustive(group, max_len, arity):
    """All distinct verbal subgroups ``w(G)`` over reduced words up to ``max_len`` in ``arity`` letters,
    plus the trivial subgroup (the empty word)."""
    found = {}
    triv = Subgroup(group, [group.identity], gens=[])
    found[triv.members.tobytes()] = triv
    seen_values = set()
    for word in reduced_words(arity, max_len):
        vals = word_values(group, word)
        key = vals.tobytes()
        if key in seen_values:
            continue
        seen_values.add(key)
        sub = Subgroup.generated(group, vals)
        found.setdefault(sub.members.tobytes(), sub)
    return list(found.values())


# -- lemma harness ----------------------------------------------------------

def lemma_harness(component, samples=100, period=5, seed=0, alpha_override=None, sign=1):
    """Check ``F^(o*alpha) = shift(sign*alpha*beta)`` on every minimal component two ways.

    Way one compares canonical rules; way two steps random periodic
    configurations.  Raises ``LemmaVerificationError`` when either way
    fails or the two disagree.
    """
    from .nonabelian import build_flow, minimal_components, structural_surjectivity
    gca = getattr(component, "gca", component)
    leaf, reason = structural_surjectivity(gca)
    if leaf is None:
        raise ValueError(f"component is not structurally surjective: {reason['detail']}")
    flow = build_flow(leaf)
    rng = np.random.default_rng(seed)
    report = []
    for sub, cyc in minimal_components(leaf, flow):
        alpha = cyc.alpha if alpha_override is None else alpha_override
        n = cyc.length * alpha
        shift = tuple(sign * alpha * b for b in cyc.beta)
        by_rule = equals_shift(power(sub, n), shift)
        by_configs = True
        for _ in range(samples):
            c = random_config(sub.group, (period,) * sub.dim, rng)
            if step(sub, c, n) != shifted(c, shift):
                by_configs = False
                break
        entry = {"cycle": [j + 1 for j in cyc.factors], "exponent": n, "shift": list(shift),
                 "by_rule": by_rule, "by_configs": by_configs}
        report.append(entry)
        if by_rule != by_configs:
            raise LemmaVerificationError(f"rule and configuration checks disagree: {entry}")
        if not by_rule:
            raise LemmaVerificationError(f"F^{n} != shift{shift} on cycle {entry['cycle']}")
    return report
