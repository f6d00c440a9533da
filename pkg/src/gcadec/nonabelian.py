"""Transitivity of GCAs over direct powers ``S^m`` of a non-abelian simple group.

A surjective rule sends every factor ``S_j`` onto exactly one factor ``S_l``
through exactly one of its homomorphisms.  This defines a permutation of the
factors.  Around each cycle of that permutation the automaton acts as a
shift composed with a finite-order automorphism, so a suitable power is a
pure shift and the cycle is transitive iff the displacement is nonzero.

Offsets: going once around a cycle moves by ``beta``, the sum of the offsets
of the homomorphisms used on the way.  With ``shift(u)(c)_v = c_{v+u}`` the
resulting identity is ``F^(o*alpha) = shift(+alpha*beta)`` per cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm

import numpy as np

from .errors import InternalInconsistency, LemmaVerificationError
from .gca import equals_shift, power, restrict_rule
from .groups.core import ID
from .groups.homs import permutation_order
from .groups.subgroups import Subgroup
from .groups.verbal import characteristic_simple_decomposition


@dataclass
class FactorMap:
    hom: int            # index into the canonical rule entries
    source: int
    target: int
    ref_images: np.ndarray   # induced automorphism of the reference simple group


@dataclass
class SimplePowerLeaf:
    gca: object
    factorization: object
    offsets: list           # offset of each canonical hom
    image_sets: list        # J_i: targets hit by hom i
    kernel_sets: list       # I_i: factors killed by hom i
    maps: dict              # source factor -> FactorMap

    @property
    def m(self):
        return self.factorization.multiplicity

    def r(self, i, factors=None):
        """Number of factors (optionally within ``factors``) that hom ``i`` maps onto."""
        js = self.image_sets[i]
        return len(js) if factors is None else len(js & set(factors))


@dataclass
class CycleFlow:
    factors: list               # the cycle, starting at its smallest factor
    return_orders: list         # order of the return automorphism at each factor
    alpha: int
    beta: tuple

    @property
    def length(self):
        return len(self.factors)

    @property
    def alpha_beta(self):
        return tuple(self.alpha * b for b in self.beta)


@dataclass
class FlowData:
    pi: list
    order: int
    cycles: list = field(default_factory=list)
    alpha: int = 1
    beta: tuple = ()

    def cycle_notation(self):
        return "".join("(" + " ".join(str(j + 1) for j in c.factors) + ")" for c in self.cycles)


def _factor_index(fac, parent_id):
    for l, sub in enumerate(fac.factors):
        if parent_id in sub:
            return l
    return None


def _inverse_array(arr):
    inv = np.empty_like(arr)
    inv[arr] = np.arange(arr.size)
    return inv


def structural_surjectivity(component):
    """``(leaf, None)`` when the structural conditions hold, else ``(None, reason)``.

    Checked on the canonical rule: every hom maps each factor trivially or
    isomorphically onto a single factor; the images of the homs partition
    the factors; each factor is moved by exactly one hom.
    """
    gca = getattr(component, "gca", component)
    group = gca.group
    fac = characteristic_simple_decomposition(group)
    if fac is None or fac.abelian or not fac.factors:
        raise InternalInconsistency(f"{group.name} is not a power of a non-abelian simple group")
    entries = gca.canonical.entries
    m = fac.multiplicity
    inv_isos = [_inverse_array(iso.images) for iso in fac.isos]
    image_sets, kernel_sets = [], []
    maps = {}
    for i, (u, h) in enumerate(entries):
        js, ks = set(), set()
        for j, sj in enumerate(fac.factors):
            img = h.images[sj.members]
            if (img == group.identity).all():
                ks.add(j)
                continue
            nontriv = img[img != group.identity]
            l = _factor_index(fac, int(nontriv[0]))
            if l is None or not fac.factors[l].contains(img).all() \
                    or np.unique(img).size != sj.order:
                return None, {"condition": "a", "hom": i, "factor": j,
                              "detail": f"h{i + 1} does not map factor {j + 1} onto a single factor"}
            if l in js:
                return None, {"condition": "a", "hom": i, "factor": j,
                              "detail": f"h{i + 1} maps two factors onto factor {l + 1}"}
            js.add(l)
            local = fac.factors[l].local_ids(img)
            ref = fac.isos[l].images[local][inv_isos[j]]
            if j in maps:
                return None, {"condition": "c", "factor": j,
                              "detail": f"factor {j + 1} is moved by h{maps[j].hom + 1} and h{i + 1}"}
            maps[j] = FactorMap(i, j, l, ref)
        image_sets.append(js)
        kernel_sets.append(ks)
    for i in range(len(entries)):
        for i2 in range(i + 1, len(entries)):
            both = image_sets[i] & image_sets[i2]
            if both:
                return None, {"condition": "a", "hom": i2, "factor": min(both),
                              "detail": f"images of h{i + 1} and h{i2 + 1} share factor {min(both) + 1}"}
    covered = set().union(*image_sets) if image_sets else set()
    if covered != set(range(m)):
        missing = min(set(range(m)) - covered)
        return None, {"condition": "a", "factor": missing,
                      "detail": f"no hom maps onto factor {missing + 1}"}
    unmoved = sorted(set(range(m)) - set(maps))
    if unmoved:
        return None, {"condition": "c", "factor": unmoved[0],
                      "detail": f"factor {unmoved[0] + 1} lies in the kernel of every hom"}
    leaf = SimplePowerLeaf(gca, fac, [u for u, _ in entries], image_sets, kernel_sets, maps)
    return leaf, None


def build_flow(leaf):
    m = leaf.m
    pi = [leaf.maps[j].target for j in range(m)]
    if sorted(pi) != list(range(m)):
        raise InternalInconsistency("factor map is not a permutation")
    d = leaf.gca.dim
    seen = [False] * m
    cycles = []
    for start in range(m):
        if seen[start]:
            continue
        cyc = []
        j = start
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = pi[j]
        orders = []
        for a in range(len(cyc)):
            # compose the induced automorphisms once around, starting at cyc[a]
            rho = np.arange(leaf.factorization.simple.order, dtype=ID)
            for b in range(len(cyc)):
                fm = leaf.maps[cyc[(a + b) % len(cyc)]]
                rho = fm.ref_images[rho]
            orders.append(permutation_order(rho))
        beta = [0] * d
        for j in cyc:
            u = leaf.offsets[leaf.maps[j].hom]
            beta = [x + y for x, y in zip(beta, u)]
        cycles.append(CycleFlow(cyc, orders, lcm(*orders), tuple(beta)))
    order = lcm(*(c.length for c in cycles))
    alpha = lcm(*(c.alpha for c in cycles))
    beta = [0] * d
    for i, u in enumerate(leaf.offsets):
        beta = [x + leaf.r(i) * y for x, y in zip(beta, u)]
    return FlowData(pi, order, cycles, alpha, tuple(beta))


def minimal_components(leaf, flow):
    """One ``(gca, cycle)`` per cycle of the factor permutation.

    A single cycle yields the input automaton itself; otherwise the rule is
    restricted to the product of the cycle's factors.
    """
    if len(flow.cycles) == 1:
        return [(leaf.gca, flow.cycles[0])]
    group = leaf.gca.group
    out = []
    for cyc in flow.cycles:
        gens = [g for j in cyc.factors for g in leaf.factorization.factors[j].generators]
        sub = Subgroup.generated(group, gens)
        out.append((restrict_rule(leaf.gca, sub), cyc))
    return out


def lemma_exponent(cycle):
    return cycle.length * cycle.alpha


def lemma_shift(cycle, sign=1):
    return tuple(sign * x for x in cycle.alpha_beta)


def verify_lemma(gca, cycle):
    """``power(F, o*alpha)`` is exactly ``shift(alpha*beta)``; raises otherwise."""
    n = lemma_exponent(cycle)
    target = lemma_shift(cycle)
    if not equals_shift(power(gca, n), target):
        raise LemmaVerificationError(
            f"F^{n} is not shift{target} on cycle {[j + 1 for j in cycle.factors]}")
    return {"exponent": n, "shift": list(target), "verified": True}


def is_transitive_nonabelian(component, verify=False):
    """``(verdict, evidence)`` for a simple-power component."""
    leaf, reason = structural_surjectivity(component)
    fac = characteristic_simple_decomposition(getattr(component, "gca", component).group)
    evidence = {"kind": "simple-power", "simple_order": fac.simple.order,
                "m": fac.multiplicity, "structural": reason or {"passed": True}}
    if leaf is None:
        evidence["surjective"] = False
        evidence["transitive"] = False
        return False, evidence
    flow = build_flow(leaf)
    evidence["surjective"] = True
    evidence["image_sets"] = [sorted(j + 1 for j in js) for js in leaf.image_sets]
    evidence["kernel_sets"] = [sorted(j + 1 for j in ks) for ks in leaf.kernel_sets]
    evidence["pi"] = flow.cycle_notation()
    evidence["o"] = flow.order
    evidence["alpha"] = flow.alpha
    evidence["beta"] = list(flow.beta)
    comps = []
    verdict = True
    for sub_gca, cyc in minimal_components(leaf, flow):
        ok = any(cyc.alpha_beta)
        entry = {"cycle": [j + 1 for j in cyc.factors], "return_orders": cyc.return_orders,
                 "alpha": cyc.alpha, "beta": list(cyc.beta), "alpha_beta": list(cyc.alpha_beta),
                 "transitive": ok}
        if verify:
            entry["lemma"] = verify_lemma(sub_gca, cyc)
        comps.append(entry)
        verdict = verdict and ok
    evidence["components"] = comps
    evidence["transitive"] = verdict
    return verdict, evidence
