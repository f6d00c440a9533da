"""Transitivity of GCAs over elementary abelian groups via Laurent-polynomial matrices.

In a basis ``b_1..b_n`` of ``(Z/p)^n`` each endomorphism is an ``n x n``
matrix over F_p acting on coordinate columns, and the automaton is the
matrix ``M = sum_i A_i x^{v_i}``.  The automaton is transitive iff
``det M != 0`` and ``gcd(chi(t), t^(p^i - 1) - 1) = 1`` for ``i = 1..n``,
where ``chi`` is the characteristic polynomial of ``M``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import BudgetExceeded, InternalInconsistency
from .groups.core import ID, as_ids, closure
from .groups.verbal import characteristic_simple_decomposition, elementary_abelian_basis
from .laurent import (LaurentPoly, PolyMatrix, char_poly, coprime_with_cyclic,
                      cyclic_resultant, determinant)

CRITERION = ("transitive iff det(M) != 0 and gcd(chi(t), t^(p^i - 1) - 1) = 1 over "
             "F_p(x_1..x_d) for every i = 1..n; the same condition is applied in every dimension d")


@dataclass
class AbelianLeaf:
    p: int
    n: int
    dim: int
    basis: list
    coords: np.ndarray          # coords[g] = coordinate vector of element g
    matrix: PolyMatrix
    gca: object

    def element(self, vec):
        """Group element with the given coordinate vector."""
        vec = np.asarray(vec) % self.p
        idx = int(np.dot(vec, self.p ** np.arange(self.n)))
        return int(self._element_of_index[idx])

    @property
    def _element_of_index(self):
        weights = self.p ** np.arange(self.n)
        out = np.empty(self.p ** self.n, dtype=ID)
        out[self.coords @ weights] = np.arange(self.coords.shape[0])
        return out


def coordinate_table(group, basis, p):
    """``coords[g]`` for every element, given an F_p basis of ``group``."""
    n = len(basis)
    if p ** n != group.order:
        raise InternalInconsistency(f"basis of size {n} cannot span a group of order {group.order}")
    elems = as_ids([group.identity])
    vecs = np.zeros((1, n), dtype=np.int64)
    for i, b in enumerate(basis):
        layers_e, layers_v = [elems], [vecs]
        cur = elems
        for k in range(1, p):
            cur = group.mul_array(cur, np.full(cur.shape, b, dtype=ID))
            layers_e.append(cur)
            v = vecs.copy()
            v[:, i] = k
            layers_v.append(v)
        elems = np.concatenate(layers_e)
        vecs = np.concatenate(layers_v)
    coords = np.full((group.order, n), -1, dtype=np.int64)
    coords[elems] = vecs
    if (coords < 0).any() or np.unique(elems).size != group.order:
        raise InternalInconsistency("chosen elements are not a basis")
    return coords


def hom_matrix(hom, basis, coords):
    """F_p matrix of an endomorphism: column ``j`` holds the coordinates of ``h(b_j)``."""
    return coords[hom.images[as_ids(basis)]].T.copy()


def build_matrix(component, basis=None):
    """``AbelianLeaf`` for an elementary-abelian component (or a bare GCA)."""
    gca = getattr(component, "gca", component)
    group = gca.group
    fac = characteristic_simple_decomposition(group)
    if fac is None or not fac.abelian or not fac.factors:
        raise InternalInconsistency(f"{group.name} is not a nontrivial elementary abelian group")
    p, n = fac.prime, fac.multiplicity
    if p ** n > config.budget(config.ABELIAN_LEAF_BOUND):
        raise BudgetExceeded(f"leaf too large: (Z/{p})^{n}")
    if basis is None:
        basis = elementary_abelian_basis(group)
    basis = [int(b) for b in basis]
    if len(basis) != n or closure(group, basis).size != group.order:
        raise InternalInconsistency("basis does not generate the leaf group")
    coords = coordinate_table(group, basis, p)
    d = gca.dim
    rows = [[LaurentPoly.zero(p, d) for _ in range(n)] for _ in range(n)]
    for u, h in gca.canonical.entries:
        a = hom_matrix(h, basis, coords)
        for i in range(n):
            for j in range(n):
                if a[i, j]:
                    rows[i][j] = rows[i][j] + LaurentPoly.monomial(p, d, u, int(a[i, j]))
    return AbelianLeaf(p, n, d, basis, coords, PolyMatrix(rows), gca)


def is_surjective_abelian(leaf):
    """``(det(M) != 0, det)``."""
    det = determinant(leaf.matrix)
    return not det.is_zero(), det


def is_transitive_abelian(leaf, short_circuit=False, cross_check=False):
    """``(verdict, evidence)`` for an ``AbelianLeaf``.

    With ``cross_check`` every gcd verdict is compared against the resultant
    route and a disagreement raises ``InternalInconsistency``.
    """
    surjective, det = is_surjective_abelian(leaf)
    chi = char_poly(leaf.matrix)
    evidence = {
        "kind": "elementary-abelian",
        "p": leaf.p,
        "n": leaf.n,
        "basis": [int(b) for b in leaf.basis],
        "matrix": leaf.matrix.to_text(),
        "det": str(det),
        "surjective": surjective,
        "char_poly": str(chi),
        "criterion": CRITERION,
        "checks": [],
    }
    verdict = surjective
    for i in range(1, leaf.n + 1):
        if short_circuit and not verdict:
            break
        q = leaf.p ** i - 1
        ok, witness = coprime_with_cyclic(chi, q)
        if cross_check:
            res_ok = not cyclic_resultant(chi, q).is_zero()
            if res_ok != ok:
                raise InternalInconsistency(f"gcd and resultant disagree for q = {q}")
        evidence["checks"].append({"i": i, "q": q, "coprime": ok,
                                   "witness": None if witness is None else str(witness)})
        verdict = verdict and ok
    evidence["transitive"] = verdict
    return verdict, evidence
