"""Verbal decomposition of a GCA into leaves over direct powers of simple groups,
and the top-level transitivity decision with its certificate."""

from __future__ import annotations

import datetime as _dt
import json
from dataclasses import dataclass, field

from . import __version__
from .abelian import build_matrix, is_transitive_abelian
from .gca import quotient_rule, restrict_rule
from .groups.verbal import (candidate_verbal_subgroups, characteristic_simple_decomposition,
                            find_nontrivial_proper_verbal)
from .nonabelian import is_transitive_nonabelian

CERTIFICATE_SCHEMA = "gcadec-certificate/1"

EQUIVALENT_PROPERTIES = (
    "total transitivity",
    "topological mixing",
    "topological weak mixing",
    "ergodic weak mixing",
    "ergodic strong mixing",
    "ergodicity",
)


@dataclass
class Component:
    group: object
    gca: object
    factorization: object
    provenance: list = field(default_factory=list)   # [(word, "quotient" | "subgroup"), ...]

    @property
    def kind(self):
        f = self.factorization
        if not f.factors:
            return "trivial"
        return "elementary-abelian" if f.abelian else "simple-power"

    @property
    def classification(self):
        f = self.factorization
        if not f.factors:
            return "trivial"
        if f.abelian:
            return f"elementary-abelian({f.prime}, {f.multiplicity})"
        return f"simple-power(order {f.simple.order}, {f.multiplicity})"

    def simple_type(self):
        """Hashable isomorphism-type tag of the simple factor, repeated ``m`` times."""
        f = self.factorization
        if not f.factors:
            return ()
        tag = ("Z", f.prime) if f.abelian else ("S", f.simple.order)
        return (tag,) * f.multiplicity


def default_chooser(gca, path):
    return find_nontrivial_proper_verbal(gca.group)


def _split(gca, found):
    h, word = found
    return h, word, quotient_rule(gca, h), restrict_rule(gca, h)


def decompose_tree(gca, chooser=None, path=()):
    """``(tree, leaves)``: the nested decomposition record and the leaf components in order."""
    chooser = chooser or default_chooser
    leaves = []

    def rec(g, path):
        fac = characteristic_simple_decomposition(g.group)
        if fac is not None:
            comp = Component(g.group, g, fac, list(path))
            leaves.append(comp)
            return {"group": g.group.name, "order": g.group.order,
                    "leaf": len(leaves) - 1, "classification": comp.classification}
        found = chooser(g, path)
        h, word, q, s = _split(g, found)
        return {"group": g.group.name, "order": g.group.order,
                "verbal": {"word": str(word), "order": h.order},
                "quotient": rec(q, path + ((str(word), "quotient"),)),
                "subgroup": rec(s, path + ((str(word), "subgroup"),))}

    tree = rec(gca, tuple(path))
    return tree, leaves


def verbal_decomposition(gca, chooser=None):
    """Leaf components of the decomposition; ``chooser(gca, path)`` picks ``(H, word)``."""
    return decompose_tree(gca, chooser)[1]


def all_decompositions(gca):
    """Every leaf list obtainable by some sequence of verbal-subgroup choices."""
    fac = characteristic_simple_decomposition(gca.group)
    if fac is not None:
        yield [Component(gca.group, gca, fac)]
        return
    for found in candidate_verbal_subgroups(gca.group):
        _, _, q, s = _split(gca, found)
        for left in all_decompositions(q):
            for right in all_decompositions(s):
                yield left + right


def choice_count(gca):
    """Number of admissible verbal subgroups at the root."""
    if characteristic_simple_decomposition(gca.group) is not None:
        return 0
    return len(candidate_verbal_subgroups(gca.group))


def decide_leaf(comp, verify_lemma=False, short_circuit=False):
    if comp.kind == "trivial":
        return True, {"kind": "trivial", "surjective": True, "transitive": True}
    if comp.kind == "elementary-abelian":
        return is_transitive_abelian(build_matrix(comp), short_circuit=short_circuit)
    return is_transitive_nonabelian(comp, verify=verify_lemma)


def verdicts_over_all_choices(gca, verify_lemma=False):
    """Set of final verdicts over every decomposition choice sequence."""
    fac = characteristic_simple_decomposition(gca.group)
    if fac is not None:
        return {decide_leaf(Component(gca.group, gca, fac), verify_lemma)[0]}
    out = set()
    for found in candidate_verbal_subgroups(gca.group):
        _, _, q, s = _split(gca, found)
        for a in verdicts_over_all_choices(q, verify_lemma):
            for b in verdicts_over_all_choices(s, verify_lemma):
                out.add(a and b)
    return out


def report_equivalences(verdict):
    return [(name, bool(verdict)) for name in EQUIVALENT_PROPERTIES]


class Certificate(dict):
    """JSON-ready decision record."""

    def to_json(self, with_timestamp=True):
        data = dict(self)
        if not with_timestamp:
            data.pop("timestamp", None)
        return json.dumps(data, indent=2, sort_keys=True)

    def write(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")


def decide_transitivity(gca, verify_lemma=False, short_circuit=False, chooser=None):
    """``(verdict, Certificate)``: transitive iff every leaf is."""
    tree, leaves = decompose_tree(gca, chooser)
    verdict = True
    records = []
    surjective = True
    for idx, comp in enumerate(leaves):
        rec = {"index": idx, "provenance": [list(p) for p in comp.provenance],
               "group_order": comp.group.order, "classification": comp.classification}
        if short_circuit and not verdict:
            rec["skipped"] = True
            rec["transitive"] = None
            if surjective:
                surjective = None
        else:
            ok, evidence = decide_leaf(comp, verify_lemma, short_circuit)
            rec["evidence"] = evidence
            rec["transitive"] = ok
            verdict = verdict and ok
            if surjective is not None:
                surjective = surjective and evidence.get("surjective", False)
        records.append(rec)
    cert = Certificate(
        schema=CERTIFICATE_SCHEMA,
        version=__version__,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        automaton={"group": gca.group.name, "order": gca.group.order, "dim": gca.dim,
                   "neighbors": [list(u) for u in gca.neighbors]},
        tree=tree,
        leaves=records,
        surjective=surjective,
        transitive=verdict,
        equivalent_properties=[{"property": n, "value": v} for n, v in report_equivalences(verdict)],
        options={"verify_lemma": verify_lemma, "short_circuit": short_circuit},
    )
    return verdict, cert
