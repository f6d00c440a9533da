import json
import os
from collections import Counter

import jsonschema
import numpy as np
import pytest

from gcadec import corpus as C
from gcadec.decomposition import (EQUIVALENT_PROPERTIES, all_decompositions, choice_count, decide_transitivity,
                                  decompose_tree, report_equivalences, verbal_decomposition,
                                  verdicts_over_all_choices)
from gcadec.gca import product_gca
from gcadec.groups.verbal import characteristic_simple_decomposition

SCHEMA = os.path.join(os.path.dirname(__file__), "..", "src", "gcadec", "schema", "certificate.schema.json")


def test_cyclic2_single_leaf():
    leaves = verbal_decomposition(C.xor_rule())
    assert [c.classification for c in leaves] == ["elementary-abelian(2, 1)"]


def test_s3_shift_two_leaves():
    leaves = verbal_decomposition(C.shift_rule("S3", (1,)))
    assert [c.classification for c in leaves] == ["elementary-abelian(2, 1)", "elementary-abelian(3, 1)"]
    assert leaves[0].provenance == [("x1^-1 x2^-1 x1 x2", "quotient")]


def test_z4_identity_two_leaves():
    tree, leaves = decompose_tree(C.identity_rule("Z4"))
    assert [c.classification for c in leaves] == ["elementary-abelian(2, 1)"] * 2
    assert tree["verbal"] == {"word": "x1^2", "order": 2}


@pytest.mark.parametrize("name", ["Z2", "Z4", "S3", "A5", "SL25", "D4", "Q8", "A4", "Z6"])
def test_identity_rule_is_not_transitive(name):
    assert decide_transitivity(C.identity_rule(name))[0] is False


@pytest.mark.parametrize("name,expected", [("S3", True), ("Z4", True), ("A5", True), ("SL25", True)])
def test_shift_rules(name, expected):
    assert decide_transitivity(C.shift_rule(name, (1,)))[0] is expected


def test_equivalences():
    assert [n for n, _ in report_equivalences(True)] == list(EQUIVALENT_PROPERTIES)
    assert len(EQUIVALENT_PROPERTIES) == 6
    assert all(v for _, v in report_equivalences(True))
    assert not any(v for _, v in report_equivalences(False))


def test_leaves_are_characteristically_simple():
    rng = np.random.default_rng(4)
    for name in ("S4", "D4", "SL25", "Q8"):
        g = C.group(name)
        rule = C.random_rule(rng, g, C.endomorphism_pool(g))
        for comp in verbal_decomposition(rule):
            fac = characteristic_simple_decomposition(comp.group)
            assert fac is not None
            assert comp.gca.dim == rule.dim and comp.gca.neighbors == rule.neighbors
            assert (comp.kind == "elementary-abelian") == fac.abelian


def test_leaf_orders_multiply_to_group_order():
    for name in ("S4", "SL25", "Z8", "D4"):
        leaves = verbal_decomposition(C.identity_rule(name))
        assert int(np.prod([c.group.order for c in leaves])) == C.group(name).order


@pytest.mark.parametrize("name", ["Z8", "Z12", "Z6", "S4"])
def test_confluence_and_type_stability(name):
    g = C.group(name)
    assert choice_count(C.identity_rule(name)) >= 2
    rng = np.random.default_rng(sum(map(ord, name)))
    pool = C.endomorphism_pool(g)
    for _ in range(5):
        rule = C.random_rule(rng, g, pool)
        verdicts = verdicts_over_all_choices(rule)
        assert verdicts == {decide_transitivity(rule)[0]}
        types = {tuple(sorted(Counter(t for c in dec for t in c.simple_type()).items()))
                 for dec in all_decompositions(rule)}
        assert len(types) == 1


@pytest.mark.parametrize("seed", range(8))
def test_product_consistency(seed):
    rng = np.random.default_rng(seed)
    f1 = C.random_linear_rule(rng, 2, 1 + seed % 2)
    f2 = C.random_simple_power_rule(rng, 1 + seed % 2)
    expected = decide_transitivity(f1)[0] and decide_transitivity(f2)[0]
    assert decide_transitivity(product_gca(f1, f2))[0] == expected


def test_certificate_schema_and_determinism(tmp_path):
    with open(SCHEMA, encoding="utf-8") as fh:
        schema = json.load(fh)
    for rule in (C.shift_rule("S3", (1,)), C.a5_swap_rule(), C.identity_rule("SL25")):
        _, cert = decide_transitivity(rule, verify_lemma=True)
        jsonschema.validate(json.loads(cert.to_json()), schema)
        _, again = decide_transitivity(rule, verify_lemma=True)
        assert cert.to_json(with_timestamp=False) == again.to_json(with_timestamp=False)
    path = tmp_path / "c.json"
    cert.write(path)
    assert json.loads(path.read_text())["transitive"] is False


def test_certificate_verdict_is_and_of_leaves():
    _, cert = decide_transitivity(C.identity_rule("S3"))
    assert cert["transitive"] == all(l["transitive"] for l in cert["leaves"])
    assert cert["surjective"] is True


def test_short_circuit_skips_later_leaves():
    rule = C.identity_rule("S3")
    verdict, cert = decide_transitivity(rule, short_circuit=True)
    assert verdict is False
    assert cert["leaves"][1]["skipped"] and cert["leaves"][1]["transitive"] is None
    full = decide_transitivity(rule)[1]
    assert all("evidence" in l for l in full["leaves"])
