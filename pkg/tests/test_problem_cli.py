import glob
import io
import json
import os

import pytest
from hypothesis import given, strategies as st

from gcadec import cli
from gcadec.problem import ProblemError, load, parse

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PROBLEMS = sorted(glob.glob(os.path.join(ROOT, "problems", "*.gca")))
XOR = "dimension: 1\ngroup: cyclic 2\nneighbors: [(0), (1)]\nhoms: [identity, identity]\n"

EXPECTED = {
    "xor.gca": True, "s3_shift.gca": True, "z4_identity.gca": False, "a5_conjugation.gca": True,
    "a5_swap.gca": False, "sl25_conj.gca": True, "z3sq_planar.gca": True, "z5_power.gca": True,
}


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_minimal_xor_parses():
    prob = parse(XOR)
    assert prob.dimension == 1 and prob.neighbors == [(0,), (1,)]
    assert prob.build().k == 2


def test_offset_arity_mismatch():
    with pytest.raises(ProblemError, match="offset arity mismatch") as exc:
        parse(XOR.replace("[(0), (1)]", "[(0), (1, 0)]")).build()
    assert exc.value.line == 3 and exc.value.col is not None


def test_conj_outside_group():
    with pytest.raises(ProblemError, match="homomorphism 1"):
        parse(XOR.replace("[identity, identity]", "[conj 7, identity]")).build()


@pytest.mark.parametrize("text,fragment", [
    (XOR.replace("cyclic 2", "cyclc 2"), "group"),
    (XOR.replace("homs:", "hom:"), "key"),
    (XOR + "dimension: 1\n", "dimension"),
    (XOR.replace("[identity, identity]", "[identity]"), "arity mismatch"),
    (XOR.replace("(1)]", "(1)"), ""),
    ("dimension: 1\ngroup: S3\nneighbors: [0]\nhoms: [power 2]\n", "homomorphism 1"),
    ("dimension: 1\ngroup: table [[0, 1], [1, 1]]\nneighbors: [0]\nhoms: [identity]\n", "Latin"),
    ("dimension: 1\ngroup: table [[1, 0], [0, 1]]\nneighbors: [0]\nhoms: [identity]\n", "row 0"),
    ("dimension: 1\ngroup: S3\nneighbors: [0, 1]\nhoms: [identity, identity]\n", "commute"),
])
def test_diagnostics(text, fragment):
    with pytest.raises(ProblemError) as exc:
        parse(text).build()
    assert fragment.lower() in str(exc.value).lower()


@pytest.mark.parametrize("path", PROBLEMS, ids=os.path.basename)
def test_example_files_round_trip(path):
    prob = load(path)
    again = parse(prob.serialize())
    assert again == prob
    assert parse(again.serialize()).serialize() == prob.serialize()
    prob.build()


@pytest.mark.parametrize("path", PROBLEMS, ids=os.path.basename)
def test_example_verdicts(path):
    code, text = run("decide", path)
    assert code == 0
    name = os.path.basename(path)
    if name in EXPECTED:
        assert f"transitive: {'true' if EXPECTED[name] else 'false'}" in text


group_specs = st.sampled_from(["cyclic 2", "cyclic 5", "S3", "A5", "product [cyclic 2, cyclic 3]",
                               "dihedral 4", "table [[0, 1, 2], [1, 2, 0], [2, 0, 1]]"])


@given(st.integers(1, 3), group_specs, st.data())
def test_round_trip_random(dim, group, data):
    k = data.draw(st.integers(1, 3))
    offs = [data.draw(st.tuples(*[st.integers(-3, 3)] * dim)) for _ in range(k)]
    homs = [data.draw(st.sampled_from(["identity", "constant_e", "power 1", "conj 0", "power -1"]))
            for _ in range(k)]
    text = (f"dimension: {dim}\ngroup: {group}\n"
            f"neighbors: [{', '.join('(' + ', '.join(map(str, o)) + ')' for o in offs)}]\n"
            f"homs: [{', '.join(homs)}]\n")
    prob = parse(text)
    assert parse(prob.serialize()) == prob


def test_cli_validate_and_decompose():
    path = os.path.join(ROOT, "problems", "s3_shift.gca")
    code, text = run("validate", path)
    assert code == 0 and "valid:" in text
    code, text = run("decompose", path)
    assert code == 0 and "leaves: 2" in text and "word x1^-1 x2^-1 x1 x2" in text


def test_cli_decide_output_and_certificate(tmp_path):
    cert_path = tmp_path / "cert.json"
    code, text = run("decide", os.path.join(ROOT, "problems", "xor.gca"), "--certificate", str(cert_path),
                     "--verify-lemma", "--no-short-circuit")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "transitive: true"
    assert "  ergodicity: true" in lines
    cert = json.loads(cert_path.read_text())
    assert cert["transitive"] is True and cert["options"]["short_circuit"] is False


def test_cli_certificates_deterministic(tmp_path):
    path = os.path.join(ROOT, "problems", "sl25_conj.gca")
    docs = []
    for i in range(2):
        target = tmp_path / f"c{i}.json"
        assert run("decide", path, "--certificate", str(target))[0] == 0
        doc = json.loads(target.read_text())
        doc.pop("timestamp")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_cli_input_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.gca"
    bad.write_text(XOR.replace("[(0), (1)]", "[(0), (1, 0)]"))
    code, _ = run("decide", str(bad))
    assert code == 2
    assert "offset arity mismatch" in capsys.readouterr().err
    assert run("validate", str(tmp_path / "missing.gca"))[0] == 2


def test_cli_internal_inconsistency_exit_code(monkeypatch):
    from gcadec.errors import InternalInconsistency

    def boom(*a, **k):
        raise InternalInconsistency("forced")
    monkeypatch.setattr(cli, "decide_transitivity", boom)
    assert run("decide", os.path.join(ROOT, "problems", "xor.gca"))[0] == 3


def test_cli_budget_exit_code(monkeypatch):
    from gcadec.errors import BudgetExceeded

    def boom(*a, **k):
        raise BudgetExceeded("forced")
    monkeypatch.setattr(cli, "decide_transitivity", boom)
    assert run("decide", os.path.join(ROOT, "problems", "xor.gca"))[0] == 2


def test_cli_oracles():
    xor = os.path.join(ROOT, "problems", "xor.gca")
    code, text = run("oracle", "reach", xor, "--positions", "[(0), (1)]", "--source", "[0, 0]",
                     "--target", "[1, 1]", "--max-steps", "4")
    assert code == 0 and "reach: n = 2" in text
    code, text = run("oracle", "kernel", xor, "--box", "4")
    assert code == 0 and "no finite witness" in text
    code, text = run("oracle", "verbal", os.path.join(ROOT, "problems", "perm_s3.gca"), "--max-len", "4")
    assert code == 0 and "orders [1, 3, 6]" in text
    code, text = run("oracle", "lemma", os.path.join(ROOT, "problems", "a5_conjugation.gca"), "--samples", "10")
    assert code == 0 and "F^5 = shift(5,)" in text
    code, _ = run("oracle", "lemma", os.path.join(ROOT, "problems", "z4_identity.gca"))
    assert code == 2
