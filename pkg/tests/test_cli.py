import json
import subprocess
import sys

import pytest

from k3lat import cli, criteria, verify
from k3lat.lattice import make_lattice


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out), out


def test_bcns_13_json(capsys):
    code, doc, _ = run_json(capsys, "bcns", "-t", "13")
    assert code == 0 and doc["schema_version"] == 1 and doc["command"] == "bcns"
    (rec,) = doc["results"]
    assert rec["witness"]["admissible"] is True
    assert rec["witness"]["D"] == ["5", "-18"]
    assert rec["certificate"]["payload"]["modulus"] == "13"


def test_bcns_13_human(capsys):
    code, out, _ = run(capsys, "bcns", "-t", "13")
    assert code == 0
    assert "basis of <26> ⊕ <-2>: h, δ" in out
    assert "D = 5·h − 18·δ" in out


def test_nodal_11(capsys):
    code, doc, _ = run_json(capsys, "nodal", "-k", "11")
    assert code == 0
    (rec,) = doc["results"]
    assert rec["status"] == "pass"
    assert rec["detail"] == "transcendental_obstruction: impossible"


def test_square_parameter_exit_3(capsys):
    code, out, err = run(capsys, "pell", "-D", "4", "-N", "-1")
    assert code == 3 and "SquareParameter" in err


def test_unknown_verb_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_no_verb_exit_2(capsys):
    assert cli.main([]) == 2


def test_failed_claim_exit_1(capsys, tmp_path):
    bad = tmp_path / "cert.json"
    bad.write_text(json.dumps({"kind": "ModularObstruction", "payload": {"modulus": "3", "equation": {"type": "pell", "D": "2", "N": "1"}}}))
    code, out, _ = run(capsys, "check-cert", f"@{bad}")
    assert code == 1 and "0/1" in out


def test_golden_transcripts(capsys):
    golden = [
        (["pell", "-D", "13", "-N", "-1"], 0, "minimal solution (18, 5)"),
        (["pell", "-D", "4", "-N", "-1"], 3, None),
        (["genpell", "-D", "52", "-N", "5"], 0, "ModularObstruction modulo 13"),
        (["genpell", "-D", "20", "-N", "5"], 0, "(5, 1)"),
        (["represent", "--gram", "[[4,6],[6,4]]", "-N", "-2"], 0, "ModularObstruction modulo 5"),
        (["represent", "--gram", "[[4,6],[6,4]]", "-N", "4"], 0, "Witness e1"),
        (["represent", "--gram", "[[4,6],[6,9]]", "-N", "4"], 3, None),
        (["represent", "--gram", "[[2,0,0],[0,2,0],[0,0,2]]", "-N", "4"], 3, None),
        (["reflect", "--gram", "[[4,0],[0,-2]]", "--vector", "1,-1"], 0, "invariant lattice: e1 − e2"),
        (["reflect", "--gram", "[[4,0],[0,-2]]", "--vector", "1,0"], 3, None),
        (["double-beauville", "--alpha", "1"], 0, "4·h1 − h2 − 3·δ"),
        (["double-beauville", "--alpha", "0"], 3, None),
        (["nodal", "-k", "3"], 0, "consistent"),
        (["nodal", "-k", "20"], 3, None),
        (["one-node"], 0, "contracted: Empty via ExactContradiction"),
        (["disc-group", "--gram", "[[8,0,0],[0,-2,0],[0,0,-2]]"], 0, "Z/2 ⊕ Z/2 ⊕ Z/8"),
        (["bcns", "-t", "1"], 3, None),
    ]
    for argv, want_code, needle in golden:
        code, out, err = run(capsys, *argv)
        assert code == want_code, argv
        if needle:
            assert needle in out, (argv, out)


def test_reflect_and_compose_round_trip(capsys, tmp_path):
    code, doc, _ = run_json(capsys, "reflect", "--gram", "[[4,6,0],[6,4,0],[0,0,-2]]", "--vector", "1,0,-1")
    iso1 = doc["results"][0]["witness"]["isometry"]
    code, doc, _ = run_json(capsys, "reflect", "--gram", "[[4,6,0],[6,4,0],[0,0,-2]]", "--vector", "0,1,-1")
    iso2 = doc["results"][0]["witness"]["isometry"]
    f1, f2 = tmp_path / "s1.json", tmp_path / "s2.json"
    f1.write_text(json.dumps(iso1))
    f2.write_text(json.dumps(iso2))
    code, doc, _ = run_json(capsys, "compose", f"@{f1}", f"@{f2}")
    s1s2 = tmp_path / "s12.json"
    s1s2.write_text(json.dumps(doc["results"][0]["witness"]["isometry"]))
    code, doc, _ = run_json(capsys, "compose", f"@{s1s2}", f"@{f1}")
    kappa = doc["results"][0]["witness"]["isometry"]["matrix"]
    expected = criteria.double_beauville(1).kappa.matrix
    assert [[int(x) for x in row] for row in kappa] == [list(r) for r in expected]


def test_compose_rejects_mismatched_ambient(capsys):
    a = json.dumps({"ambient": {"gram": [[0, 1], [1, 0]]}, "matrix": [[1, 0], [0, 1]]})
    b = json.dumps({"ambient": {"gram": [[2, 0], [0, -2]]}, "matrix": [[1, 0], [0, 1]]})
    code, _, err = run(capsys, "compose", a, b)
    assert code == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["bcns", "-t", "13"],
        ["bcns-scan", "2", "200", "--jobs", "1"],
        ["double-beauville", "--alpha", "3"],
        ["one-node"],
        ["genpell", "-D", "8", "-N", "5"],
    ],
)
def test_json_round_trip_is_canonical(capsys, argv):
    _, doc, raw = run_json(capsys, *argv)
    again = cli.render_json(json.loads(raw))
    assert again == raw.rstrip("\n")
    for key in ("schema_version", "command", "inputs", "results", "timing_ms"):
        assert key in doc
    for rec in doc["results"]:
        assert rec["status"] in ("pass", "fail", "inconclusive")
        assert isinstance(rec["claim_id"], str)


def test_bcns_scan_order_independent_of_jobs(capsys):
    _, one, _ = run_json(capsys, "bcns-scan", "2", "300", "--jobs", "1")
    _, two, _ = run_json(capsys, "bcns-scan", "2", "300", "--jobs", "3")
    assert one["results"] == two["results"]


def test_integer_parsing_arbitrary_precision(capsys):
    big = str(10**40 + 1)
    code, doc, _ = run_json(capsys, "genpell", "-D", big, "-N", "3")
    assert code == 0 and doc["inputs"]["D"] == big


def test_verify_paper_subset_and_closure(capsys, tmp_path):
    code, doc, raw = run_json(capsys, "verify-paper", "--only", "2,5,7,8")
    assert code == 0
    certs = [r["certificate"] for r in doc["results"] if "certificate" in r]
    assert certs
    report = tmp_path / "report.json"
    report.write_text(raw)
    code, out, _ = run(capsys, "check-cert", f"@{report}")
    assert code == 0 and f"{len(certs)}/{len(certs)}" in out


def test_fault_injection_names_the_claim(capsys, monkeypatch):
    real = criteria.l_alpha

    def typo(alpha):
        lat = real(alpha)
        if alpha != 7:
            return lat
        b = lat.gram[0][1] + 1
        return make_lattice([[4, b], [b, 4]], lat.label)

    monkeypatch.setattr(criteria, "l_alpha", typo)
    code, doc, _ = run_json(capsys, "verify-paper", "--only", "4")
    assert code == 1
    failed = [r for r in doc["results"] if r["status"] == "fail"]
    assert [r["claim_id"] for r in failed] == ["c4.double_beauville[alpha=7]"]
    assert "alpha=7" in failed[0]["detail"]


def test_fault_injection_fixture_typo(capsys, monkeypatch):
    real = verify.load_fixture

    def typo(name):
        lat = real(name)
        g = [list(r) for r in lat.gram]
        g[22][22] = -4
        return make_lattice(g, lat.label)

    monkeypatch.setattr(verify, "load_fixture", typo)
    code, out, _ = run(capsys, "verify-paper", "--only", "1")
    assert code == 1
    assert "fail: c1.reflection_law.k3_square" in out


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k3lat.cli", "nodal", "-k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "consistent" in proc.stdout
