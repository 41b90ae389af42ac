import json

import pytest

from nilcohom.cli import main

LEAF_DOC = """{
  "dimension": 2,
  "numbers": {"a": %s},
  "generators": [["1", "0"], ["0", "1"], ["a", "i"]]
}"""


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_valid(capsys, tmp_path):
    code, out, err = run(capsys, "check", "(0,0,0,12,13,23)")
    assert code == 0
    assert "class 2" in out
    assert "jacobi: ok" in out


def test_check_abelian(capsys):
    code, out, err = run(capsys, "check", "(0,0,0,0,0,0)")
    assert code == 0
    assert "class 1" in out


def test_check_parse_error_exit_2(capsys):
    code, out, err = run(capsys, "check", "(0,0,14)")
    assert code == 2
    assert "out of range" in err


def test_check_jacobi_failure_exit_3(capsys):
    code, out, err = run(capsys, "check", "(0,0,12,34)")
    assert code == 3
    assert "(1, 2, 4)" in err


def test_cohomology_de_rham(capsys):
    code, out, err = run(capsys, "cohomology", "h7", "--de-rham")
    assert code == 0
    assert "betti: [1, 3, 8, 12, 8, 3, 1]" in out


def test_cohomology_hodge_table(capsys):
    code, out, err = run(capsys, "cohomology", "abelian6", "--J", "std",
                         "--hodge-table")
    assert code == 0
    assert "1   3   3   1" in out


def test_cohomology_non_integrable_exit_4(capsys):
    code, out, err = run(capsys, "cohomology", "(0,0,0,12)",
                         "--J", "pairs:1-3,2-4", "--hodge-table")
    assert code == 4
    assert "Nijenhuis" in err
    assert "(1, 2)" in err


def test_json_output_is_byte_stable(capsys):
    code1, out1, _ = run(capsys, "cohomology", "h7", "--J", "std",
                         "--hodge-table", "--json")
    code2, out2, _ = run(capsys, "cohomology", "h7", "--J", "std",
                         "--hodge-table", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["tool"] == "nilcohom"
    assert doc["results"]["hodge_table"][0] == [1, 2, 2, 1]


@pytest.mark.parametrize("number,expect", [
    ('{"type": "sqrt", "d": 2}', "theta-certified"),
    ('{"type": "rational", "value": "1/2"}', "not-toroidal"),
    ('{"type": "convergents", "family": "power-tower", "base": 2, '
     '"start": 4}', "wild-evidence"),
])
def test_toroidal_command_verdicts(capsys, tmp_path, number, expect):
    f = tmp_path / "period.json"
    f.write_text(LEAF_DOC % number)
    code, out, err = run(capsys, "toroidal", str(f), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["verdict"]["kind"] == expect


def test_toroidal_malformed_file_exit_2(capsys, tmp_path):
    f = tmp_path / "broken.json"
    f.write_text("{not json")
    code, out, err = run(capsys, "toroidal", str(f))
    assert code == 2


def test_toroidal_witness_reported(capsys, tmp_path):
    f = tmp_path / "period.json"
    f.write_text(LEAF_DOC % '{"type": "rational", "value": "1/2"}')
    code, out, err = run(capsys, "toroidal", str(f))
    assert code == 0
    assert "NotToroidal(witness=(2,))" in out
    assert "(C*)^1" in out


VERIFY_ARGS = ["verify-theorem", "h7", "--J", "std",
               "--lattice", "builtin:example-a",
               "--ideal", "e3,e4,e5,e6", "--f0", "e5,e6",
               "--g0", "Xbar1,Xbar3"]


def test_verify_theorem_formal(capsys):
    code, out, err = run(capsys, *VERIFY_ARGS)
    assert code == 0
    assert "verdict: theorem applies (foliation case" in out


def test_verify_theorem_rational_param(capsys):
    code, out, err = run(capsys, *VERIFY_ARGS, "--param", "a=1/2")
    assert code == 0
    assert "fibration/torus-bundle" in out


def test_verify_theorem_sqrt2(capsys):
    code, out, err = run(capsys, *VERIFY_ARGS, "--param", "a=sqrt:2")
    assert code == 0
    assert "theorem applies" in out
    assert "theta (certified)" in out


def test_verify_theorem_torus(capsys, tmp_path):
    lattice = tmp_path / "lat.json"
    lattice.write_text(json.dumps({
        "numbers": {},
        "generators": [["1", "0", "0", "0", "0", "0"],
                       ["0", "1", "0", "0", "0", "0"],
                       ["0", "0", "1", "0", "0", "0"],
                       ["0", "0", "0", "1", "0", "0"],
                       ["0", "0", "0", "0", "1", "0"],
                       ["0", "0", "0", "0", "0", "1"]],
    }))
    code, out, err = run(capsys, "verify-theorem", "(0,0,0,0,0,0)",
                         "--J", "std", "--lattice", str(lattice),
                         "--ideal", "e1,e2,e3,e4,e5,e6",
                         "--f0", "e1,e2,e3,e4,e5,e6",
                         "--g0", "Xbar1,Xbar2,Xbar3")
    assert code == 0
    assert "torus (conjecture known)" in out


def test_catalog_run_all(capsys):
    code, out, err = run(capsys, "catalog", "run")
    assert code == 0
    assert "all checks passed" in out
    for name in ("abelian6", "h7", "heis3r3", "kodaira-thurston"):
        assert f"{name}: pass" in out


def test_catalog_filter(capsys):
    code, out, err = run(capsys, "catalog", "run", "--filter", "h7")
    assert code == 0
    assert "h7: pass" in out
    assert "abelian6" not in out


def test_catalog_malformed_file_exit_2(capsys, tmp_path):
    f = tmp_path / "cat.json"
    f.write_text('{"entries": [\n  {"name": "x" "equations": "(0)"}\n]}')
    code, out, err = run(capsys, "catalog", "run", "--file", str(f))
    assert code == 2
    assert "line 2" in err


def test_catalog_user_file(capsys, tmp_path):
    f = tmp_path / "cat.json"
    f.write_text(json.dumps({"entries": [{
        "name": "kt4", "equations": "(0,0,0,12)",
        "complex_structures": {"std": "std"}}]}))
    code, out, err = run(capsys, "catalog", "run", "--file", str(f))
    assert code == 0
    assert "kt4: pass" in out


def test_scan_bound_env_default(monkeypatch):
    from nilcohom.cli import build_parser, default_scan_bound

    monkeypatch.setenv("NILCOHOM_SCAN_BOUND", "77")
    assert default_scan_bound() == 77
    args = build_parser().parse_args(["toroidal", "x.json"])
    assert args.scan == 77
    monkeypatch.setenv("NILCOHOM_SCAN_BOUND", "junk")
    assert default_scan_bound() == 1000


def test_catalog_deterministic_json(capsys):
    code1, out1, _ = run(capsys, "catalog", "run", "--filter", "kodaira",
                         "--json")
    code2, out2, _ = run(capsys, "catalog", "run", "--filter", "kodaira",
                         "--json")
    assert out1 == out2
