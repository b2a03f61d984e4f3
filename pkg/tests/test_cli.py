"""End-to-end command-line behavior: reports, exit codes, determinism."""

import json

import numpy as np
import pytest

from qelie.catalog import make_heisenberg, make_n6a
from qelie.cli import main
from qelie.documents import algebra_to_document, dump_document


def write_entry(tmp_path, entry, name=None) -> str:
    doc = algebra_to_document(name or entry.name, entry.algebra)
    p = tmp_path / f"{name or entry.name}.json"
    p.write_text(dump_document(doc), encoding="utf-8")
    return str(p)


@pytest.fixture
def h3_path(tmp_path):
    return write_entry(tmp_path, make_heisenberg(1, 1), "h3")


@pytest.fixture
def n6a_path(tmp_path):
    return write_entry(tmp_path, make_n6a(1, 2), "n6a")


class TestCheck:
    def test_h3_happy_path(self, h3_path, capsys):
        assert main(["check", h3_path]) == 0
        out = capsys.readouterr().out
        assert "jacobi residual: 0 (pass)" in out
        assert "nilpotent(step 2)" in out
        assert "center dimension: 1" in out

    def test_json_fields(self, h3_path, capsys):
        assert main(["check", h3_path, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["command"] == "check"
        assert data["jacobi_pass"] and data["unimodular"]
        assert data["lower_central"] == "nilpotent(step 2)"
        assert data["center_dim"] == 1
        assert data["nilradical_dim"] == 3

    def test_malformed_file_exit_2(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text("{not json", encoding="utf-8")
        assert main(["check", str(p)]) == 2

    def test_missing_file_exit_2(self):
        assert main(["check", "/nonexistent/algebra.json"]) == 2

    def test_broken_jacobi_exit_1(self, tmp_path):
        p = tmp_path / "broken.json"
        p.write_text(json.dumps({
            "name": "broken", "dim": 3, "basis": ["a", "b", "c"],
            "brackets": [["a", "b", "c", "1"], ["a", "c", "a", "1"]],
        }), encoding="utf-8")
        assert main(["check", str(p)]) == 1

    def test_validation_error_exit_2(self, tmp_path):
        p = tmp_path / "dupe.json"
        p.write_text(json.dumps({
            "name": "", "dim": 2, "basis": ["x", "x"], "brackets": []}),
            encoding="utf-8")
        assert main(["check", str(p)]) == 2


class TestRicci:
    def test_oracle_values(self, h3_path, capsys):
        assert main(["ricci", h3_path, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["eigenvalues"] == [-0.5, -0.5, 0.5]
        assert data["scalar"] == -0.5
        assert not data["flat"]

    def test_nilpotent_formula_agrees(self, n6a_path, capsys):
        assert main(["ricci", n6a_path, "--formula", "nilpotent",
                     "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["oracle_agrees"]
        assert data["formula"] == "nilpotent-formula"

    def test_wrong_formula_domain_error(self, tmp_path, capsys):
        from qelie.catalog import make_heisenberg_extension
        p = write_entry(tmp_path, make_heisenberg_extension(1, 1, [[1]]),
                        "ext")
        assert main(["ricci", p, "--formula", "nilpotent"]) == 1

    def test_standard_split_via_cli(self, tmp_path, capsys):
        from qelie.catalog import make_heisenberg_extension
        p = write_entry(tmp_path, make_heisenberg_extension(2, 1, [[1, 1]]),
                        "ext5")
        assert main(["ricci", p, "--formula", "standard", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["oracle_agrees"]


class TestQE:
    def test_h3_solutions(self, h3_path, capsys):
        assert main(["qe", h3_path, "--m", "2", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert len(data["solutions"]) == 2
        sol = data["solutions"][0]
        assert sol["lambda"] == -0.5
        assert abs(abs(sol["X"][2]) - np.sqrt(2)) < 1e-12
        assert data["reports"]["two_eigenvalue_structure"]["passed"]

    def test_no_solution_exit_1(self, tmp_path):
        from qelie.catalog import make_almost_abelian
        p = write_entry(
            tmp_path,
            make_almost_abelian([[1, 0, 0], [0, -1, 0], [0, 0, 0]]), "aa")
        assert main(["qe", p, "--m", "1"]) == 1

    def test_flat_exit_0(self, tmp_path):
        from qelie.catalog import make_almost_abelian
        p = write_entry(tmp_path, make_almost_abelian([[0, 0], [0, 0]]), "ab")
        assert main(["qe", p, "--m", "1"]) == 0

    def test_solvable_conditions_reported(self, tmp_path, capsys):
        from qelie.catalog import make_heisenberg_extension
        p = write_entry(tmp_path, make_heisenberg_extension(1, 1, [[1]]),
                        "ext3")
        assert main(["qe", p, "--m", "1", "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["reports"]["solvable_conditions"]["passed"]

    def test_zero_m_rejected(self, h3_path):
        assert main(["qe", h3_path, "--m", "0"]) == 2

    def test_non_normal_action_noted(self, tmp_path, capsys):
        # unimodular solvable, non-flat, but ad_a is not a normal operator:
        # the structure-conditions verifier reports "not applicable"
        p = tmp_path / "nonnormal.json"
        p.write_text(json.dumps({
            "name": "nonnormal", "dim": 4, "basis": ["a", "e1", "e2", "e3"],
            "brackets": [["a", "e1", "e1", "1"], ["a", "e2", "e1", "1"],
                         ["a", "e2", "e2", "-1"]],
        }), encoding="utf-8")
        code = main(["qe", str(p), "--m", "1", "--json"])
        data = json.loads(capsys.readouterr().out)
        assert "error" in data["reports"]["solvable_conditions"]
        assert code in (0, 1)


class TestCatalog:
    def test_tables_emission(self, tmp_path, capsys):
        out = tmp_path / "rows"
        assert main(["catalog", "--family", "tables", "--emit",
                     str(out)]) == 0
        names = sorted(p.name for p in out.glob("*.json"))
        assert names == ["h3.json", "h3_ext.json", "h5.json", "h5_ext.json",
                         "n6a.json"]

    def test_single_family_round_trip(self, tmp_path, capsys):
        out = tmp_path / "h5.json"
        assert main(["catalog", "--family", "heisenberg", "--params",
                     "s=2,c=1", "--emit", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        entry = make_heisenberg(2, 1)
        expected = dump_document(algebra_to_document("heisenberg",
                                                     entry.algebra))
        assert text == expected

    def test_stdout_document(self, capsys):
        assert main(["catalog", "--family", "heisenberg",
                     "--params", "s=1,c=1"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["basis"] == ["x1", "y1", "z"]
        assert doc["brackets"] == [["x1", "y1", "z", "1"]]

    def test_extension_params(self, tmp_path):
        out = tmp_path / "bi.json"
        assert main(["catalog", "--family", "heisenberg_extension",
                     "--params", "s=2,c=1,t=1:0|0:1", "--emit",
                     str(out)]) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["dim"] == 7

    def test_almost_abelian_params(self, tmp_path):
        out = tmp_path / "aa.json"
        assert main(["catalog", "--family", "almost_abelian",
                     "--params", "A=1:0|0:-1", "--emit", str(out)]) == 0
        doc = json.loads(out.read_text(encoding="utf-8"))
        assert doc["dim"] == 3
        assert ["e0", "e1", "e1", "1"] in doc["brackets"]

    def test_unknown_family_exit_2(self):
        assert main(["catalog", "--family", "nope"]) == 2

    def test_bad_params_exit_1(self):
        assert main(["catalog", "--family", "heisenberg",
                     "--params", "s=0,c=1"]) == 1


class TestLattice:
    def test_h3_rational(self, h3_path, capsys):
        assert main(["lattice", h3_path, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "rational"

    def test_n6a_obstructed(self, n6a_path, capsys):
        assert main(["lattice", n6a_path, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "obstructed"
        assert data["family"]["kind"] == "n6a"
        ob = data["obstruction"]
        assert ob["equation"] == [1, 3, 2]
        assert ob["solutions_found"] == 0
        assert ob["certificate"]["validated"]

    def test_n7a_obstructed(self, tmp_path, capsys):
        from qelie.catalog import make_n7a
        p = write_entry(tmp_path, make_n7a(1, 2), "n7a")
        assert main(["lattice", p, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "obstructed"
        assert data["family"]["kind"] == "n7a"

    def test_unknown_for_generic_irrational(self, tmp_path, capsys):
        p = tmp_path / "odd.json"
        p.write_text(json.dumps({
            "name": "odd", "dim": 3, "basis": ["x", "y", "z"],
            "brackets": [["x", "y", "z", "1.7320508075688772"]],
        }), encoding="utf-8")
        assert main(["lattice", str(p), "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["verdict"] == "unknown"


class TestDeterminismAndEnv:
    def test_byte_deterministic_reports(self, n6a_path, capsys):
        outs = []
        for _ in range(2):
            assert main(["qe", n6a_path, "--m", "1", "--json"]) == 1
            outs.append(capsys.readouterr().out)
        assert outs[0] == outs[1]
        for _ in range(2):
            assert main(["ricci", n6a_path]) == 0
            outs.append(capsys.readouterr().out)
        assert outs[2] == outs[3]

    def test_qelie_tol_env(self, h3_path, monkeypatch, capsys):
        # an absurdly loose tolerance declares everything flat
        monkeypatch.setenv("QELIE_TOL", "100.0")
        assert main(["ricci", h3_path, "--json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["flat"] is True

    def test_usage_error_exit_2(self):
        assert main(["ricci"]) == 2
        assert main(["frobnicate"]) == 2

    def test_fifteen_digit_rendering(self, h3_path, capsys):
        assert main(["ricci", h3_path]) == 0
        out = capsys.readouterr().out
        assert "scalar curvature: -0.5" in out
