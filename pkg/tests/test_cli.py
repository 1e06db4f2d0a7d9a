import json
import random

import pytest

from tywha.cli import main
from tywha.linalg import SparseVec, distance


def run(argv):
    return main(argv)


class TestGroupDescribe:
    def test_z4_table(self, capsys):
        assert run(["group", "describe", "--group", "4"]) == 0
        out = capsys.readouterr().out
        assert "{(0,),(2,)}" in out
        assert "K = K_perp" in out

    def test_hyperbolic_bichar_file(self, tmp_path, capsys):
        path = tmp_path / "chi.json"
        path.write_text(json.dumps({"matrix": [["0", "1/2"], ["1/2", "0"]]}))
        assert run(["group", "describe", "--group", "2,2", "--bichar", str(path)]) == 0
        out = capsys.readouterr().out
        assert out.count("\n") >= 6  # header + 5 subgroups

    def test_degenerate_bichar_exits_2(self, tmp_path, capsys):
        path = tmp_path / "flat.json"
        path.write_text(json.dumps({"matrix": [["0"]]}))
        assert run(["group", "describe", "--group", "2", "--bichar", str(path)]) == 2
        assert "bicharacter degenerate" in capsys.readouterr().err

    def test_bad_group_exits_2(self):
        assert run(["group", "describe", "--group", "zzz"]) == 2


class TestWhaCommands:
    def test_verify_passes(self, capsys):
        assert run(["wha", "verify", "--group", "2", "--tau", "+"]) == 0
        out = capsys.readouterr().out
        assert "PASS" in out and "FAIL" not in out

    def test_bad_tau_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            run(["wha", "verify", "--group", "2", "--tau", "x"])
        assert err.value.code == 2

    def test_export_roundtrip(self, tmp_path):
        out = tmp_path / "wha.json"
        assert run(["wha", "export", "--group", "2", "--tau", "-", "--json", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["format"] == "ty-wha/1"
        assert data["dim"] == 34

        table = {}
        for i, j, k, re_, im_ in data["product"]:
            table.setdefault((i, j), []).append((k, complex(re_, im_)))

        from tywha.algebra import TYAlgebra
        from tywha.groups import FiniteAbelianGroup

        alg = TYAlgebra(FiniteAbelianGroup((2,)), tau_sign=-1)
        rng = random.Random(2)
        for _ in range(10):
            a, b = alg.random_element(rng), alg.random_element(rng)
            redone = {}
            for i, ca in a.items():
                for j, cb in b.items():
                    for k, c in table.get((i, j), ()):
                        redone[k] = redone.get(k, 0) + ca * cb * c
            assert distance(SparseVec(redone), alg.multiply(a, b)) < 1e-9


class TestCoidealCommand:
    def test_named_builder(self, capsys):
        assert run(["coideal", "build", "--group", "2", "--K", "0", "--builder", "I_Omega_K"]) == 0
        out = capsys.readouterr().out
        assert "is_coideal = True" in out

    def test_full_z0_with_rho(self, capsys):
        code = run(
            ["coideal", "build", "--group", "4", "--K", "2", "--Z0", "all", "--Z1", "0"]
        )
        assert code == 0
        assert "is_coideal = True" in capsys.readouterr().out

    def test_both_sides_large_exits_2(self, capsys):
        code = run(
            ["coideal", "build", "--group", "4", "--K", "2", "--Z0", "0;1", "--Z1", "0;1"]
        )
        assert code == 2
        assert "Z0" in capsys.readouterr().err

    def test_no_data_exits_2(self):
        assert run(["coideal", "build", "--group", "2", "--K", "0"]) == 2

    def test_named_no_m_builder(self, capsys):
        code = run(
            ["coideal", "build", "--group", "4", "--K", "2", "--Z0", "all", "--builder", "no_m"]
        )
        assert code == 0
        assert "is_coideal = False" in capsys.readouterr().out

    def test_named_with_m_builder(self, capsys):
        code = run(
            [
                "coideal", "build", "--group", "4", "--K", "2",
                "--Z0", "0", "--Z1", "1", "--builder", "with_m",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "indecomposable = True" in out

    def test_with_m_builder_needs_single_rho(self, capsys):
        code = run(
            ["coideal", "build", "--group", "4", "--K", "2", "--Z0", "0", "--builder", "with_m"]
        )
        assert code == 2

    def test_json_report(self, tmp_path):
        out = tmp_path / "coideal.json"
        code = run(
            [
                "coideal",
                "build",
                "--group",
                "4",
                "--K",
                "2",
                "--Z0",
                "1",
                "--json",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["verified"] is True
        assert payload["is_coideal"] is False
        assert payload["indecomposable"] is True
        assert payload["dims_match_prediction"] is True


class TestClassifyCommands:
    def test_z2_counts(self, capsys):
        assert run(["classify", "weak-coideals", "--group", "2"]) == 0
        out = capsys.readouterr().out
        assert "10 total, 8 coideal-containing" in out

    def test_trivial_group(self, capsys):
        assert run(["classify", "weak-coideals", "--group", "1"]) == 0
        assert "2 total, 2 coideal-containing" in capsys.readouterr().out

    def test_realize_flag(self, capsys):
        assert run(["classify", "weak-coideals", "--group", "2", "--realize"]) == 0
        assert "realized and verified" in capsys.readouterr().out

    def test_guard_exceeded_exits_2(self):
        assert run(["classify", "weak-coideals", "--group", "17"]) == 2

    def test_json_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert run(["classify", "weak-coideals", "--group", "2", "--json", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_g_algebras(self, capsys, tmp_path):
        out = tmp_path / "algs.json"
        code = run(
            ["classify", "g-algebras", "--group", "2", "--max-mult", "1", "--json", str(out)]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        counts = [
            e["types"]["decomposed"]["n_classes"] for e in payload["per_subgroup"]
        ]
        assert counts == [5, 5]
