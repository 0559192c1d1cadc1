import json
import math

import numpy as np
import pytest

from vinberg_rmt import io
from vinberg_rmt.cli import main


def run(tmp_path, *argv, out="out.csv"):
    path = tmp_path / out
    code = main([*argv, "--out", str(path)])
    return code, path


class TestSample:
    def test_wigner_rows(self, tmp_path):
        code, path = run(tmp_path, "sample", "--ensemble", "wigner", "--n", "300", "--c", "0.4",
                         "--v", "1", "--seed", "7")
        assert code == 0
        eigs = io.read_column(path, "eigenvalue")
        assert eigs.size == 300 and np.all(np.diff(eigs) >= 0)
        meta = json.loads(io.sidecar(path).read_text())
        assert meta["schema_version"] == 1 and meta["config"]["seed"] == 7

    def test_wishart_positive(self, tmp_path):
        code, path = run(tmp_path, "sample", "--ensemble", "wishart", "--n", "300", "--m1", "1",
                         "--m2", "0", "--seed", "7")
        assert code == 0
        assert io.read_column(path, "eigenvalue").min() >= -1e-10

    def test_deterministic(self, tmp_path):
        args = ("sample", "--ensemble", "wigner", "--n", "200", "--c", "0.4", "--seed", "7")
        _, p1 = run(tmp_path, *args, out="a.csv")
        _, p2 = run(tmp_path, *args, out="b.csv")
        assert p1.read_bytes() == p2.read_bytes()
        assert b"\r" not in p1.read_bytes()

    def test_config_round_trip(self, tmp_path):
        _, p1 = run(tmp_path, "sample", "--ensemble", "wishart", "--n", "150", "--m1", "0.5",
                    "--m2", "3", "--seed", "11", out="a.csv")
        _, p2 = run(tmp_path, "sample", "--config", str(io.sidecar(p1)), out="b.csv")
        assert p1.read_bytes() == p2.read_bytes()

    def test_missing_seed(self, tmp_path):
        code, _ = run(tmp_path, "sample", "--n", "10", "--c", "0.5")
        assert code == 2


class TestTheory:
    def test_wigner_support(self, tmp_path):
        code, path = run(tmp_path, "theory", "--law", "wigner", "--c", "0.5")
        assert code == 0
        law = json.loads(io.sidecar(path).read_text())["law"]
        r = math.sqrt(27 / 8)
        assert law["support"] == [[pytest.approx(-r, abs=1e-12), pytest.approx(r, abs=1e-12)]]
        header, _ = io.read_csv(path)
        assert header == ["t", "f"]

    def test_wishart_support(self, tmp_path):
        code, path = run(tmp_path, "theory", "--law", "wishart", "--kappa", "inf", "--gamma", "0")
        assert code == 0
        law = json.loads(io.sidecar(path).read_text())["law"]
        assert law["support"][0][0] == pytest.approx(0, abs=1e-12)
        assert law["support"][-1][1] == pytest.approx(math.e, abs=1e-12)

    def test_mp_atom(self, tmp_path):
        code, path = run(tmp_path, "theory", "--law", "mp", "--C", "0.5")
        assert code == 0
        meta = json.loads(io.sidecar(path).read_text())
        assert meta["law"]["atoms"] == [{"loc": 0.0, "mass": pytest.approx(0.5, abs=1e-12)}]
        assert meta["total_mass"] == pytest.approx(1, abs=1e-5)

    def test_inadmissible(self, tmp_path, capsys):
        code, _ = run(tmp_path, "theory", "--law", "wishart", "--kappa", "0.5", "--gamma", "0")
        assert code == 2
        assert "gamma <= 1/kappa <= 1" in capsys.readouterr().err


class TestCompare:
    def test_wigner_vs_semicircle(self, tmp_path):
        _, eigs = run(tmp_path, "sample", "--n", "800", "--c", "1", "--seed", "3", out="e.csv")
        code, rep = run(tmp_path, "compare", "--eigs", str(eigs), "--law", "wigner", "--c", "1",
                        "--bins", "40", out="r.json")
        assert code == 0
        doc = io.read_report(rep)
        assert set(doc) >= {"ks", "l1", "atom_estimate", "support_estimate", "n", "bins"}
        assert doc["n"] == 800 and doc["l1"] < 0.15

    def test_missing_file(self, tmp_path):
        code, _ = run(tmp_path, "compare", "--eigs", str(tmp_path / "nope.csv"), "--law", "wigner",
                      "--c", "1", out="r.json")
        assert code == 1


class TestWfun:
    def rows(self, path):
        header, rows = io.read_csv(path)
        assert header == ["re_z", "im_z", "re_w", "im_w", "residual"]
        return rows

    def test_examples(self, tmp_path):
        code, path = run(tmp_path, "wfun", "--kappa", "inf", "--gamma", "0", "--z", repr(math.e))
        assert code == 0
        (row,) = self.rows(path)
        assert float(row[2]) == pytest.approx(1, abs=1e-14) and float(row[4]) <= 1e-14
        code, path = run(tmp_path, "wfun", "--kappa", "1", "--gamma", "0", "--z", "2")
        (row,) = self.rows(path)
        assert float(row[2]) == pytest.approx(1, abs=1e-14)

    def test_domain_row(self, tmp_path):
        code, path = run(tmp_path, "wfun", "--kappa", "2", "--gamma", "-1", "--z", "-8.0",
                         "--z", "1+1j")
        assert code == 0
        rows = self.rows(path)
        assert rows[0][2:] == ["nan", "nan", "domain"]
        assert float(rows[1][4]) < 1e-12

    def test_real_grid(self, tmp_path):
        code, path = run(tmp_path, "wfun", "--kappa", "inf", "--gamma", "0",
                         "--real-grid", "0", "3", "7")
        assert code == 0 and len(self.rows(path)) == 7


class TestProfile:
    def test_constant(self, tmp_path):
        code, path = run(tmp_path, "profile", "--kind", "constant", "--m", "50", "--z", "2j")
        assert code == 0
        _, (row,) = io.read_csv(path)
        assert complex(float(row[2]), float(row[3])) == pytest.approx((math.sqrt(2) - 1) * 1j,
                                                                       abs=1e-10)

    def test_custom_grid_round_trip(self, tmp_path):
        grid = tmp_path / "g.csv"
        code, p1 = run(tmp_path, "profile", "--kind", "wigner_corner", "--c", "0.3", "--m", "40",
                       "--grid-out", str(grid), out="a.csv")
        assert code == 0
        code, p2 = run(tmp_path, "profile", "--kind", "custom", "--grid-in", str(grid), out="b.csv")
        assert code == 0
        assert io.read_csv(p1)[1] == io.read_csv(p2)[1]

    def test_convergence_error(self, tmp_path):
        code, _ = run(tmp_path, "profile", "--kind", "constant", "--m", "10", "--z", "0.01j",
                      "--max-iter", "2", "--tol", "1e-15")
        assert code == 3
