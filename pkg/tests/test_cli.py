import json
import math
import subprocess
import sys

import numpy as np
import pytest

from spinhrep.cli import main
from spinhrep.formats import H_COLUMNS, MEANS_COLUMNS, TOMO_COLUMNS, FRAME_COLUMNS, read_csv
from spinhrep.spincore import density_to_json, random_density


@pytest.fixture
def state_file(tmp_path):
    def make(matrix, name="state.json"):
        m = np.asarray(matrix, dtype=complex)
        path = tmp_path / name
        path.write_text(json.dumps({"twice_j": m.shape[0] - 1, "re": m.real.tolist(), "im": m.imag.tolist()}))
        return str(path)

    return make


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


class TestSelftest:
    def test_quick_passes(self, capsys):
        code, out, _ = run(["selftest", "--quick"], capsys)
        assert code == 0
        assert "FAIL" not in out
        assert "round-trip" in out

    def test_fault_injection_names_round_trip(self, capsys):
        code, out, _ = run(["selftest", "--quick", "--inject-fault", "quantizer"], capsys)
        assert code == 4
        failed = out.strip().splitlines()[-1]
        assert failed.startswith("FAILED") and "round-trip" in failed


class TestRoundtrip:
    @pytest.mark.parametrize("tj, tol", [(1, 1e-10), (6, 1e-9)])
    def test_report(self, capsys, tj, tol):
        code, out, _ = run(["roundtrip", "--twice-j", str(tj), "--seed", "1"], capsys)
        report = json.loads(out)
        assert code == 0
        assert report["passed"] and report["max_abs_error"] < tol

    def test_negative_twice_j_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["roundtrip", "--twice-j", "-1"])
        assert exc.value.code == 2

    def test_small_grid_rejected(self, capsys):
        code, _, err = run(["roundtrip", "--twice-j", "4", "--n-xy", "5"], capsys)
        assert code == 3 and "minimum" in err

    def test_writes_file(self, tmp_path, capsys):
        out = tmp_path / "r.json"
        assert main(["roundtrip", "--twice-j", "2", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["twice_j"] == 2


class TestHdist:
    def test_spin_up(self, capsys, state_file):
        code, out, _ = run(["hdist", "--state", state_file(np.diag([1.0, 0.0]))], capsys)
        assert code == 0
        for r in read_csv(out, H_COLUMNS):
            expect = 2 / math.pi * math.exp(-(r["x"] ** 2 + r["y"] ** 2)) * r["x"] ** 2
            assert r["w"] == pytest.approx(expect, abs=1e-15)

    def test_mixed_regular(self, capsys, state_file):
        code, out, _ = run(
            ["hdist", "--state", state_file(np.eye(2) / 2), "--grid", "regular", "--points", "5", "--n-theta", "3"],
            capsys,
        )
        rows = read_csv(out, H_COLUMNS)
        assert code == 0 and len(rows) == 5 * 5 * 3
        for r in rows:
            r2 = r["x"] ** 2 + r["y"] ** 2
            assert r["w"] == pytest.approx(math.exp(-r2) * r2 / math.pi, abs=1e-15)

    def test_schema_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"twice_j": 1, "re": [[1, 0], [0, 0]]}))
        code, _, err = run(["hdist", "--state", str(bad)], capsys)
        assert code == 3 and "'im'" in err

    def test_invalid_density(self, capsys, state_file):
        code, _, err = run(["hdist", "--state", state_file([[0.6, 0.8], [0.8, 0.4]])], capsys)
        assert code == 3 and "eigenvalue" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(["hdist", "--state", str(tmp_path / "nope.json")], capsys)
        assert code == 3


class TestTomogramAndKernel:
    def test_spin_up_tomogram(self, capsys, state_file):
        code, out, _ = run(["tomogram", "--state", state_file(np.diag([1.0, 0.0]))], capsys)
        assert code == 0
        for r in read_csv(out, TOMO_COLUMNS):
            if r["m"] == 0.5:
                assert r["w"] == pytest.approx((1 + math.cos(r["beta"])) / 2, abs=1e-14)

    def test_axes_too_small(self, capsys, state_file):
        code, _, _ = run(["tomogram", "--state", state_file(np.eye(2) / 2), "--axes", "2,1"], capsys)
        assert code == 3

    def test_th_direction_reproduces_tomogram(self, capsys, state_file, tmp_path):
        path = state_file(np.diag([1.0, 0.0]))
        assert main(["hdist", "--state", path, "--out", str(tmp_path / "h.csv")]) == 0
        code, out, _ = run(["kernel", "--direction", "th", "--in", str(tmp_path / "h.csv")], capsys)
        assert code == 0
        for r in read_csv(out, TOMO_COLUMNS):
            expect = (1 + 2 * r["m"] * math.cos(r["beta"])) / 2
            assert r["w"] == pytest.approx(expect, abs=1e-9)

    def test_ht_direction_reproduces_hdist(self, capsys, state_file, tmp_path):
        rho = random_density(0.5, seed=3)
        path = tmp_path / "rho.json"
        path.write_text(density_to_json(rho))
        main(["tomogram", "--state", str(path), "--out", str(tmp_path / "t.csv")])
        main(["hdist", "--state", str(path), "--out", str(tmp_path / "h.csv")])
        capsys.readouterr()
        code, out, _ = run(["kernel", "--direction", "ht", "--in", str(tmp_path / "t.csv")], capsys)
        assert code == 0
        direct = read_csv((tmp_path / "h.csv").read_text(), H_COLUMNS)
        via = read_csv(out, H_COLUMNS)
        assert len(direct) == len(via)
        assert max(abs(a["w"] - b["w"]) for a, b in zip(direct, via)) < 1e-10

    def test_bad_csv(self, capsys, tmp_path):
        f = tmp_path / "x.csv"
        f.write_text("a,b\n1,2\n")
        code, _, _ = run(["kernel", "--direction", "th", "--in", str(f)], capsys)
        assert code == 3


class TestLarmor:
    def test_means(self, capsys):
        code, out, _ = run(["larmor", "--omega", "1", "--steps", "100"], capsys)
        rows = read_csv(out, MEANS_COLUMNS)
        assert code == 0 and len(rows) == 101
        assert rows[-1]["t"] == pytest.approx(2 * math.pi)
        for r in rows:
            assert r["Sy"] == pytest.approx(-0.5 * math.sin(r["t"]), abs=1e-10)
            assert r["Sz"] == pytest.approx(0.5 * math.cos(r["t"]), abs=1e-10)
            assert abs(r["Sx"]) < 1e-10

    def test_frames(self, capsys):
        code, out, _ = run(["larmor", "--frames", "--steps", "2", "--points", "3"], capsys)
        rows = read_csv(out, FRAME_COLUMNS)
        assert code == 0 and len(rows) == 3 * 3 * 3 * 8

    def test_negative_omega(self, capsys):
        code, _, _ = run(["larmor", "--omega", "-1"], capsys)
        assert code == 3


def test_deterministic_bytes(tmp_path):
    cmd = [sys.executable, "-m", "spinhrep", "roundtrip", "--twice-j", "3", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b
    cmd = [sys.executable, "-m", "spinhrep", "larmor", "--steps", "10"]
    assert subprocess.run(cmd, capture_output=True).stdout == subprocess.run(cmd, capture_output=True).stdout
