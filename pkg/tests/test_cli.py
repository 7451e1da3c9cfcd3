import csv
import json
import math

import pytest

from orliczlab import cli

UNIT_L2 = json.dumps({"target": {"dim": 2, "norm": "l2"},
                      "atom_vectors": [[1, 0], [0, 1]],
                      "space": {"atoms": ["a1", "a2"], "weights": [1, 1]}})
L1 = json.dumps({"kind": "l1mu"})
SQUARE = json.dumps({"kind": "power", "p": 2})


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def doc(out):
    d = json.loads(out.strip().splitlines()[-1] if not out.lstrip().startswith("{\n") else out)
    assert d["v"] == 1
    return d


def test_semivar(capsys):
    code, out = run(capsys, "semivar", "--measure", UNIT_L2)
    assert code == 0 and doc(out)["value"] == pytest.approx(math.sqrt(2), abs=1e-10)
    code, out = run(capsys, "semivar", "--measure", UNIT_L2, "--set", '["a2"]')
    assert doc(out)["value"] == 1.0


def test_luxemburg(capsys):
    code, out = run(capsys, "luxemburg", "--base", L1, "--phi", SQUARE, "--fn", "[3, 4]")
    d = doc(out)
    assert code == 0 and d["value"] == 5.0 and d["modular"] == 25.0
    code, out = run(capsys, "luxemburg", "--base", L1, "--phi", SQUARE, "--fn", "[0, 0]")
    assert doc(out)["value"] == 0.0


def test_norm_and_file_inputs(capsys, tmp_path):
    space = tmp_path / "space.json"
    space.write_text(json.dumps({"kind": "linf"}))
    fn = tmp_path / "fn.json"
    fn.write_text("[1, -7, 2]")
    code, out = run(capsys, "norm", "--space", str(space), "--fn", str(fn))
    assert code == 0 and doc(out)["value"] == 7.0


def test_calderon(capsys):
    x1 = json.dumps({"kind": "power", "s": 1 / 3, "base": {"kind": "l1mu"}})
    code, out = run(capsys, "calderon", "--x0", L1, "--x1", x1, "--theta", "0.5",
                    "--fn", "[1, 0]", "--method", "grid-oracle")
    assert code == 0 and doc(out)["value"] == pytest.approx(1.0, abs=1e-9)


def test_interpolate(capsys):
    code, out = run(capsys, "interpolate", "--base", L1, "--phi0", json.dumps({"kind": "power", "p": 1}),
                    "--phi1", json.dumps({"kind": "power", "p": 3}), "--theta", "0.5",
                    "--fn", "[1, 1]", "--trials", "200")
    d = doc(out)
    assert code == 0 and d["exponent"] == pytest.approx(1.5)


def test_distfn_outputs(capsys, tmp_path):
    c, s = tmp_path / "d.csv", tmp_path / "d.svg"
    code, out = run(capsys, "distfn", "--measure", UNIT_L2, "--fn", "[1, 2]",
                    "--csv", str(c), "--svg", str(s))
    d = doc(out)
    assert code == 0
    rows = list(csv.reader(c.read_text().splitlines()))[1:]
    t = [float(r[0]) for r in rows]
    v = [float(r[1]) for r in rows]
    # rectangles of the staircase sum to the layer-cake integral
    area = sum(v[i] * (t[i + 1] - t[i]) for i in range(len(t) - 1))
    assert area == pytest.approx(d["choquet_norm"], abs=1e-12)
    assert area == pytest.approx(1 + math.sqrt(2), abs=1e-12)
    assert s.read_text().lstrip().startswith("<?xml")


@pytest.mark.parametrize("argv, code", [
    (["semivar", "--measure", "{bad json"], 2),
    (["semivar", "--measure", "/no/such/file.json"], 2),
    (["luxemburg", "--base", json.dumps({"kind": "l1mu", "v": 7}), "--phi", SQUARE, "--fn", "[1]"], 2),
    (["luxemburg", "--base", L1, "--phi", json.dumps({"kind": "power", "p": 0.5}), "--fn", "[1]"], 3),
    (["verify", "--filter", "no-such-check"], 2),
    (["verify", "--suite", "cp"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert cli.main(argv) == code


def test_missing_argument_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["luxemburg", "--base", L1])
    assert exc.value.code == 2


def test_verify_writes_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["verify", "orlicz", "--suite", "young", "--budget", "10", "--out", str(out)])
    d = json.loads(out.read_text())
    assert code == 0 and d["v"] == 1 and d["pass"]
    assert {v["check"] for v in d["verdicts"]} == {"young-delta2", "young-quasi-subadditive"}


def test_verify_failure_exit_code(capsys, monkeypatch):
    from orliczlab import verify

    spec = verify.CheckSpec("zz-fail", "homogeneity", 1e-9, 2,
                            lambda rng, tol: verify.Outcome({}, 1.0, 0.0, False))
    monkeypatch.setitem(verify.REGISTRY, "zz-fail", spec)
    assert cli.main(["verify", "--filter", "zz-fail"]) == 1
