import os
import subprocess
import sys

import pytest

from pvqed import cli
from pvqed import fields as F

RESP = ["response", "--masses", "1,2,3", "--beta", "1", "--q-min", "0", "--q-max", "4", "--q-steps", "5"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_scheme(capsys):
    code, out, _ = run(["scheme", "--masses", "1,2,3"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# pvqed") and "natural units" in lines[0] and "masses=1.0,2.0,3.0" in lines[0]
    assert lines[1].split(",")[:3] == ["m0", "m1", "m2"]
    assert float(lines[2].split(",")[6]) == pytest.approx(1.5681054, rel=1e-7)


@pytest.mark.parametrize("masses", ["1,2,2", "3,2,1", "0,1,2"])
def test_degenerate_exit_3(capsys, masses):
    assert run(["scheme", "--masses", masses], capsys)[0] == 3


@pytest.mark.parametrize("argv", [
    ["scheme"],
    ["scheme", "--masses", "1,2"],
    ["scheme", "--masses", "a,b,c"],
    ["response", "--masses", "1,2,3", "--beta", "1", "--temperature", "1",
     "--q-min", "0", "--q-max", "1", "--q-steps", "2"],
    ["response", "--masses", "1,2,3", "--beta", "-1", "--q-min", "0", "--q-max", "1", "--q-steps", "2"],
    ["response", "--masses", "1,2,3", "--beta", "1", "--q-min", "2", "--q-max", "1", "--q-steps", "2"],
    ["response", "--masses", "1,2,3", "--beta", "1", "--q-min", "0", "--q-max", "1", "--q-steps", "2", "--q-log"],
    ["frobnicate"],
])
def test_usage_exit_2(capsys, argv):
    assert run(argv, capsys)[0] == 2


def test_response_table(capsys):
    code, out, _ = run(RESP, capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "q,M0,MT,Mtotal,err"
    assert len(lines) == 7


def test_zero_temperature(capsys):
    argv = ["response", "--masses", "1,2,3", "--temperature", "0", "--q-min", "1", "--q-max", "1", "--q-steps", "1"]
    code, out, _ = run(argv, capsys)
    assert code == 0 and "beta=inf" in out
    assert float(out.splitlines()[2].split(",")[2]) == 0.0


def test_lagrangian(capsys):
    argv = ["lagrangian", "--masses", "1,2,3", "--beta", "1", "--a-min", "0.5", "--a-max", "20", "--a-steps", "3"]
    code, out, _ = run(argv, capsys)
    assert code == 0
    rows = out.splitlines()[2:]
    assert rows[0].endswith("false") and rows[-1].endswith("true")


def test_atomic_out(tmp_path, capsys):
    target = tmp_path / "r.csv"
    code, out, _ = run(RESP + ["--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert target.read_text().startswith("# pvqed")
    assert [p.name for p in tmp_path.iterdir()] == ["r.csv"]


def test_out_unwritable(tmp_path, capsys):
    assert run(RESP + ["--out", str(tmp_path / "missing" / "r.csv")], capsys)[0] == 5


def test_density(tmp_path, capsys):
    path = tmp_path / "f.csv"
    F.write_field(F.make_test_field("gaussian_loop", n=8, spacing=0.5), path)
    code, out, err = run(["density", "--masses", "1,2,3", "--beta", "1", "--field", str(path),
                          "--epsilon", "0.5", "--verify"], capsys)
    assert code == 0
    assert "boundary max" in err and "resampled energy" in err
    assert out.splitlines()[1] == "energy,epsilon,scaled_energy,cells_clipped,max_divergence"


def test_density_divergence_limit(tmp_path, capsys):
    path = tmp_path / "f.csv"
    F.write_field(F.make_test_field("gaussian_loop", n=8, spacing=0.5), path)
    argv = ["density", "--masses", "1,2,3", "--beta", "1", "--field", str(path), "--max-divergence", "1e-9"]
    assert run(argv, capsys)[0] == 3


def test_density_missing_file(tmp_path, capsys):
    argv = ["density", "--masses", "1,2,3", "--beta", "1", "--field", str(tmp_path / "none.csv")]
    assert run(argv, capsys)[0] == 5


def test_density_malformed(tmp_path, capsys):
    path = tmp_path / "f.csv"
    path.write_text("x,y,z,Bx,By,Bz\n0,0,0,1,2\n")
    argv = ["density", "--masses", "1,2,3", "--beta", "1", "--field", str(path)]
    assert run(argv, capsys)[0] == 3


def test_selftest(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0
    assert len(out.splitlines()) == 2 + 16


def test_threads_env(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert cli.parse_args(RESP).threads == 3


def test_module_entry_point_deterministic(tmp_path):
    outs = []
    for threads in ("1", "8"):
        target = tmp_path / f"t{threads}.csv"
        env = dict(os.environ)
        subprocess.run([sys.executable, "-m", "pvqed", *RESP, "--threads", threads, "--out", str(target)],
                       check=True, env=env)
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
