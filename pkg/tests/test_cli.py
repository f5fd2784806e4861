"""End-to-end checks of the command line front end, run in process."""

import numpy as np
import pytest

from ibstab import cli, stability


def _lines(capsys):
    out, err = capsys.readouterr()
    return out.splitlines(), err.splitlines()


def test_kernel_report_to_file(tmp_path):
    path = tmp_path / "phi.csv"
    assert cli.main(["kernel-report", "--n", "8", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "q,Phi"
    data = lines[1:-1]
    assert len(data) == 4 * 8 + 1
    qs = [int(row.split(",")[0]) for row in data]
    assert qs == list(range(-16, 17))
    mid = float(data[16].split(",")[1])
    assert mid == pytest.approx(1.0 / 8.0, rel=1e-12)
    assert lines[-1].startswith("# R(8) = ")
    ratio = float(lines[-1].split("=")[1])
    assert ratio == pytest.approx(0.9993296006288906, rel=1e-10)


def test_kernel_report_stdout(capsys):
    assert cli.main(["kernel-report", "--n", "4"]) == 0
    out, _ = _lines(capsys)
    assert out[0] == "q,Phi"
    assert len(out) == 1 + (4 * 4 + 1) + 1
    assert out[-1].startswith("# R(4) = ")


def test_predict_target(capsys):
    assert cli.main(["predict", "target", "--k", "8e4", "--rho", "1",
                     "--h", "0.03125"]) == 0
    out, _ = _lines(capsys)
    assert len(out) == 1 and out[0].startswith("dt_critical=")
    value = float(out[0].split("=")[1])
    assert value == pytest.approx(0.0020412414523193153, rel=1e-12)


def test_predict_membrane(capsys):
    assert cli.main(["predict", "membrane", "--k", "100", "--rho", "1",
                     "--n", "64", "--p", "2"]) == 0
    out, _ = _lines(capsys)
    assert [line.split("=")[0] for line in out] == \
        ["Cmax", "argmax", "dt_critical"]
    cmax = float(out[0].split("=")[1])
    assert cmax == pytest.approx(0.01575182231387071, rel=1e-9)
    assert out[1] == "argmax=9,10"
    dtc = float(out[2].split("=")[1])
    assert dtc == pytest.approx(0.0007780986132057868, rel=1e-9)
    h = 1.0 / 64.0
    assert (4.0 * 4.0 / h**2) * (100.0 * dtc**2 / h) * cmax == \
        pytest.approx(4.0, rel=1e-9)


def test_predict_membrane_exact_mode(capsys):
    assert cli.main(["predict", "membrane", "--k", "100", "--rho", "1",
                     "--n", "16", "--p", "2", "--exact",
                     "--eps", "0.3,-0.2,0.1"]) == 0
    out, _ = _lines(capsys)
    cmax = float(out[0].split("=")[1])
    reference = stability.stability_surface_membrane(16, 2).cmax
    assert abs(cmax - reference) / reference < 0.05


def test_table_of_surface_maxima(tmp_path):
    path = tmp_path / "t.csv"
    assert cli.main(["table1", "--n", "16,32", "--p", "1,2",
                     "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "N,P,Cmax,xi1,xi2"
    cells = [line.split(",") for line in lines[1:]]
    assert [(int(c[0]), int(c[1])) for c in cells] == \
        [(16, 1), (32, 1), (16, 2), (32, 2)]
    row = cells[3]
    assert float(row[2]) == pytest.approx(0.015714007279181437, rel=1e-9)
    assert (row[3], row[4]) == ("5", "5")


def test_table_default_grid(capsys):
    assert cli.main(["table1"]) == 0
    out, _ = _lines(capsys)
    assert len(out) == 1 + 12


def test_simulate_trace(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 8\nk = 0\nmu = 0.1\ndt = 1e-3\nsteps = 50\n"
                   "record_every = 10\n")
    path = tmp_path / "trace.csv"
    assert cli.main(["simulate", "--config", str(cfg),
                     "--out", str(path)]) == 0
    _, err = _lines(capsys)
    assert err == ["status=stable"]
    lines = path.read_text().splitlines()
    assert lines[0] == "step,time,relative_energy"
    rows = [line.split(",") for line in lines[1:]]
    assert [int(r[0]) for r in rows] == [0, 10, 20, 30, 40, 50]
    for r in rows:
        assert float(r[1]) == pytest.approx(int(r[0]) * 1e-3, abs=1e-15)
    rels = [float(r[2]) for r in rows]
    assert rels[0] == 1.0
    assert all(b <= a for a, b in zip(rels, rels[1:]))


def test_simulate_membrane_snapshots(tmp_path, capsys):
    cfg = tmp_path / "mem.cfg"
    cfg.write_text("n = 8\np = 1\nk = 100\nmu = 0.25\ndt = 1e-3\nsteps = 4\n"
                   "forcing = membrane\ndelta_mode = moving\n"
                   "init = membrane_perturbation\namplitude = 0.01\n")
    path = tmp_path / "tr.csv"
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(path),
                     "--dump-membrane", "2"]) == 0
    _, err = _lines(capsys)
    assert err and err[0].startswith("status=")
    for step in (0, 2, 4):
        snap = tmp_path / f"tr_membrane_{step:08d}.csv"
        lines = snap.read_text().splitlines()
        assert lines[0] == "k1,k2,X1,X2,X3"
        assert len(lines) == 1 + 8 * 8
        first = lines[1].split(",")
        assert (first[0], first[1]) == ("0", "0")
        assert len(first) == 5


def test_find_critical_dt_output(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n = 8\np = 2\nmu = 0.01\nk = 8e4\nsteps = 2500\n"
                   "record_every = 5\n")
    assert cli.main(["find-critical-dt", "--config", str(cfg),
                     "--lo", "3.3e-3", "--hi", "5.2e-3",
                     "--tol", "5e-3", "--seeds", "2"]) == 0
    out, _ = _lines(capsys)
    assert len(out) == 3
    assert out[0].startswith("seed=0 dt_critical=")
    assert out[1].startswith("seed=1 dt_critical=")
    assert out[2].startswith("dt_critical_empirical=")
    value = float(out[2].split("=")[1])
    predicted = stability.critical_dt_target(8.0e4, 1.0, 1.0 / 8.0)
    assert value == pytest.approx(predicted, rel=1e-2)


def test_poiseuille_cli(tmp_path):
    path = tmp_path / "conv.csv"
    assert cli.main(["poiseuille", "--levels", "2", "--end-time", "0.25",
                     "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "N,err_u_L1,err_u_L2,err_u_Linf,d_L1,d_L2,d_Linf"
    rows = [line.split(",") for line in lines[1:]]
    assert [int(r[0]) for r in rows] == [16, 32]
    for r in rows:
        values = [float(v) for v in r[1:]]
        assert len(values) == 6
        assert all(v >= 0.0 for v in values)
        assert values[1] > 0.0


@pytest.mark.parametrize("argv", [
    [],
    ["warp-drive"],
    ["kernel-report"],
    ["predict"],
    ["predict", "target", "--k", "1"],
    ["table1", "--n", "16,banana"],
    ["predict", "membrane", "--k", "1", "--rho", "1", "--n", "16",
     "--p", "2", "--eps", "1,2"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(argv)
    assert excinfo.value.code == 2


def test_runtime_errors_return_1(tmp_path, capsys):
    assert cli.main(["predict", "target", "--k", "-1", "--rho", "1",
                     "--h", "0.1"]) == 1
    _, err = _lines(capsys)
    assert err and err[0].startswith("error:")

    assert cli.main(["simulate", "--config", str(tmp_path / "nope.cfg")]) == 1

    bad = tmp_path / "bad.cfg"
    bad.write_text("frobnicate = 1\n")
    assert cli.main(["simulate", "--config", str(bad)]) == 1
    _, err = _lines(capsys)
    assert any("unknown config key" in line for line in err)

    assert cli.main(["poiseuille", "--levels", "1"]) == 1
