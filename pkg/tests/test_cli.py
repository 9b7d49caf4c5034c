import json
import filecmp
from pathlib import Path

import pytest

from netcube.cli import main


GRID_SPEC = json.dumps({"kind": "grid1d", "params": {"n": 8}, "seed": 0})


def write_grid_csv(path):
    rows = ["id,x"] + [f"p{i},{i}" for i in range(8)]
    path.write_text("\n".join(rows) + "\n")


def test_build_happy_path(tmp_path):
    csv_path = tmp_path / "grid8.csv"
    write_grid_csv(csv_path)
    out = tmp_path / "out"
    code = main(["build", "--points", str(csv_path), "--r", "0.142857",
                 "--out", str(out)])
    assert code == 0
    assert (out / "tree.json").exists()
    assert (out / "hierarchy.json").exists()
    report = json.loads((out / "report.json").read_text())
    assert report["tree_properties"]["passed"]


def test_build_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,x\np0,notanumber\n")
    code = main(["build", "--points", str(bad), "--r", "0.14",
                 "--out", str(tmp_path / "o")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_build_bad_r(tmp_path, capsys):
    code = main(["build", "--generate", GRID_SPEC, "--r", "0.4",
                 "--out", str(tmp_path / "o")])
    assert code == 1
    err = capsys.readouterr().err
    assert "1/3" in err and "regrade" in err


def test_build_requires_one_input(tmp_path):
    code = main(["build", "--r", "0.14", "--out", str(tmp_path / "o")])
    assert code == 1


def test_matrix_input(tmp_path):
    mat = {"n": 3, "d": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(mat))
    code = main(["build", "--matrix", str(path), "--r", "0.2",
                 "--out", str(tmp_path / "o")])
    assert code == 0


def test_measure_ok_and_conservation(tmp_path):
    out = tmp_path / "out"
    code = main(["measure", "--generate", GRID_SPEC, "--r", "0.142857",
                 "--p", "0.1", "--out", str(out)])
    assert code == 0
    measure = json.loads((out / "measure.json").read_text())
    assert abs(sum(measure["points"]) - 1.0) < 1e-12


def test_measure_p_out_of_range(tmp_path, capsys):
    code = main(["measure", "--generate", GRID_SPEC, "--r", "0.142857",
                 "--p", "0.9", "--out", str(tmp_path / "o")])
    assert code == 1
    assert "M_max" in capsys.readouterr().err


def test_measure_beta_below_threshold(tmp_path):
    code = main(["measure", "--generate", GRID_SPEC, "--r", "0.142857",
                 "--beta", "0.1", "--out", str(tmp_path / "o")])
    assert code == 1


def test_measure_requires_one_selection(tmp_path):
    code = main(["measure", "--generate", GRID_SPEC, "--r", "0.142857",
                 "--p", "0.1", "--beta", "1.0", "--out", str(tmp_path / "o")])
    assert code == 1


def test_verify_writes_report_and_figures(tmp_path):
    out = tmp_path / "out"
    code = main(["verify", "--generate", GRID_SPEC, "--r", "0.142857",
                 "--p", "0.1", "--samples", "50", "--seed", "3",
                 "--out", str(out)])
    assert code == 0
    report = json.loads((out / "doubling_report.json").read_text())
    assert report["cube_comparability"]["pass_cubes"]
    assert report["ball_doubling"]["pass_balls"]
    assert (out / "doubling.png").exists()
    assert (out / "mass_hist.png").exists()


def test_verify_exhaustive(tmp_path):
    out = tmp_path / "out"
    code = main(["verify", "--generate", GRID_SPEC, "--r", "0.142857",
                 "--p", "0.1", "--samples", "20", "--exhaustive",
                 "--no-figures", "--out", str(out)])
    assert code == 0
    report = json.loads((out / "doubling_report.json").read_text())
    assert report["ball_doubling_exhaustive"]["pass_balls"]


def test_spectrum_outputs(tmp_path):
    spec = json.dumps({"kind": "mary_ultrametric",
                       "params": {"m": 2, "h": 6, "ratio": 0.45}, "seed": 0})
    out = tmp_path / "out"
    code = main(["spectrum", "--generate", spec, "--r", "0.142857", "--p", "0.1",
                 "--q", "0,0.5,2", "--samples", "5", "--seed", "1",
                 "--out", str(out)])
    assert code == 0
    assert (out / "spectrum.csv").read_text().startswith("x,q,k,log_sum")
    assert (out / "dimension.csv").exists()
    assert (out / "spectrum.png").exists()
    report = json.loads((out / "report.json").read_text())
    assert "spectrum" in report


def test_pipeline_determinism(tmp_path):
    spec = json.dumps({"kind": "euclidean_random",
                       "params": {"n": 60, "dim": 2}, "seed": 12})
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        for cmd in (
            ["build", "--generate", spec, "--r", "0.142857", "--out", str(out)],
            ["measure", "--generate", spec, "--r", "0.142857", "--p", "0.05",
             "--out", str(out)],
            ["verify", "--generate", spec, "--r", "0.142857", "--p", "0.05",
             "--samples", "100", "--seed", "5", "--no-figures", "--out", str(out)],
            ["spectrum", "--generate", spec, "--r", "0.142857", "--p", "0.05",
             "--samples", "8", "--seed", "5", "--no-figures", "--out", str(out)],
        ):
            assert main(cmd) == 0
        outs.append(out)
    a, b = outs
    for artifact in sorted(p.name for p in a.iterdir()
                           if p.suffix in (".json", ".csv")):
        assert (a / artifact).read_bytes() == (b / artifact).read_bytes(), artifact
