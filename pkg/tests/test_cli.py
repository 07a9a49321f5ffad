import dataclasses

import numpy as np
import pytest

from eit_rfm import IndicatorField, ValidationError, read_matrix_csv
from eit_rfm.cli import PRESETS, ExperimentConfig, export_field, main, run


def _field(w):
    w = np.asarray(w, float)
    n = w.shape[0]
    x = -1 + (np.arange(n) + 0.5) * 2 / n
    return IndicatorField(x, x[::-1].copy(), w, w, 1.0)


def parse_report(text):
    return dict(line.split("=", 1) for line in text.strip().splitlines())


@pytest.mark.parametrize(
    "name, expected",
    [
        ("fig1", ("complex", 0.2, 2 - 0.5j, 0.1 - 1j, 0.05, 1e-17, 1.0, 0.2)),
        ("fig2", ("complex", 0.7, 2 - 3j, 1 - 4j, 0.1, 1e-4, 1.0, 0.2)),
        ("fig3", ("real", 0.25, 1.2, 0.5, 0.05, 1e-15, 4.0, 0.1)),
        ("fig4", ("real", 0.75, 0.6, 1.6, 0.1, 1e-5, 4.0, 0.07)),
    ],
)
def test_presets_echo_published_parameters(name, expected):
    cfg = PRESETS[name]
    got = (cfg.mode, cfg.rho, cfg.gamma, cfg.mu, cfg.delta, cfg.alpha, cfg.p, cfg.threshold)
    assert got == expected
    assert (cfg.n_max, cfg.m_grid, cfg.grid_n, cfg.seed, cfg.r_max) == (10, 64, 128, 0, 0.95)
    cfg.validate()


def test_pgm_quantization(tmp_path):
    export_field(_field([[1.0, 0.5], [0.25, 0.0]]), path_pgm=tmp_path / "w.pgm")
    data = (tmp_path / "w.pgm").read_bytes()
    assert data.startswith(b"P5\n2 2\n255\n")
    assert list(data[-4:]) == [255, 128, 64, 0]


def test_pgm_absent_points_are_black(tmp_path):
    export_field(_field([[np.nan, 0.5], [1.0, np.nan]]), path_pgm=tmp_path / "w.pgm")
    assert list((tmp_path / "w.pgm").read_bytes()[-4:]) == [0, 128, 255, 0]


def test_csv_round_trip(tmp_path):
    res = run(dataclasses.replace(PRESETS["fig2"], grid_n=24))
    fld = res.field
    export_field(fld, path_csv=tmp_path / "w.csv")
    lines = (tmp_path / "w.csv").read_text().splitlines()
    assert lines[0] == "x,y,w"
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert len(rows) == fld.present.sum()
    xx, yy = np.meshgrid(fld.x, fld.y)
    present = fld.present
    assert np.allclose(rows[:, 0], xx[present], atol=1e-9)
    assert np.allclose(rows[:, 1], yy[present], atol=1e-9)
    assert np.max(np.abs(rows[:, 2] - fld.w[present])) <= 1e-6


def test_export_rejects_empty_field(tmp_path):
    with pytest.raises(ValidationError):
        export_field(_field(np.full((2, 2), np.nan)), tmp_path / "w.csv", tmp_path / "w.pgm")
    assert not (tmp_path / "w.csv").exists()


def test_main_success_prints_report(tmp_path, capsys):
    csv, pgm, mat = tmp_path / "w.csv", tmp_path / "w.pgm", tmp_path / "a.csv"
    code = main(["--preset", "fig2", "--grid", "32", "--out-csv", str(csv), "--out-pgm", str(pgm), "--out-matrix", str(mat)])
    assert code == 0
    rep = parse_report(capsys.readouterr().out)
    for key in ("sigma_1", "sigma_M", "n_pass", "r_est", "separation", "wall_time"):
        assert np.isfinite(float(rep[key]))
    assert rep["config.grid_n"] == "32"
    assert rep["config.gamma"] == "(2-3j)"
    assert csv.exists() and pgm.read_bytes().startswith(b"P5\n32 32\n255\n")
    assert read_matrix_csv(mat).mode == "imaginary-part"


def test_flags_override_preset(capsys):
    assert main(["--preset", "fig3", "--grid", "16", "--alpha", "1e-10", "--seed", "4", "--gamma-re", "2.5"]) == 0
    rep = parse_report(capsys.readouterr().out)
    assert rep["config.alpha"] == "1e-10"
    assert rep["config.seed"] == "4"
    assert rep["config.gamma"] == "(2.5+0j)"
    assert rep["config.mu"] == "(0.5+0j)"


def test_explicit_flags_without_preset(capsys):
    argv = "--rho 0.4 --gamma-re 1 --gamma-im -1 --mu-re 0.5 --mu-im -0.5 --alpha 1e-12 --threshold 0.2 --grid 16"
    assert main(argv.split()) == 0
    rep = parse_report(capsys.readouterr().out)
    assert rep["config.mode"] == "complex"
    assert rep["config.delta"] == "0.0"


@pytest.mark.parametrize(
    "argv",
    [
        ["--preset", "fig1", "--mode", "real"],
        ["--preset", "fig3", "--gamma-im", "-0.5"],
        ["--preset", "fig1", "--rho", "1.2"],
        ["--preset", "fig1", "--delta", "-0.1"],
        ["--preset", "fig1", "--grid", "4"],
        ["--preset", "fig1", "--threshold", "0"],
        ["--rho", "0.3"],
        ["--preset", "fig1", "--nmax", "40"],
    ],
)
def test_main_validation_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert capsys.readouterr().err.startswith("error:")


@pytest.mark.parametrize("argv", [["--preset", "nope"], ["--preset", "fig1", "--rho", "abc"]])
def test_argument_errors_exit_1(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 1


def test_main_numerical_failure_exit_2(capsys):
    # alpha above the whole spectrum: nothing survives the cut-off
    assert main(["--preset", "fig2", "--alpha", "10", "--grid", "16"]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_main_io_failure_exit_1(tmp_path, capsys):
    target = tmp_path / "missing" / "w.csv"
    assert main(["--preset", "fig2", "--grid", "16", "--out-csv", str(target)]) == 1
    assert str(target) in capsys.readouterr().err


def test_same_seed_same_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["--preset", "fig1", "--grid", "48", "--out-csv", str(a)])
    main(["--preset", "fig1", "--grid", "48", "--out-csv", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_config_mode_mismatch():
    cfg = dataclasses.replace(PRESETS["fig1"], mode="real")
    with pytest.raises(ValidationError):
        run(cfg)
    with pytest.raises(ValidationError):
        ExperimentConfig("sideways", 0.2, 1, 1, 0, 1e-3, 1, 0.5).validate()
