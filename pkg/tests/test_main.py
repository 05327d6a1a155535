import csv
import json

import pytest

from main import main
from spa_channeling.config import CONFIG_ENV_VAR

SMALL = ["--M=10", "--M_pot=20", "--n_sub=2"]


@pytest.fixture(autouse=True)
def no_env_config(monkeypatch):
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)


@pytest.fixture
def out(tmp_path):
    return tmp_path / "out"


def _read(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# config: ")
    config = json.loads(lines[0].removeprefix("# config: "))
    rows = list(csv.reader(lines[1:]))
    return config, rows[0], rows[1:]


# -----------------------------------------------------------------------------
# atom-ref
# -----------------------------------------------------------------------------


def test_atom_ref(out):
    assert main(["atom-ref", f"--output_dir={out}", "--gamma_range=[100, 150, 200]"]) == 0
    config, columns, rows = _read(out / "atom_ref.csv")
    assert columns == ["gamma", "theta_max_rad", "dsigma1_max_barn_sr", "dsigmaB_max_barn_sr"]
    assert config["gamma_range"] == [100, 150, 200]
    assert [float(r[0]) for r in rows] == [100.0, 150.0, 200.0]
    exact = [float(r[2]) for r in rows]
    assert exact == sorted(exact)
    assert all(0 < float(r[1]) < 0.1 for r in rows)


def test_atom_ref_z_scaling(out):
    assert main(["atom-ref", f"--output_dir={out / 'si'}", "--gamma_range=[120]"]) == 0
    assert main(["atom-ref", f"--output_dir={out / 'ni'}", "--gamma_range=[120]", "--Z=28"]) == 0
    _, _, si = _read(out / "si" / "atom_ref.csv")
    _, _, ni = _read(out / "ni" / "atom_ref.csv")
    assert float(ni[0][2]) / float(si[0][2]) == pytest.approx(32.0, rel=1e-9)


def test_atom_ref_is_reproducible(out):
    args = ["atom-ref", f"--output_dir={out}", "--gamma_range=[110, 190]"]
    assert main(args) == 0
    first = (out / "atom_ref.csv").read_bytes()
    assert main(args) == 0
    assert (out / "atom_ref.csv").read_bytes() == first


def test_json_mirror(out):
    assert main(["atom-ref", f"--output_dir={out}", "--gamma_range=[120, 160]", "--json"]) == 0
    payload = json.loads((out / "atom_ref.json").read_text())
    assert payload["columns"][0] == "gamma"
    assert len(payload["rows"]) == 2
    assert payload["config"]["Z"] == 14


# -----------------------------------------------------------------------------
# Errors and exit codes
# -----------------------------------------------------------------------------


def test_unknown_config_key(tmp_path, out, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text("colour: red\n")
    assert main(["atom-ref", f"--config={path}", f"--output_dir={out}"]) == 2
    assert capsys.readouterr().err.startswith("error: ConfigError:")


def test_unknown_flag_is_usage_error(capsys):
    assert main(["atom-ref", "--colour=red"]) == 2
    assert capsys.readouterr().err.startswith("error: UsageError:")


def test_empty_theta_grid(out, capsys):
    assert main(["angular", f"--output_dir={out}", "--Theta_grid=[]"]) == 2
    assert "Theta_grid" in capsys.readouterr().err
    assert not (out / "angular.csv").exists()


def test_band_beyond_solver_is_config_error(out, capsys):
    assert main(["angular", f"--output_dir={out}", "--angular_band=45", *SMALL]) == 2
    assert capsys.readouterr().err.startswith("error: ConfigError: angular_band")
    assert main(["sigma-max", f"--output_dir={out}", "--bands=[0, 21]", *SMALL]) == 2
    assert not out.exists()


def test_missing_slater_file(tmp_path, out, capsys):
    assert main(["bands", f"--output_dir={out}", f"--slater_file={tmp_path / 'none.slater'}", *SMALL]) == 1
    assert capsys.readouterr().err.startswith("error: ")


def test_malformed_slater_file(tmp_path, out, capsys):
    path = tmp_path / "bad.slater"
    path.write_text("1.0 1\n")
    assert main(["bands", f"--output_dir={out}", f"--slater_file={path}", *SMALL]) == 1
    assert capsys.readouterr().err.startswith("error: ParseError:")


# -----------------------------------------------------------------------------
# Crystal commands on small grids
# -----------------------------------------------------------------------------


def test_bands(out):
    assert main(["bands", f"--output_dir={out}", "--n_bands=6", *SMALL]) == 0
    _, columns, rows = _read(out / "bands.csv")
    assert columns == ["i", "i_n", "k_inv_angstrom", "E_perp_eV", "subbarrier_flag"]
    assert len(rows) == 6 * 2
    ground = [float(r[3]) for r in rows if r[0] == "0"]
    assert all(0 < e < 28.5 for e in ground)
    assert {r[4] for r in rows} <= {"0", "1"}
    assert rows[0][4] == "1"


def test_angular(out):
    args = [
        "angular",
        f"--output_dir={out}",
        "--Theta_grid=[0.0, 0.01, 3]",
        "--Phi_grid=[0.0, 3.0, 2]",
        "--angular_band=0",
        "--angular_k=0",
        *SMALL,
    ]
    assert main(args) == 0
    _, columns, rows = _read(out / "angular.csv")
    assert columns == ["theta_rad", "phi_rad", "dsigma_barn_sr", "homega_mev"]
    assert len(rows) == 6
    assert all(float(r[2]) >= 0 for r in rows)
    assert all(float(r[3]) == pytest.approx(60.509, abs=0.01) for r in rows)
    _, columns, screen = _read(out / "screen.csv")
    assert columns == ["x_rel", "y_rel", "dsigma_barn_sr"]
    assert len(screen) == 6
    assert float(screen[0][0]) == 0.0


def test_sigma_max_threads_do_not_change_results(out):
    base = ["sigma-max", "--E_par_range=[60, 80]", "--k=[0]", "--bands=[0]", *SMALL]
    assert main([*base, f"--output_dir={out / 'one'}"]) == 0
    assert main([*base, f"--output_dir={out / 'two'}", "--threads=2"]) == 0

    _, columns, rows = _read(out / "one" / "sigma_max.csv")
    assert columns == ["E_par_mev", "k", "band_i", "theta_max_rad", "dsigma_max_barn_sr", "n_subbarrier_bands"]
    assert [r[0] for r in rows] == ["60.0", "80.0"]
    assert all(float(r[4]) > 0 for r in rows)
    _, _, threaded = _read(out / "two" / "sigma_max.csv")
    assert threaded == rows

    _, fit_columns, fits = _read(out / "one" / "fit.csv")
    assert fit_columns == ["k", "band_i", "sigma0_barn_sr", "eta", "max_relative_error", "n_points"]
    assert len(fits) == 1
    assert fits[0][-1] == "2"
    assert float(fits[0][3]) > 0


def test_angular_all_bands(out):
    common = ["angular", "--Theta_grid=[0.0, 0.2, 5]", "--Phi_grid=[0.0, 3.0, 2]", "--angular_k=0.5", *SMALL]
    assert main([*common, f"--output_dir={out / 'all'}", "--angular_band=all"]) == 0
    config, _, rows = _read(out / "all" / "angular.csv")
    assert config["angular_band"] == "all"
    assert len(rows) == 10
    assert all(float(r[2]) >= 0 for r in rows)
    assert any(float(r[2]) > 0 for r in rows)


@pytest.mark.parametrize(
    "command, args, files",
    [
        ("angular", ["--Theta_grid=[0.0, 0.2, 3]", "--Phi_grid=[0.0, 3.0, 2]", "--angular_band=0"], ["angular.csv", "screen.csv"]),
        ("sigma-max", ["--E_par_range=[60, 70]", "--k=[0, 0.5]", "--bands=[0, 2]", "--threads=2"], ["sigma_max.csv", "fit.csv"]),
    ],
)
def test_scans_are_reproducible(out, command, args, files):
    full = [command, f"--output_dir={out}", *args, *SMALL]
    assert main(full) == 0
    first = {name: (out / name).read_bytes() for name in files}
    assert main(full) == 0
    assert {name: (out / name).read_bytes() for name in files} == first


def test_multi_term_slater_file_feeds_angular_scan(tmp_path, out):
    path = tmp_path / "si_split.slater"
    path.write_text("Z 14\n0.6 1 13.5745\n0.4 1 13.5745\n")
    common = ["angular", "--Theta_grid=[0.05, 0.2, 4]", "--Phi_grid=[0.0, 3.0, 2]", "--angular_band=0", *SMALL]
    assert main([*common, f"--output_dir={out / 'one'}"]) == 0
    assert main([*common, f"--output_dir={out / 'split'}", f"--slater_file={path}"]) == 0
    _, _, single = _read(out / "one" / "angular.csv")
    config, _, split = _read(out / "split" / "angular.csv")
    assert config["slater_file"] == str(path)
    for a, b in zip(single, split):
        assert float(b[2]) == pytest.approx(float(a[2]), rel=1e-10)
