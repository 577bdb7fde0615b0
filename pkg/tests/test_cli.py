import json

import numpy as np
import pytest

from qbsim.cli import main
from qbsim.errors import ConfigError
from qbsim.presets import PRESET_NAMES, ScenarioConfig, preset


@pytest.fixture
def small_config(tmp_path):
    cfg = preset("fig3a")
    cfg = ScenarioConfig(
        params=cfg.params.replace(n_cavities=21),
        model=cfg.model, photon_site=cfg.photon_site,
        t_max=5.0, dt=0.05, unit=cfg.unit, label="small",
    )
    path = tmp_path / "small.json"
    cfg.to_json(path)
    return cfg, path


class TestScenarioConfig:
    def test_round_trip_all_presets(self, tmp_path):
        for name in PRESET_NAMES:
            cfg = preset(name)
            path = tmp_path / f"{name}.json"
            cfg.to_json(path)
            assert ScenarioConfig.from_json(path) == cfg

    def test_unknown_top_level_key(self):
        data = preset("fig3a").to_dict()
        data["tmax"] = 3.0
        with pytest.raises(ConfigError, match="tmax"):
            ScenarioConfig.from_dict(data)

    def test_unknown_param_key(self):
        data = preset("fig3a").to_dict()
        data["params"]["coupling"] = 1.0
        with pytest.raises(ConfigError, match="params.coupling"):
            ScenarioConfig.from_dict(data)

    def test_bad_schema_version(self):
        data = preset("fig3a").to_dict()
        data["schema_version"] = 2
        with pytest.raises(ConfigError, match="schema_version"):
            ScenarioConfig.from_dict(data)

    def test_invalid_xi_names_field(self):
        data = preset("fig3a").to_dict()
        data["params"]["xi"] = -1.0
        with pytest.raises(ConfigError, match="xi"):
            ScenarioConfig.from_dict(data)


class TestCli:
    def test_invalid_xi_exit_code_2(self, tmp_path, capsys):
        data = preset("fig3a").to_dict()
        data["params"]["xi"] = 0.0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        code = main(["--out", str(tmp_path / "out"), "run", str(path)])
        assert code == 2
        assert "xi" in capsys.readouterr().err

    def test_run_twice_byte_identical(self, small_config, tmp_path, capsys):
        cfg, path = small_config
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert main(["--out", str(out1), "run", str(path)]) == 0
        assert main(["--out", str(out2), "run", str(path)]) == 0
        capsys.readouterr()
        assert (out1 / "small_series.csv").read_bytes() == (out2 / "small_series.csv").read_bytes()

    def test_analytic_model_single_state_no_oscillation(self, tmp_path, capsys):
        base = preset("fig3b")
        cfg = ScenarioConfig(params=base.params.replace(n_cavities=21), model="analytic",
                             photon_site=0, t_max=50.0, dt=0.1, unit="xi", label="one_pole")
        path = tmp_path / "one.json"
        cfg.to_json(path)
        assert main(["--out", str(tmp_path / "out"), "run", str(path)]) == 0
        capsys.readouterr()
        rows = np.genfromtxt(tmp_path / "out" / "one_pole_series.csv", delimiter=",", names=True)
        p = rows["p_dark"]
        tail = p[len(p) // 3:]
        assert np.all(np.diff(tail) <= 1e-12)  # pure decay, no oscillation

    def test_bound_states_and_atom_spectrum(self, small_config, tmp_path, capsys):
        _, path = small_config
        out = tmp_path / "out"
        assert main(["--out", str(out), "bound-states", str(path)]) == 0
        assert main(["--out", str(out), "atom-spectrum", str(path)]) == 0
        capsys.readouterr()
        bs = json.loads((out / "bound_states.json").read_text())
        assert {"e1", "band", "count", "states"} <= set(bs)
        spec = json.loads((out / "atom_spectrum.json").read_text())
        assert len(spec["energies_exact"]) == 3

    def test_fit_decay_command(self, tmp_path, capsys):
        t = np.linspace(0, 60, 601)
        p = np.exp(-0.04 * t)
        csv = tmp_path / "series.csv"
        with open(csv, "w") as fh:
            fh.write("t,p_dark\n")
            for ti, pi in zip(t, p):
                fh.write(f"{ti},{pi}\n")
        assert main(["--out", str(tmp_path / "out"), "fit-decay", str(csv)]) == 0
        capsys.readouterr()
        fit = json.loads((tmp_path / "out" / "fit_decay.json").read_text())
        assert fit["rate"] == pytest.approx(0.04, rel=1e-6)

    def test_reproduce_rejects_unknown_figure(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["--out", str(tmp_path), "reproduce", "fig9"])

    def test_numerical_failure_exit_code_3(self, tmp_path, capsys):
        # A series that dips to zero past the fit window cannot be log-fitted.
        t = np.linspace(0, 60, 121)
        p = np.maximum(1.0 - 0.03 * t, 0.0)
        csv = tmp_path / "bad_series.csv"
        with open(csv, "w") as fh:
            fh.write("t,p\n")
            for ti, pi in zip(t, p):
                fh.write(f"{ti},{pi}\n")
        code = main(["--out", str(tmp_path / "out"), "fit-decay", str(csv)])
        assert code == 3
        assert "numerical failure" in capsys.readouterr().err

    def test_run_full_and_lindblad_models(self, tmp_path, capsys):
        base = preset("fig3a")
        for model in ("full", "lindblad"):
            cfg = ScenarioConfig(params=base.params.replace(n_cavities=21),
                                 model=model, photon_site=0, t_max=2.0, dt=0.05,
                                 unit="xi", label=model)
            path = tmp_path / f"{model}.json"
            cfg.to_json(path)
            assert main(["--out", str(tmp_path / "out"), "run", str(path)]) == 0
            capsys.readouterr()
            assert (tmp_path / "out" / f"{model}_series.csv").exists()

    def test_full_precision_csv(self, small_config, tmp_path, capsys):
        _, path = small_config
        out = tmp_path / "out"
        assert main(["--out", str(out), "run", str(path)]) == 0
        capsys.readouterr()
        lines = (out / "small_series.csv").read_text().splitlines()
        # a norm2 column value written with 17 significant digits round-trips
        val = lines[40].split(",")[2]
        assert float(val) == float(f"{float(val):.17g}")
        assert len(val.replace(".", "").replace("-", "").lstrip("0")) >= 16
