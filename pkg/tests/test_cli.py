import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from crackdyn.cli import main

PHYS = {"length": 2.0, "youngs_modulus": 2.1e11, "area_moment": 1e-8, "cross_section_area": 1e-4,
        "density": 7850.0, "axial_force": 50.0, "section_height": 0.01,
        "cracks": [{"position": 0.6, "kind": "double_sided", "depth_ratio": 0.3},
                   {"position": 1.3, "kind": "single_sided", "depth_ratio": 0.2}]}


def write(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_flexibility(capsys):
    assert run(capsys, "flexibility", "--kind", "double", "--ratio", "0", "--height", "1")[1] == "0\n"
    code, out, _ = run(capsys, "flexibility", "--kind", "double", "--ratio", "0.5", "--height", "1")
    assert code == 0 and out == "4.28797944784\n"
    code, out, _ = run(capsys, "flexibility", "--kind", "single_sided", "--ratio", "0.2")
    assert float(out) == pytest.approx(6 * math.pi * 0.04 * (0.6384 - 0.207 + 0.148804 - 0.0414184
                                                             + 0.0120848 - 0.00234624), rel=1e-11)


def test_flexibility_domain_error(capsys):
    code, _, err = run(capsys, "flexibility", "--kind", "double", "--ratio", "1.2")
    assert code == 2 and "ratio" in err


def test_nondim_identity_scale(tmp_path, capsys):
    cfg = write(tmp_path, {"physical": {"length": math.pi, "youngs_modulus": 1, "area_moment": 1,
                                        "cross_section_area": 1, "density": 1, "damping": 0.25,
                                        "cracks": [{"position": 1.0, "kind": "direct", "flexibility": 0.5}]}})
    code, out, _ = run(capsys, "nondim", "--config", cfg)
    doc = json.loads(out)
    assert code == 0
    assert doc["nondim"] == {"crack_positions": [1.0], "flexibilities": [0.5], "beta": 0.0,
                             "c_d": 0.25, "mu": 0.0}
    assert doc["summary"]["omega0"] == 1.0


def test_nondim_no_cracks(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}})
    doc = json.loads(run(capsys, "nondim", "--config", cfg)[1])
    assert doc["nondim"]["crack_positions"] == [] and doc["summary"] is None


def test_modal_uniform(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}})
    code, out, _ = run(capsys, "modal", "--config", cfg, "--modes", "5")
    table = rows(out)
    assert code == 0
    assert table[0] == ["k", "lambda", "lambda4", "omega_physical"]
    lams = [float(r[1]) for r in table[1:]]
    np.testing.assert_allclose(lams, [1, 2, 3, 4, 5], atol=1e-10)
    assert all(r[3] == "" for r in table[1:])


def test_modal_midpoint(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {"crack_positions": [math.pi / 2], "flexibilities": [1.0]}})
    lams = [float(r[1]) for r in rows(run(capsys, "modal", "--config", cfg, "--modes", "4")[1])[1:]]
    assert lams[1] == pytest.approx(2.0, abs=1e-10) and lams[3] == pytest.approx(4.0, abs=1e-10)


def test_modal_physical_frequencies(tmp_path, capsys):
    from crackdyn.config import load_config
    cfg = write(tmp_path, {"physical": PHYS})
    table = rows(run(capsys, "modal", "--config", cfg, "--modes", "3")[1])
    omega0 = load_config(cfg).summary.omega0
    for r in table[1:]:
        assert float(r[3]) == pytest.approx(float(r[1]) ** 2 * omega0, rel=1e-14)


def test_unit_discipline(tmp_path, capsys):
    phys = write(tmp_path, {"physical": PHYS})
    doc = json.loads(run(capsys, "nondim", "--config", phys)[1])
    nd = write(tmp_path, {"nondim": doc["nondim"]}, "nd.json")
    a = rows(run(capsys, "modal", "--config", phys, "--modes", "5")[1])
    b = rows(run(capsys, "modal", "--config", nd, "--modes", "5")[1])
    assert [r[1] for r in a] == [r[1] for r in b]


def test_modal_shapes(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {"crack_positions": [1.0], "flexibilities": [2.0]}})
    shapes = tmp_path / "shapes.csv"
    out = tmp_path / "modes.csv"
    assert run(capsys, "modal", "--config", cfg, "--modes", "2", "--out", str(out),
               "--shapes", str(shapes), "--grid", "11")[0] == 0
    table = rows(shapes.read_text())
    assert table[0] == ["x", "phi_1", "dphi_1", "ddphi_1", "phi_2", "dphi_2", "ddphi_2"]
    data = np.array(table[1:], dtype=float)
    assert len(data) == 13
    at_crack = data[data[:, 0] == 1.0]
    assert len(at_crack) == 2
    # left row first; the slope jumps by theta * curvature
    assert at_crack[1, 2] - at_crack[0, 2] == pytest.approx(2.0 * at_crack[1, 3], abs=1e-8)
    assert len(rows(out.read_text())) == 3


def test_simulate_zero(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}, "modal": {"n_modes": 2},
                           "simulation": {"model_kind": "arch", "t_final": 0.01, "dt": 0.001}})
    code, out, _ = run(capsys, "simulate", "--config", cfg)
    table = rows(out)
    assert table[0] == ["t", "c_1", "c_2", "v_1", "v_2", "T_k", "U_b", "U_a", "E", "balance_residual"]
    assert len(table) == 12
    assert all(float(x) == 0.0 for r in table[1:] for x in r[1:])


def test_simulate_single_mode_cosine(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}, "modal": {"n_modes": 3},
                           "simulation": {"model_kind": "beam", "t_final": 3.0, "dt": 0.001,
                                          "record_every": 100, "initial": {"modal": [1.0]}}})
    data = np.array(rows(run(capsys, "simulate", "--config", cfg)[1])[1:], dtype=float)
    np.testing.assert_allclose(data[:, 1], np.cos(data[:, 0]), atol=1e-6)


def test_simulate_damped_energy(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {"crack_positions": [1.2], "flexibilities": [0.8], "c_d": 0.2},
                           "modal": {"n_modes": 4},
                           "simulation": {"model_kind": "arch", "t_final": 2.0, "dt": 0.001,
                                          "record_every": 20, "initial": {"modal": [0.5, 0.1]}}})
    table = rows(run(capsys, "simulate", "--config", cfg)[1])
    E = np.array([float(r[table[0].index("E")]) for r in table[1:]])
    assert np.all(np.diff(E) <= 1e-9)


def test_simulate_requires_section(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}})
    code, _, err = run(capsys, "simulate", "--config", cfg)
    assert code == 2 and "config.simulation" in err


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_simulate_instability_exit(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}, "modal": {"n_modes": 10},
                           "simulation": {"model_kind": "beam", "t_final": 50.0, "dt": 0.1,
                                          "initial": {"modal": [0.1] * 10}}})
    code, _, err = run(capsys, "simulate", "--config", cfg)
    assert code == 3 and "numerical failure" in err


def test_verify_pass_and_fail(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {"crack_positions": [math.pi / 2], "flexibilities": [1.0]}})
    code, out, err = run(capsys, "verify", "--config", cfg, "--modes", "4")
    assert code == 0 and err.startswith("PASS")
    table = rows(out)
    assert table[0][:3] == ["k", "lambda_tm", "lambda_fem_100"]
    code, _, err = run(capsys, "verify", "--config", cfg, "--elements", "8")
    assert code == 4 and err.startswith("FAIL")


def test_verify_uniform_tight(tmp_path, capsys):
    cfg = write(tmp_path, {"nondim": {}})
    code, out, _ = run(capsys, "verify", "--config", cfg, "--tol", "1e-8")
    assert code == 0
    assert max(float(r[-2]) for r in rows(out)[1:]) < 1e-8


@pytest.mark.parametrize("doc, fragment", [
    ({"nondim": {}, "modal": {"n_modez": 3}}, "config.modal.n_modez: unknown key"),
    ({"nondim": {"beta": "big"}}, "config.nondim.beta"),
])
def test_malformed_config_exit_2(tmp_path, capsys, doc, fragment):
    code, _, err = run(capsys, "modal", "--config", write(tmp_path, doc))
    assert code == 2 and fragment in err


def test_missing_config_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "nondim", "--config", str(tmp_path / "nope.json"))
    assert code == 2 and "cannot read" in err


def test_modes_must_be_positive(tmp_path, capsys):
    assert run(capsys, "modal", "--config", write(tmp_path, {"nondim": {}}), "--modes", "0")[0] == 2


def test_simulate_deterministic_subprocess(tmp_path):
    cfg = write(tmp_path, {"nondim": {"crack_positions": [1.0, 2.2], "flexibilities": [0.5, 2.0], "beta": 1.0,
                                      "c_d": 0.05},
                           "modal": {"n_modes": 4},
                           "simulation": {"model_kind": "arch", "t_final": 0.5, "dt": 0.001, "record_every": 10,
                                          "initial": {"modal": [0.3, -0.1]},
                                          "load": {"kind": "uniform", "p0": 1.0,
                                                   "profile": {"type": "sinusoid", "omega": 2.0}}}})
    outs = [subprocess.run([sys.executable, "-m", "crackdyn", "simulate", "--config", cfg],
                           capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and len(outs[0]) > 1000


def test_log_level_env(tmp_path):
    cfg = write(tmp_path, {"physical": dict(PHYS, cracks=[{"position": 1.0, "kind": "double_sided",
                                                           "depth_ratio": 0.0}])})
    res = subprocess.run([sys.executable, "-m", "crackdyn", "nondim", "--config", cfg],
                         capture_output=True, text=True, env={"CRACKDYN_LOG": "error", "PATH": ""})
    assert res.returncode == 0 and res.stderr == ""
    res = subprocess.run([sys.executable, "-m", "crackdyn", "nondim", "--config", cfg],
                         capture_output=True, text=True, env={"CRACKDYN_LOG": "warn", "PATH": ""})
    assert "dropped" in res.stderr
