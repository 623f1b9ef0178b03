import json
import math

import numpy as np
import pytest

from crackdyn.config import ConfigError, build_load, build_simulation, load_config, parse_config
from crackdyn.modal_solver import modal_basis

PHYS = {"length": 2.0, "youngs_modulus": 2.1e11, "area_moment": 1e-8,
        "cross_section_area": 1e-4, "density": 7850.0}


def test_nondim_document():
    p = parse_config({"nondim": {"crack_positions": [1.0], "flexibilities": [0.5], "beta": -1.0},
                      "modal": {"n_modes": 4, "scan_step": 0.02}})
    assert p.model.crack_positions == (1.0,) and p.model.beta == -1.0
    assert p.physical is None and p.summary is None
    assert p.n_modes == 4 and p.scan == {"step": 0.02}


def test_physical_document():
    doc = {"physical": dict(PHYS, cracks=[{"position": 1.0, "kind": "double_sided", "depth_ratio": 0.2}])}
    p = parse_config(doc)
    assert p.model.crack_positions == (math.pi / 2,)
    assert p.summary.omega0 > 0
    assert p.n_modes == 16


@pytest.mark.parametrize("doc, path", [
    ({"nondim": {}, "extra": 1}, "config.extra: unknown key"),
    ({"nondim": {"bta": 1}}, "config.nondim.bta: unknown key"),
    ({"physical": dict(PHYS, cracks=[{"position": 1.0, "kind": "direct", "flex": 1}])},
     "config.physical.cracks[0].flex: unknown key"),
    ({"physical": dict(PHYS, length=-2.0)}, "config.physical.length"),
    ({"physical": {k: v for k, v in PHYS.items() if k != "density"}}, "config.physical"),
    ({"nondim": {"flexibilities": [0.0]}}, "config.nondim.flexibilities[0]"),
    ({"nondim": {}, "modal": {"n_modes": 0}}, "config.modal.n_modes"),
    ({"nondim": {}, "simulation": {"model_kind": "plate", "t_final": 1, "dt": 0.1}},
     "config.simulation.model_kind"),
    ({"nondim": {}, "physical": PHYS}, "exactly one"),
    ({}, "exactly one"),
    ({"nondim": {"crack_positions": [1.0], "flexibilities": [1.0, 2.0]}}, "config.nondim"),
    ({"physical": dict(PHYS, cracks=[{"position": 1.0, "kind": "direct"}])},
     "config.physical.cracks[0].flexibility"),
    ({"physical": dict(PHYS, cracks=[{"position": 1.0, "kind": "single_sided"}])},
     "config.physical.cracks[0].depth_ratio"),
    ({"physical": dict(PHYS, cracks=[{"position": 3.0, "kind": "direct", "flexibility": 1e-3}])},
     "config.physical"),
    ([], "config: top level"),
])
def test_rejections_are_path_qualified(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert path in str(info.value)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{\"nondim\": ")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(bad)


def test_build_simulation_and_load():
    sim = {"model_kind": "arch", "t_final": 1.0, "dt": 0.01, "record_every": 5,
           "initial": {"modal": [0.1, 0.2], "velocity": [0.0, 0.0, 0.3]},
           "load": {"kind": "uniform", "p0": 2.0, "profile": {"type": "sinusoid", "omega": 1.5}}}
    p = parse_config({"nondim": {}, "simulation": sim})
    basis = modal_basis(p.model, 4)
    cfg = build_simulation(p.simulation, basis)
    np.testing.assert_array_equal(cfg.initial_state.c, [0.1, 0.2, 0, 0])
    np.testing.assert_array_equal(cfg.initial_state.v, [0, 0, 0.3, 0])
    assert cfg.record_every == 5
    load = build_load(p.simulation)
    assert load.kind == "uniform" and load.omega == 1.5 and load.amplitude == 1.0


def test_build_simulation_rejects_long_initial():
    p = parse_config({"nondim": {}, "simulation": {"model_kind": "beam", "t_final": 1, "dt": 0.1,
                                                   "initial": {"modal": [1, 2, 3]}}})
    with pytest.raises(ConfigError, match="config.simulation.initial.modal"):
        build_simulation(p.simulation, modal_basis(p.model, 2))


def test_uniform_initial_profile():
    p = parse_config({"nondim": {}, "simulation": {"model_kind": "beam", "t_final": 1, "dt": 0.1,
                                                   "initial": {"uniform": 1.0}}})
    cfg = build_simulation(p.simulation, modal_basis(p.model, 3))
    expected = math.sqrt(2 / math.pi) * np.array([2.0, 0.0, 2.0 / 3.0])
    np.testing.assert_allclose(cfg.initial_state.c, expected, atol=1e-12)


@pytest.mark.parametrize("load, key", [({"kind": "uniform"}, "p0"), ({"kind": "modal"}, "modal"),
                                        ({"kind": "zero", "profile": {"type": "sinusoid"}}, "omega")])
def test_load_requirements(load, key):
    sim = {"model_kind": "beam", "t_final": 1, "dt": 0.1, "load": load}
    with pytest.raises(ConfigError, match=key):
        build_load(sim)


def test_round_trip_through_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"nondim": {"crack_positions": [2.0], "flexibilities": [3.0]}}))
    assert load_config(path).model.flexibilities == (3.0,)
