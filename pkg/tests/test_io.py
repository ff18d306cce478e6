import json

import numpy as np
import pytest

from chernflow import (
    ScalarField,
    StepperOptions,
    make_grid,
    make_scenario,
    random_band_limited,
    read_snapshot,
    run_flow,
    write_snapshot,
    write_trajectory_csv,
)
from chernflow.config import load_config, set_dotted, validate_config
from chernflow.errors import ConfigError
from chernflow.problem import ScenarioSpec
from chernflow.snapshots import TRAJECTORY_COLUMNS, dump_json


class TestSnapshots:
    def test_round_trip_bit_exact(self, tmp_path):
        grid = make_grid(1, (16, 16), (2.0, 0.5))
        f = random_band_limited(grid, 123, amplitude=1e-7)
        path = tmp_path / "field.txt"
        write_snapshot(f, path)
        g = read_snapshot(path)
        assert g.grid == grid
        assert np.array_equal(g.values, f.values)

    def test_round_trip_n2(self, tmp_path):
        grid = make_grid(2, (8, 8, 8, 8))
        f = random_band_limited(grid, 5)
        path = tmp_path / "field.txt"
        write_snapshot(f, path)
        assert np.array_equal(read_snapshot(path).values, f.values)

    def test_header_format(self, tmp_path):
        grid = make_grid(1, (8, 10))
        path = tmp_path / "field.txt"
        write_snapshot(ScalarField.constant(grid, 1.0), path)
        header = path.read_text().splitlines()[0]
        assert header == "torus n=1 axes=8,10 periods=1,1"

    def test_bad_header(self, tmp_path):
        path = tmp_path / "junk.txt"
        path.write_text("not a snapshot\n1.0\n")
        with pytest.raises(ConfigError):
            read_snapshot(path)

    def test_wrong_value_count(self, tmp_path):
        path = tmp_path / "short.txt"
        path.write_text("torus n=1 axes=8,8 periods=1,1\n" + "0\n" * 10)
        with pytest.raises(ConfigError):
            read_snapshot(path)


class TestTrajectoryCsv:
    def test_schema_and_parse(self, tmp_path):
        spec = ScenarioSpec(name="constant", n=1, points=(8, 8))
        bg, u0 = make_scenario(spec)
        opts = StepperOptions(method="explicit-rk4", dt_init=0.05,
                              residual_tol=1e-6, t_max=2.0, record_every=2)
        traj = run_flow(u0, bg, opts)
        path = tmp_path / "traj.csv"
        write_trajectory_csv(traj, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,E,u_min,u_max,dudt_sup,residual_sup,dissipation_mismatch,dt"
        data = np.genfromtxt(path, delimiter=",", names=True)
        assert set(data.dtype.names) == set(TRAJECTORY_COLUMNS)
        assert data["t"].size == len(traj.records)
        assert (np.diff(data["t"]) > 0).all()


class TestConfig:
    def test_load_valid(self, tmp_path):
        path = tmp_path / "ok.toml"
        path.write_text(
            '[grid]\nn = 1\npoints = 8\n\n'
            '[background]\npreset = "constant"\nseed = 3\n\n'
            '[flow]\nmethod = "imex-lagged"\ndt_init = 0.01\n')
        cfg = load_config(path)
        assert cfg["grid"]["points"] == 8
        assert cfg["background"]["seed"] == 3

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match="unknown section 'extras'"):
            validate_config({"extras": {}})

    def test_unknown_key_is_named(self):
        with pytest.raises(ConfigError, match="flow.dt_max"):
            validate_config({"flow": {"dt_max": 0.1}})

    def test_wrong_type(self):
        with pytest.raises(ConfigError, match="grid.n"):
            validate_config({"grid": {"n": "two"}})

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "missing.toml")

    def test_set_dotted(self):
        cfg = {"background": {"preset": "constant"}}
        out = set_dotted(cfg, "flow.dt_init", 0.5)
        assert out["flow"]["dt_init"] == 0.5
        assert "flow" not in cfg

    def test_set_dotted_unknown_param(self):
        with pytest.raises(ConfigError):
            set_dotted({}, "flow.warp", 1)


class TestJson:
    def test_stable_bytes(self, tmp_path):
        doc = {"b": 1.5, "a": [1, 2], "nested": {"x": -0.125}}
        t1 = dump_json(doc, tmp_path / "a.json")
        t2 = dump_json(doc, tmp_path / "b.json")
        assert t1 == t2
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
        assert json.loads(t1) == doc
