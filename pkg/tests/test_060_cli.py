import json

import numpy as np
import pytest
from pytest_cases import fixture, parametrize_with_cases
from typer.testing import CliRunner

from convmax.cli import app
from convmax.Helper import Helper
from convmax.Model import Grid, SampledFunction
from .test_060_cli_cases import GRID, CommandCases, FailureCases


@fixture
def runner() -> CliRunner:
    return CliRunner()


@fixture
def invoke(runner, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)

    def invoke(arguments: list[str], output_dir: str = "out"):
        return runner.invoke(app, [*arguments, "-o", output_dir, "-l", "WARNING"])

    return invoke


def read_artifact(path) -> dict:
    with open(path, encoding="utf-8") as f:
        return json.load(f)


@parametrize_with_cases("input", cases=CommandCases)
def test_command(invoke, tmp_path, input):
    arguments, files = input
    result = invoke(arguments)

    assert result.exit_code == 0, result.output
    for name in files:
        assert (tmp_path / "out" / name).is_file(), name

    artifact = read_artifact(tmp_path / "out" / files[0])
    assert artifact["schema_version"] == "1.0"
    assert artifact["command"] == arguments[0]
    assert artifact["config"]["grid_points"] == 256
    assert "output_dir" not in artifact["config"]
    assert len(artifact["run_id"]) == 36


def test_norms_with_equal_indices(invoke, tmp_path):
    result = invoke(["norms", "--kernel", "indicator:radius=1", "--q", "2", "--s", "2", *GRID])

    assert result.exit_code == 0, result.output
    norms = read_artifact(tmp_path / "out" / "norms.json")["result"]
    assert norms["lorentz_norm"] == pytest.approx(norms["lp_norm"], rel=1e-10)
    assert norms["inclusion_constant"] == pytest.approx(0.5)
    assert "truncation_point" not in norms


def test_decompose_certificate(invoke, tmp_path):
    result = invoke(["decompose", "--kernel", "gauss:sigma=1", "--eps", "0.1", *GRID])

    assert result.exit_code == 0, result.output
    certificate = read_artifact(tmp_path / "out" / "decompose.json")["result"]
    assert certificate["bound_total"] == pytest.approx(0.3)
    assert certificate["hls_constant"]["provenance"] == "default_formula"
    assert certificate["core_verified"]


def test_maximize_trajectory(invoke, tmp_path):
    result = invoke(["maximize", "--kernel", "gauss:sigma=1", "--max-iter", "100", *GRID])

    assert result.exit_code == 0, result.output
    header, table = Helper.read_csv(tmp_path / "out" / "maximize_trajectory.csv")
    assert header == ["iter", "phi", "rel_change"]
    assert np.isnan(table[0, 2])
    phi = table[:, 1]
    assert np.all(np.diff(phi) >= -1e-12 * phi[1:])

    summary = read_artifact(tmp_path / "out" / "maximize.json")["result"]
    assert summary["estimate"] == phi[-1]
    assert summary["iterations"] == table.shape[0] - 1
    assert summary["estimate"] <= summary["young_bound"]


def test_equal_exponents_report_fourier_symbol(invoke, tmp_path):
    result = invoke(["opnorm", "--p", "2", "--r", "2", "--equal-exponents", *GRID])

    assert result.exit_code == 0, result.output
    summary = read_artifact(tmp_path / "out" / "opnorm.json")["result"]
    assert summary["estimate"] <= summary["fourier_symbol_max"] * (1 + 1e-12)


def test_runs_are_reproducible(invoke, tmp_path):
    arguments = ["opnorm", "--seed-profile", "random", "--seed", "7", "--max-iter", "40", *GRID]
    assert invoke(arguments, "first").exit_code == 0
    assert invoke(arguments, "second").exit_code == 0

    for name in ("opnorm.json", "opnorm_trajectory.csv"):
        first = (tmp_path / "first" / name).read_bytes()
        assert first == (tmp_path / "second" / name).read_bytes()


def test_tightness_of_snapshots(invoke, kernels, tmp_path):
    grid = Grid(dim=1, half_width=8.0, points_per_axis=256)
    x = grid.axis()
    for i, centre in enumerate((0.0, 1.0, 2.0)):
        f = SampledFunction(grid=grid, values=np.exp(-((x - centre) ** 2) / 2.0))
        kernels.write_samples(f.normalized(2.0), tmp_path / "snapshots" / ("f_%02d.csv" % i))

    result = invoke(["tightness", "--sequence-dir", "snapshots", *GRID])

    assert result.exit_code == 0, result.output
    summary = read_artifact(tmp_path / "out" / "tightness.json")["result"]
    assert summary["sequence_length"] == 3
    assert not summary["report"]["escaped"]
    assert summary["max_diameter"] < 4.0


def test_tightness_of_empty_directory(invoke, tmp_path):
    (tmp_path / "snapshots").mkdir()

    assert invoke(["tightness", "--sequence-dir", "snapshots", *GRID]).exit_code == 2


@parametrize_with_cases("input", cases=FailureCases)
def test_exit_codes(invoke, tmp_path, input):
    arguments, exit_code = input
    result = invoke(arguments)

    assert result.exit_code == exit_code
    assert not (tmp_path / "out" / ("%s.json" % arguments[0])).exists()


def test_sweep(invoke, tmp_path):
    sweep = {
        "command": "decompose",
        "kernels": ["gauss:sigma=1", "power:q=%r" % (4.0 / 3.0)],
        "grid_points": [256],
        "eps": [0.5],
    }
    Helper.write_json(tmp_path / "sweep.json", sweep)
    result = invoke(["sweep", "--config", "sweep.json"])

    assert result.exit_code == 0, result.output
    directory = tmp_path / "out" / "sweep"
    records = [read_artifact(directory / ("cell_%04d.json" % i)) for i in range(2)]
    assert [r["status"] for r in records] == ["ok", "error"]
    assert records[0]["result"]["bound_total"] == pytest.approx(1.5)
    assert records[1]["exit_code"] == 2

    for record in records:
        Helper.validate_json_schema(record, "SweepCell.json")
        assert record["schema_version"] == "1.0"
        assert len(record["run_id"]) == 36
        assert record["config"]["exponents"]["q"] == pytest.approx(4.0 / 3.0)
        assert record["config"]["hls"]["C"] == 1.0
        assert record["config"]["max_iter"] == 500
        assert record["config"]["thresholds"]["points_per_decade"] == 32
    assert records[0]["config"]["kernel"] == "gaussian:sigma=1.0"
    assert records[0]["run_id"] != records[1]["run_id"]

    lines = (directory / "sweep.csv").read_text().splitlines()
    assert lines[0] == "index,kernel,grid_points,half_width,p,r,eps,status,exit_code,value"
    assert len(lines) == 3
    assert lines[2].endswith(",error,2,")


def test_sweep_cell_with_invalid_kernel(invoke, tmp_path):
    sweep = {"command": "norms", "kernels": ["banana:x=1"], "grid_points": [64]}
    Helper.write_json(tmp_path / "sweep.json", sweep)

    assert invoke(["sweep", "--config", "sweep.json"]).exit_code == 0
    record = read_artifact(tmp_path / "out" / "sweep" / "cell_0000.json")
    Helper.validate_json_schema(record, "SweepCell.json")
    assert record["status"] == "error"
    assert record["exit_code"] == 2
    assert record["run_id"] is None
    assert record["config"] is None
    assert record["schema_version"] == "1.0"


def test_sweep_is_independent_of_workers(invoke, tmp_path):
    sweep = {
        "command": "norms",
        "kernels": ["gauss:sigma=1", "indicator:radius=1"],
        "grid_points": [128, 256],
    }
    Helper.write_json(tmp_path / "one.json", sweep)
    Helper.write_json(tmp_path / "two.json", dict(sweep, workers=2))

    assert invoke(["sweep", "-c", "one.json"], "one").exit_code == 0
    assert invoke(["sweep", "-c", "two.json"], "two").exit_code == 0
    first = (tmp_path / "one" / "sweep" / "sweep.csv").read_bytes()
    assert first == (tmp_path / "two" / "sweep" / "sweep.csv").read_bytes()


@pytest.mark.parametrize(
    "sweep",
    [
        {"command": "norms", "kernels": []},
        {"command": "sweep", "kernels": ["gauss:sigma=1"]},
        {"command": "norms", "kernels": ["gauss:sigma=1"], "grid_points": [7]},
        {"command": "norms", "kernels": ["gauss:sigma=1"], "colour": "red"},
    ],
)
def test_invalid_sweep(invoke, tmp_path, sweep):
    Helper.write_json(tmp_path / "sweep.json", sweep)

    assert invoke(["sweep", "--config", "sweep.json"]).exit_code == 2
    assert not (tmp_path / "out" / "sweep" / "sweep.csv").exists()
