import json

import numpy as np
import pytest

from nonloc import SymmetricState, dicke_expand, fileio
from nonloc.cli import main
from nonloc.measure import MeasurementSettings, Ray


@pytest.fixture
def ghz_files(tmp_path, ghz3_solution):
    state = tmp_path / "state.json"
    settings = tmp_path / "settings.json"
    fileio.write_json(state, fileio.state_payload(
        dicke_expand(SymmetricState.ghz(3, np.pi / 4))))
    fileio.write_json(settings, fileio.settings_payload(ghz3_solution.settings))
    return state, settings


def test_distribution_ghz_z_settings(tmp_path):
    state = tmp_path / "state.json"
    settings = tmp_path / "settings.json"
    out = tmp_path / "dist.json"
    fileio.write_json(state, fileio.state_payload(
        dicke_expand(SymmetricState.ghz(3, np.pi / 4))))
    z = MeasurementSettings.identical(3, Ray(1.0, 0.0), Ray(1.0, 1.0))
    fileio.write_json(settings, fileio.settings_payload(z))
    assert main(["distribution", str(state), str(settings), str(out)]) == 0
    table = json.loads(out.read_text())
    assert abs(table["p"][0][0] - 0.5) < 1e-12
    assert abs(table["p"][0][7] - 0.5) < 1e-12
    assert "payload_sha256" in table["manifest"]


def test_distribution_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = tmp_path / "out.json"
    assert main(["distribution", str(bad), str(bad), str(out)]) == 2
    assert "error" in capsys.readouterr().err


def test_distribution_dimension_mismatch(tmp_path, capsys):
    state = tmp_path / "state.json"
    settings = tmp_path / "settings.json"
    fileio.write_json(state, fileio.state_payload(
        dicke_expand(SymmetricState.ghz(3, np.pi / 4))))
    z4 = MeasurementSettings.identical(4, Ray(1.0, 0.0), Ray(1.0, 1.0))
    fileio.write_json(settings, fileio.settings_payload(z4))
    assert main(["distribution", str(state), str(settings),
                 str(tmp_path / "out.json")]) == 2
    assert "dimension mismatch" in capsys.readouterr().err


def test_hardy_pass_and_fail(tmp_path, ghz_files, capsys):
    state, settings = ghz_files
    assert main(["hardy", "--state", str(state),
                 "--settings", str(settings)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert report["ineq1"] > 0

    product = tmp_path / "product.json"
    amps = np.zeros(8)
    amps[0] = 1.0
    from nonloc import PureState
    fileio.write_json(product, fileio.state_payload(PureState(3, amps)))
    assert main(["hardy", "--state", str(product),
                 "--settings", str(settings)]) == 1


def test_hardy_from_distribution_file(tmp_path, ghz_files):
    state, settings = ghz_files
    dist = tmp_path / "dist.json"
    assert main(["distribution", str(state), str(settings), str(dist)]) == 0
    assert main(["hardy", "--distribution", str(dist)]) == 0


def test_symmetric_ghz_fixture(capsys):
    assert main(["symmetric", "--ghz", "3", "0.7853981633974483",
                 "--x", "0,2"]) == 0
    sol = json.loads(capsys.readouterr().out)
    assert abs(sol["y1"][0] - 0.25) < 1e-10
    assert abs(sol["y"][1] - 8.0) < 1e-10
    assert abs(sol["x1"][0] - 0.0625) < 1e-10
    assert abs(sol["p_success"] - 72 / 6425) < 1e-10


def test_symmetric_w_fixture(capsys):
    assert main(["symmetric", "--w", "3", "--x", "1,0"]) == 0
    sol = json.loads(capsys.readouterr().out)
    assert abs(sol["p_success"] - 1 / 408) < 1e-10


def test_symmetric_excluded_x(capsys):
    assert main(["symmetric", "--ghz", "3", "0.7853981633974483",
                 "--x", "1,0"]) == 1
    assert "excluded x" in capsys.readouterr().err


def test_symmetric_rejects_ambiguous_input(tmp_path, capsys):
    assert main(["symmetric", "--ghz", "3", "0.5", "--w", "3"]) == 2


def test_symmetric_sweep(tmp_path, capsys):
    csv_path = tmp_path / "sweep.csv"
    assert main(["symmetric", "--ghz", "3", "0.7853981633974483",
                 "--out", str(tmp_path / "sol.json"),
                 "--sweep", str(csv_path)]) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "abs_x,p_success"
    assert len(lines) > 50
    moduli = [float(row.split(",")[0]) for row in lines[1:]]
    assert all(abs(t - 1.0) > 1e-3 for t in moduli)


def test_classify_uniform_table(tmp_path, capsys):
    dist = tmp_path / "uniform.json"
    from nonloc import JointDistribution
    fileio.write_json(dist, fileio.distribution_payload(
        JointDistribution(3, np.full((8, 8), 1 / 8))))
    assert main(["classify", str(dist)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["label"] == "local"
    assert out["outcome"]["feasible"] is True


def test_classify_ghz_hardy(tmp_path, ghz_files, capsys):
    state, settings = ghz_files
    dist = tmp_path / "dist.json"
    main(["distribution", str(state), str(settings), str(dist)])
    assert main(["classify", str(dist)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["label"] == "genuinely-nonlocal"
    assert out["outcome"]["margin"] > 1e-6


def test_classify_rejects_two_parties(tmp_path, capsys):
    dist = tmp_path / "d2.json"
    from nonloc import JointDistribution
    fileio.write_json(dist, fileio.distribution_payload(
        JointDistribution(2, np.full((4, 4), 0.25))))
    assert main(["classify", str(dist)]) == 2


def test_experiment_reruns_are_byte_identical(tmp_path, capsys):
    args = ["experiment", "--n", "3", "--count", "3", "--seed", "5",
            "--multistarts", "8"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    summary = json.loads((tmp_path / "a.json").read_text())
    assert summary["passed"] == 3


def test_experiment_env_seed(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NONLOC_SEED", "5")
    args = ["experiment", "--n", "3", "--count", "3", "--multistarts", "8"]
    assert main(args + ["--out", str(tmp_path / "c")]) == 0
    monkeypatch.undo()
    assert main(["experiment", "--n", "3", "--count", "3", "--multistarts", "8",
                 "--seed", "5", "--out", str(tmp_path / "d")]) == 0
    assert (tmp_path / "c.csv").read_bytes() == (tmp_path / "d.csv").read_bytes()


def test_experiment_invalid_n(capsys):
    assert main(["experiment", "--n", "7", "--count", "1"]) == 2


def test_vertices_dump(tmp_path):
    out = tmp_path / "vertices.json"
    assert main(["vertices", "--model", "bilocal-ns", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["model"] == "bilocal-ns"
    assert len(doc["columns"]) == 288
    local = tmp_path / "local.json"
    assert main(["vertices", "--model", "local", "--n", "2", str(local)]) == 0
    assert len(json.loads(local.read_text())["columns"]) == 16


def test_verify_appendix(capsys):
    assert main(["verify-appendix"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["passed"] is True
    assert doc["vertices"] == 288


def test_usage_error_exit_code(capsys):
    assert main(["no-such-command"]) == 2
    assert main([]) == 2
