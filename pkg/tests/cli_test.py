import csv
import json

import pytest

from qevo.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, main
from qevo.config import load_config
from qevo.core.circuit import Circuit, load_circuit, op, save_circuit

DESK_CONFIG = """
[run]
progress_bar = false

[population]
size = 12
min_depth = 2
max_depth = 6
elite_count = 1
immigrant_count = 2
tournament_k = 2

[evolutionary]
generations = 3

[parallel]
mode = "serial_batch"
"""


@pytest.fixture
def bell_path(tmp_path):
    path = tmp_path / "bell.json"
    save_circuit(Circuit(2, [op("H", 0), op("CNOT", 0, 1)]), path)
    return path


@pytest.fixture
def config_path(tmp_path):
    path = tmp_path / "desk.toml"
    path.write_text(DESK_CONFIG)
    return path


@pytest.fixture
def dataset_path(tmp_path):
    path = tmp_path / "targets.jsonl"
    code = main(
        [
            "dataset", "gen", "--qubits", "2", "--count", "2", "--seed", "4",
            "--depth-min", "2", "--depth-max", "4", "--lenient", "--out", str(path),
        ]
    )
    assert code == EXIT_OK
    return path


#
# USAGE
#


def test_help_config(capsys):
    assert main(["--help", "config"]) == EXIT_OK
    out = capsys.readouterr().out
    for section in ("[run]", "[population]", "[island]", "[fitness]", "[evolutionary]", "[parallel]"):
        assert section in out


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        [],
        ["run"],
        ["dataset", "gen", "--qubits", "four", "--count", "1", "--out", "x"],
        ["-v", "-q", "optimize", "c.json"],
        ["tune", "--stage", "3", "--bounds", "b", "--budget", "1", "--dataset", "d"],
    ],
)
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE


def test_help(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "qevo" in capsys.readouterr().out


#
# CIRCUITS
#


def test_simulate(bell_path, capsys):
    assert main(["simulate", str(bell_path)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "|11>  +0.707107" in out
    assert "fidelity to |00>: 0.500000" in out


def test_simulate_json(bell_path, capsys):
    assert main(["--json", "simulate", str(bell_path), "--target", str(bell_path)]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["n_qubits"] == 2
    assert data["fidelity_to_target"] == pytest.approx(1.0)
    assert data["depth"] == 2


def test_optimize(tmp_path, capsys):
    source = tmp_path / "circuit.json"
    save_circuit(Circuit(1, [op("T", 0), op("T", 0), op("H", 0), op("H", 0)]), source)
    output = tmp_path / "optimized.json"
    assert main(["--json", "optimize", str(source), "-o", str(output)]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["before"] == {"depth": 4, "t_count": 2}
    assert data["after"] == {"depth": 1, "t_count": 0}
    assert load_circuit(output) == Circuit(1, [op("S", 0)])


def test_json_after_the_subcommand(bell_path, capsys):
    assert main(["simulate", str(bell_path), "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["n_qubits"] == 2


def test_malformed_circuit(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n_qubits": 1, "ops": [{"gate": "RX", "wires": [0]}]}')
    assert main(["simulate", str(path)]) == EXIT_INVALID


#
# DATASETS
#


def test_dataset_verify(dataset_path, capsys):
    assert main(["--json", "dataset", "verify", str(dataset_path)]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 2


def test_strict_dataset_ranges(tmp_path):
    out = tmp_path / "d.jsonl"
    assert main(["dataset", "gen", "--qubits", "2", "--count", "1", "--out", str(out)]) == EXIT_INVALID


def test_tampered_dataset(dataset_path):
    lines = dataset_path.read_text().splitlines()
    record = json.loads(lines[0])
    record["statevector"][0][0] += 0.5
    lines[0] = json.dumps(record)
    dataset_path.write_text("\n".join(lines) + "\n")
    assert main(["dataset", "verify", str(dataset_path)]) == EXIT_INVALID


#
# EXPERIMENTS
#


def test_invalid_config(tmp_path, dataset_path):
    path = tmp_path / "bad.toml"
    path.write_text("[evolutionary]\nmutation_rate = 1.5\n")
    assert main(["run", "--config", str(path), "--dataset", str(dataset_path)]) == EXIT_INVALID


def test_missing_config(tmp_path, dataset_path):
    path = tmp_path / "absent.toml"
    assert main(["run", "--config", str(path), "--dataset", str(dataset_path)]) == EXIT_INVALID


def test_run_is_reproducible(tmp_path, config_path, dataset_path):
    for out in ("first", "second"):
        code = main(
            [
                "run", "--config", str(config_path), "--dataset", str(dataset_path),
                "--seed", "9", "--out", str(tmp_path / out),
            ]
        )
        assert code == EXIT_OK
    first = (tmp_path / "first" / "runs.csv").read_bytes()
    assert first == (tmp_path / "second" / "runs.csv").read_bytes()

    report = json.loads((tmp_path / "first" / "run_report.json").read_text())
    assert len(report["runs"]) == 2
    assert report["config"]["run"]["seed"] == 9
    assert load_config(tmp_path / "first" / "config.toml").run.seed == 9


def test_run_selected_target(config_path, dataset_path, capsys):
    target = json.loads(dataset_path.read_text().splitlines()[1])["id"]
    code = main(
        [
            "--json", "run", "--config", str(config_path), "--dataset", str(dataset_path),
            "--seed", "1", "--target", target, "--strategies", "swap,delete",
        ]
    )
    assert code == EXIT_OK
    (summary,) = json.loads(capsys.readouterr().out)
    assert summary["target_id"] == target
    assert summary["strategies"] == ["delete", "swap"]


def test_run_unknown_target(config_path, dataset_path):
    code = main(
        [
            "run", "--config", str(config_path), "--dataset", str(dataset_path),
            "--seed", "1", "--target", "nope",
        ]
    )
    assert code == EXIT_INVALID


def test_study_commands(config_path, dataset_path, capsys):
    code = main(
        [
            "study", "--config", str(config_path), "--dataset", str(dataset_path),
            "--seed", "1", "--strategies", "all", "--seeds", "1,2", "--print-commands",
        ]
    )
    assert code == EXIT_OK
    commands = capsys.readouterr().out.splitlines()
    assert len(commands) == 15 * 2 * 2
    assert all(c.startswith("qevo run --config ") for c in commands)


def test_study(tmp_path, config_path, dataset_path):
    out = tmp_path / "study"
    code = main(
        [
            "study", "--config", str(config_path), "--dataset", str(dataset_path),
            "--seed", "1", "--strategies", "swap", "--strategies", "swap,delete",
            "--seeds", "1", "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    with open(out / "summary.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert sorted(r["strategies"] for r in rows) == ["delete+swap", "swap"]
    assert (out / "ranking.txt").exists()


def test_tune(tmp_path, config_path, dataset_path):
    bounds = tmp_path / "bounds.toml"
    bounds.write_text("[evolutionary]\nmutation_rate = { low = 0.1, high = 0.5 }\n")
    out = tmp_path / "tune"
    code = main(
        [
            "tune", "--stage", "2", "--bounds", str(bounds), "--budget", "2",
            "--dataset", str(dataset_path), "--config", str(config_path), "--seed", "1",
            "--subset", "1", "--enqueue", '{"evolutionary.mutation_rate": 0.3}',
            "--out", str(out),
        ]
    )
    assert code == EXIT_OK
    with open(out / "trials.csv", newline="") as f:
        trials = list(csv.DictReader(f))
    assert len(trials) == 2
    assert json.loads(trials[0]["params"]) == {"evolutionary.mutation_rate": 0.3}
    assert all(0.0 <= float(t["mean_fidelity"]) <= 1.0 for t in trials)
    assert all(float(t["mean_depth"]) >= 1 for t in trials)
    best = load_config(out / "best.toml")
    assert 0.1 <= best.evolutionary.mutation_rate <= 0.5


def test_tune_outside_the_wider_bounds(tmp_path, config_path, dataset_path):
    wider = tmp_path / "stage1.toml"
    wider.write_text("[evolutionary]\nmutation_rate = { low = 0.1, high = 0.4 }\n")
    bounds = tmp_path / "stage2.toml"
    bounds.write_text("[evolutionary]\nmutation_rate = { low = 0.2, high = 0.6 }\n")
    code = main(
        [
            "tune", "--stage", "2", "--bounds", str(bounds), "--within", str(wider),
            "--budget", "1", "--dataset", str(dataset_path), "--config", str(config_path),
        ]
    )
    assert code == EXIT_INVALID
