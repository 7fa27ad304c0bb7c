"""The `qevo` command line.

    qevo dataset gen --qubits 6 --count 30 --seed 1 --out targets.jsonl
    qevo dataset verify targets.jsonl
    qevo run --config desk.toml --dataset targets.jsonl --seed 1
    qevo study --config desk.toml --dataset targets.jsonl --strategies all --seeds 1,2,3,4 --out study/
    qevo tune --stage 1 --bounds bounds.toml --budget 20 --dataset targets.jsonl
    qevo optimize circuit.json -o optimized.json
    qevo simulate circuit.json --target other.json
    qevo --help config

Exit codes: 0 on success, 1 on invalid input, 2 on runtime errors and 64 on
usage errors.

"""
import argparse
import json
import logging
import secrets
import sys
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import jax
import numpy as np

from qevo.config import Config, describe_config, dump_config, load_config, override
from qevo.core.circuit import Circuit, depth, load_circuit, save_circuit, t_count
from qevo.core.simulator import simulate
from qevo.dataset import DatasetSpec, generate_dataset, load_dataset
from qevo.errors import ConfigError, InvalidInput, ParseError, ValidationError
from qevo.evolution.mutations import all_strategy_sets, parse_strategies
from qevo.experiment.report import emit_report, emit_runs
from qevo.experiment.run import RunResult, run_single
from qevo.experiment.search import hyperparameter_search, load_bounds
from qevo.experiment.study import StudyResult, run_commands, run_study
from qevo.fitness import fidelity_pure
from qevo.optimizer import optimize

__all__ = ["main"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(args, human: str, machine: Any) -> None:
    if args.json:
        print(json.dumps(machine, indent=2, sort_keys=True))
    else:
        print(human)


def _seeds(text: str) -> List[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated list of integers, got {text!r}"
        )


def _strategy_sets(values: Optional[Sequence[str]], config: Config):
    if not values:
        return [tuple(config.evolutionary.strategies)]
    sets = []
    for value in values:
        if value.strip().lower() == "all":
            sets.extend(all_strategy_sets())
        else:
            sets.append(parse_strategies(value))
    return sets


def _config(args) -> Config:
    config = load_config(getattr(args, "config", None))
    values: Dict[str, Any] = {}
    if getattr(args, "seed", None) is not None:
        values["run.seed"] = args.seed
    if args.json:
        values["run.progress_bar"] = False
    if values:
        config = override(config, values)
    if config.run.seed is None:
        seed = secrets.randbelow(2**31)
        logger.warning("cli: no seed configured, drew run.seed = %d", seed)
        config = override(config, {"run.seed": seed})
    return config


# --------------------------------------------------------------------
#                     == SUBCOMMANDS ==
# --------------------------------------------------------------------


def cmd_dataset_gen(args) -> int:
    spec = DatasetSpec(args.qubits, args.count, args.depth_min, args.depth_max, args.seed)
    summary = generate_dataset(spec, args.out, strict=not args.lenient)
    _emit(args, str(summary), summary._asdict())
    return EXIT_OK


def cmd_dataset_verify(args) -> int:
    records = load_dataset(args.path)
    depths = [depth(r.circuit) for r in records]
    human = f"{len(records)} valid record(s)"
    if depths:
        human += f", depths {min(depths)}..{max(depths)}"
    _emit(args, human, {"count": len(records), "depths": depths})
    return EXIT_OK


def _run_summary(run: RunResult) -> Dict[str, Any]:
    return {
        "target_id": run.target_id,
        "seed": run.seed,
        "strategies": [s.value for s in run.strategies],
        "generations": run.generations,
        "fidelity": run.final_best.fidelity,
        "composite": run.final_best.composite,
        "depth": run.best_candidate.depth,
        "t_count": t_count(run.best_candidate.circuit),
        "circuit": run.best_candidate.circuit.to_json(),
        "eval_mode": run.eval_mode,
        "eval_timings": run.eval_timings,
        "wall_time": run.wall_time,
    }


def cmd_run(args) -> int:
    config = _config(args)
    records = load_dataset(args.dataset)
    if args.target:
        records = [r for r in records if r.id in set(args.target)]
        if not records:
            raise InvalidInput(f"No record of {args.dataset} has id {', '.join(args.target)}.")
    strategies = parse_strategies(args.strategies) if args.strategies else None

    runs = [run_single(r, config, args.seed_index, strategies) for r in records]
    summaries = [_run_summary(r) for r in runs]

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        study = StudyResult.from_runs(runs[0].strategies, config, runs)
        emit_runs([study], out)
        report = {"config": config.model_dump(mode="json"), "runs": summaries}
        (out / "run_report.json").write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        (out / "config.toml").write_text(dump_config(config), encoding="utf-8")

    human = "\n".join(
        f"{s['target_id']} seed {s['seed']}: fidelity {s['fidelity']:.6f}"
        f" composite {s['composite']:.6f} depth {s['depth']} T {s['t_count']}"
        f" after {s['generations']} generation(s) [{s['eval_mode']}]"
        for s in summaries
    )
    _emit(args, human, summaries)
    return EXIT_OK


def cmd_study(args) -> int:
    config = _config(args)
    records = load_dataset(args.dataset)
    sets = _strategy_sets(args.strategies, config)

    if args.print_commands:
        for command in run_commands(args.dataset, args.config, records, sets, args.seeds):
            print(command)
        return EXIT_OK

    studies = run_study(
        records, sets, config, args.seeds, progress_bar=config.run.progress_bar
    )
    paths = emit_report(studies, args.out)
    human = "\n".join(
        f"{rank:>2}. {s.label:<24} {s.performance:.4f}"
        for rank, s in enumerate(studies, start=1)
    )
    machine = {
        "studies": [
            {"strategies": s.label, "mean": s.performance, "median": s.median}
            for s in studies
        ],
        "files": [str(p) for p in paths],
    }
    _emit(args, human, machine)
    return EXIT_OK


def cmd_tune(args) -> int:
    config = _config(args)
    records = load_dataset(args.dataset)
    bounds = load_bounds(args.bounds)
    enqueued = [json.loads(e) for e in args.enqueue or []]

    result = hyperparameter_search(
        args.stage,
        bounds,
        args.budget,
        records,
        config,
        jax.random.PRNGKey(config.run.seed),
        seeds=args.seeds,
        subset=args.subset,
        enqueued=enqueued,
        within=load_bounds(args.within) if args.within else None,
    )
    if args.out:
        out = Path(args.out)
        emit_report([], out, result.trials)
        (out / "best.toml").write_text(dump_config(result.best_config), encoding="utf-8")

    params = json.dumps(result.best_params, sort_keys=True)
    human = f"best score {result.best_score:.6f} with {params}"
    machine = {
        "best_score": result.best_score,
        "best_params": result.best_params,
        "trials": [t._asdict() for t in result.trials],
    }
    _emit(args, human, machine)
    return EXIT_OK


def cmd_optimize(args) -> int:
    circuit = load_circuit(args.circuit)
    optimized = optimize(circuit)
    if args.output:
        save_circuit(optimized, args.output)
    machine = {
        "before": {"depth": depth(circuit), "t_count": t_count(circuit)},
        "after": {"depth": depth(optimized), "t_count": t_count(optimized)},
        "circuit": optimized.to_json(),
    }
    human = (
        f"depth {depth(circuit)} -> {depth(optimized)},"
        f" T-count {t_count(circuit)} -> {t_count(optimized)}\n{optimized}"
    )
    _emit(args, human, machine)
    return EXIT_OK


def _amplitudes(state) -> List[List[float]]:
    return [[float(a.real), float(a.imag)] for a in np.asarray(state)]


def cmd_simulate(args) -> int:
    circuit: Circuit = load_circuit(args.circuit)
    state = simulate(circuit)
    zero = np.zeros_like(np.asarray(state))
    zero[0] = 1.0
    machine: Dict[str, Any] = {
        "n_qubits": circuit.n_qubits,
        "statevector": _amplitudes(state),
        "fidelity_to_zero": fidelity_pure(state, zero),
        "depth": depth(circuit),
        "t_count": t_count(circuit),
    }
    width = circuit.n_qubits
    lines = [
        f"|{i:0{width}b}>  {a.real:+.6f} {a.imag:+.6f}j"
        for i, a in enumerate(np.asarray(state))
    ]
    lines.append(f"fidelity to |{'0' * width}>: {machine['fidelity_to_zero']:.6f}")
    lines.append(f"depth {machine['depth']}, T-count {machine['t_count']}")

    if args.target:
        target = load_circuit(args.target)
        machine["fidelity_to_target"] = fidelity_pure(state, simulate(target))
        lines.append(f"fidelity to {args.target}: {machine['fidelity_to_target']:.6f}")
    _emit(args, "\n".join(lines), machine)
    return EXIT_OK


# --------------------------------------------------------------------
#                     == PARSER ==
# --------------------------------------------------------------------


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog="qevo",
        description="Evolve Clifford+T circuits toward target states.",
        epilog="Run `qevo --help config` to list the configuration keys.",
    )
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    # Also accepted after the subcommand; SUPPRESS keeps the value given before it.
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output"
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings only")
    commands = parser.add_subparsers(dest="command", required=True)

    dataset = commands.add_parser(
        "dataset", parents=[output], help="generate or verify target datasets"
    )
    dataset_commands = dataset.add_subparsers(dest="dataset_command", required=True)
    gen = dataset_commands.add_parser(
        "gen", parents=[output], help="generate a dataset"
    )
    gen.add_argument("--qubits", type=int, required=True)
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--depth-min", type=int, default=5)
    gen.add_argument("--depth-max", type=int, default=15)
    gen.add_argument(
        "--lenient",
        action="store_true",
        help="accept qubit counts and depths outside the defaults",
    )
    gen.add_argument("--out", required=True)
    gen.set_defaults(handler=cmd_dataset_gen)
    verify = dataset_commands.add_parser(
        "verify", parents=[output], help="verify a dataset"
    )
    verify.add_argument("path")
    verify.set_defaults(handler=cmd_dataset_verify)

    run = commands.add_parser(
        "run", parents=[output], help="evolve circuits for the targets of a dataset"
    )
    run.add_argument("--config")
    run.add_argument("--dataset", required=True)
    run.add_argument("--seed", type=int, help="overrides run.seed")
    run.add_argument("--seed-index", type=int, default=1, help="seed of the run within a study")
    run.add_argument("--target", action="append", help="record id; repeatable")
    run.add_argument("--strategies", help="comma-separated strategies")
    run.add_argument("--out", help="directory for runs.csv and run_report.json")
    run.set_defaults(handler=cmd_run)

    study = commands.add_parser(
        "study", parents=[output], help="compare mutation strategy sets"
    )
    study.add_argument("--config")
    study.add_argument("--dataset", required=True)
    study.add_argument("--seed", type=int, help="overrides run.seed")
    study.add_argument(
        "--strategies",
        action="append",
        help="`all` or a comma-separated set; repeatable",
    )
    study.add_argument("--seeds", type=_seeds, default=[1, 2, 3, 4])
    study.add_argument("--out", default="study")
    study.add_argument(
        "--print-commands", action="store_true", help="print one `qevo run` per run instead"
    )
    study.set_defaults(handler=cmd_study)

    tune = commands.add_parser(
        "tune", parents=[output], help="random search of the configuration"
    )
    tune.add_argument("--stage", type=int, choices=(1, 2), required=True)
    tune.add_argument("--bounds", required=True)
    tune.add_argument("--budget", type=int, required=True)
    tune.add_argument("--dataset", required=True)
    tune.add_argument("--config", help="base configuration, e.g. the best of stage 1")
    tune.add_argument("--seed", type=int, help="overrides run.seed")
    tune.add_argument("--seeds", type=_seeds, default=[1])
    tune.add_argument("--subset", type=int, help="number of targets per trial")
    tune.add_argument(
        "--enqueue", action="append", help="JSON object of parameters tried first; repeatable"
    )
    tune.add_argument("--within", help="bounds file the searched bounds must narrow")
    tune.add_argument("--out", help="directory for trials.csv and best.toml")
    tune.set_defaults(handler=cmd_tune)

    opt = commands.add_parser("optimize", parents=[output], help="simplify a circuit")
    opt.add_argument("circuit")
    opt.add_argument("-o", "--output")
    opt.set_defaults(handler=cmd_optimize)

    sim = commands.add_parser(
        "simulate", parents=[output], help="print the state a circuit prepares"
    )
    sim.add_argument("circuit")
    sim.add_argument("--target", help="circuit whose state to compare with")
    sim.set_defaults(handler=cmd_simulate)

    return parser


def _configure_logging(args) -> None:
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet or args.json:
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(asctime)s - %(levelname)s - %(message)s", stream=sys.stderr
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:2] in (["--help", "config"], ["-h", "config"]):
        print(describe_config())
        return EXIT_OK

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    _configure_logging(args)
    start = time.perf_counter()
    try:
        code = args.handler(args)
    except (ConfigError, ValidationError, ParseError, ValueError, FileNotFoundError) as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_INVALID
    except Exception as e:
        logger.error("%s: %s", type(e).__name__, e, exc_info=args.verbose)
        return EXIT_RUNTIME
    logger.debug("cli: %s done in %.2fs", args.command, time.perf_counter() - start)
    return code
