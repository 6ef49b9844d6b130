import argparse
import logging
import math
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from agents.budget_sweep_agent import budget_sweep, curve_rows
from agents.oracle_agent import cached_catalog
from agents.phase_sweep_agent import DEFAULT_BETAS, DEFAULT_STEPS, phase_sweep
from agents.replicate_agent import run_once
from config import Settings, configure_logging, read_flag_file
from graph.state import ExperimentPlan, ExperimentState
from graph.workflow import run_experiment
from optimizers import ALGORITHMS, AlgorithmConfig
from tools.csv_export_tool import (
    trace_rows,
    write_curve_csv,
    write_minima_csv,
    write_phase_csv,
    write_runs_csv,
    write_snapshot_csv,
    write_trace_csv,
)
from tools.errors import ConfigurationError, IsingEvoError
from tools.objective_tool import ObjectiveSpec, mean_minimum_value
from tools.variation_tool import VariationParams

logger = logging.getLogger("ising_evo")

SUBCOMMANDS = ("oracle", "run", "bench", "sweep", "phase", "ensemble")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# --- argument types ---

def _float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(float(part)) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def parse_algo_entry(entry: str) -> Tuple[str, Optional[int], Optional[int], Optional[int]]:
    """
    `name[:shape]` where shape is `WxH` (torus) or `N` (ring), e.g.
    `ising:50x50`, `ising:900`, `random`.
    """
    name, _, shape = entry.strip().partition(":")
    if name not in ALGORITHMS:
        raise argparse.ArgumentTypeError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHMS)}")
    if not shape:
        return name, None, None, None
    try:
        if "x" in shape:
            width, height = (int(part) for part in shape.split("x", 1))
            return name, 2, width, height
        return name, 1, int(shape), 1
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad lattice shape {shape!r} in {entry!r}") from exc


def _algo_entries(text: str) -> Tuple[Tuple[str, Optional[int], Optional[int], Optional[int]], ...]:
    return tuple(parse_algo_entry(part) for part in text.split(",") if part.strip())


# --- parser ---

def _add_domain(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lo", type=int, default=0, help="inclusive domain lower bound")
    parser.add_argument("--hi", type=int, default=100_000, help="exclusive domain upper bound")


def _add_algorithm(parser: argparse.ArgumentParser, with_algo: bool = True) -> None:
    if with_algo:
        parser.add_argument("--algo", choices=ALGORITHMS, default="ising", help="optimizer")
    parser.add_argument("--dims", type=int, choices=(1, 2), default=2, help="1 = ring, 2 = torus")
    parser.add_argument("--width", type=int, default=30)
    parser.add_argument("--height", type=int, default=None, help="default 30 (torus) or 1 (ring)")
    parser.add_argument("--beta", type=float, default=100.0, help="inverse temperature")
    parser.add_argument("--mutation-std", type=float, default=100.0)
    parser.add_argument("--mix-probability", type=float, default=0.5)
    parser.add_argument("--accept-worse-prob", type=float, default=0.10, help="cellular evolution")
    parser.add_argument("--beta0", type=float, default=1.0, help="simulated annealing")
    parser.add_argument("--schedule", choices=("sqrt", "linear"), default="sqrt", help="simulated annealing")
    parser.add_argument("--pop-size", type=int, default=100, help="mixture evolution")
    parser.add_argument("--keep-prob", type=float, default=0.10, help="mixture evolution")


def _add_experiment(parser: argparse.ArgumentParser, settings: Settings, with_runs: bool = True) -> None:
    parser.add_argument("--budget", type=int, default=100_000, help="evaluations per run")
    if with_runs:
        parser.add_argument("--runs", type=int, default=100, help="independent runs")
    parser.add_argument("--seed", type=int, default=settings.base_seed, help="base seed")


def build_parser(settings: Settings) -> Tuple[argparse.ArgumentParser, Dict[str, argparse.ArgumentParser]]:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="file of key=value pairs pre-populating flags")
    common.add_argument("--log-level", choices=LOG_LEVELS, default=settings.log_level.upper(), type=str.upper)
    common.add_argument("--workers", type=int, default=settings.workers, help="parallel runs")

    parser = argparse.ArgumentParser(prog="ising-evo", description="Ising-model based evolutionary optimization")
    commands = parser.add_subparsers(dest="command", required=True)
    subparsers: Dict[str, argparse.ArgumentParser] = {}

    sub = commands.add_parser("oracle", parents=[common], help="enumerate all local minima")
    _add_domain(sub)
    sub.add_argument("--out", default=None, help="minima CSV")
    subparsers["oracle"] = sub

    sub = commands.add_parser("run", parents=[common], help="one optimizer run")
    _add_domain(sub)
    _add_algorithm(sub)
    _add_experiment(sub, settings, with_runs=False)
    sub.add_argument("--out", default=None, help="runs CSV")
    sub.add_argument("--trace-out", default=None, help="trace CSV")
    subparsers["run"] = sub

    sub = commands.add_parser("bench", parents=[common], help="replicated runs of one optimizer")
    _add_domain(sub)
    _add_algorithm(sub)
    _add_experiment(sub, settings)
    sub.add_argument("--out", default=None, help="runs CSV")
    sub.add_argument("--trace-out", default=None, help="trace CSV")
    subparsers["bench"] = sub

    sub = commands.add_parser("sweep", parents=[common], help="best-so-far curves over the budget")
    _add_domain(sub)
    sub.add_argument(
        "--algo", type=_algo_entries, default="ising:30x30,random",
        help="comma-separated name[:WxH|:N] entries, e.g. ising:50x50,ising:900,random",
    )
    _add_algorithm(sub, with_algo=False)
    _add_experiment(sub, settings)
    sub.add_argument("--out", default=None, help="curve CSV")
    sub.add_argument("--trace-out", default=None, help="per-seed trace CSV at the checkpoints")
    subparsers["sweep"] = sub

    sub = commands.add_parser("phase", parents=[common], help="relative std of the lattice over beta and time")
    _add_domain(sub)
    sub.add_argument("--betas", type=_float_list, default=",".join(f"{b:g}" for b in DEFAULT_BETAS))
    sub.add_argument("--steps", type=_int_list, default=",".join(str(s) for s in DEFAULT_STEPS))
    sub.add_argument("--snapshot-steps", type=_int_list, default=None, help="steps kept as full snapshots")
    sub.add_argument("--dims", type=int, choices=(1, 2), default=2)
    sub.add_argument("--width", type=int, default=30)
    sub.add_argument("--height", type=int, default=None)
    sub.add_argument("--mutation-std", type=float, default=100.0)
    sub.add_argument("--mix-probability", type=float, default=0.5)
    sub.add_argument("--seed", type=int, default=settings.base_seed)
    sub.add_argument("--n-seeds", type=int, default=1, help="average rel_std over this many seeds")
    sub.add_argument("--out", default=None, help="phase CSV")
    sub.add_argument("--snapshot-out", default=None, help="snapshot CSV")
    subparsers["phase"] = sub

    sub = commands.add_parser("ensemble", parents=[common], help="top-k minima coverage")
    _add_domain(sub)
    _add_algorithm(sub)
    _add_experiment(sub, settings)
    sub.add_argument("--k", type=int, default=10, help="number of lowest minima")
    sub.add_argument("--out", default=None, help="ensemble CSV")
    sub.add_argument("--runs-out", default=None, help="runs CSV")
    subparsers["ensemble"] = sub

    return parser, subparsers


def apply_flag_file(argv: Sequence[str], subparsers: Dict[str, argparse.ArgumentParser]) -> None:
    """Pre-populate the chosen subcommand's defaults from --config; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    command = next((token for token in argv if token in SUBCOMMANDS), None)
    if known.config is None or command is None:
        return

    sub = subparsers[command]
    values = read_flag_file(known.config)
    dests = {action.dest for action in sub._actions}
    unknown = sorted(set(values) - dests - {"config"})
    if unknown:
        raise ConfigurationError(f"unknown keys in {known.config}: {', '.join(unknown)}")
    values.pop("config", None)
    sub.set_defaults(**values)


# --- commands ---

def objective_of(args: argparse.Namespace) -> ObjectiveSpec:
    return ObjectiveSpec(lo=args.lo, hi=args.hi)


def algorithm_config(
    args: argparse.Namespace,
    algorithm: str,
    dims: Optional[int] = None,
    width: Optional[int] = None,
    height: Optional[int] = None,
) -> AlgorithmConfig:
    dims = args.dims if dims is None else dims
    width = args.width if width is None else width
    if height is None:
        height = args.height if args.height is not None else (1 if dims == 1 else 30)
    return AlgorithmConfig(
        algorithm=algorithm,
        dims=dims,
        width=width,
        height=height,
        beta=args.beta,
        variation=VariationParams(mutation_std=args.mutation_std, mix_probability=args.mix_probability),
        accept_worse_prob=args.accept_worse_prob,
        beta0=args.beta0,
        schedule=args.schedule,
        pop_size=args.pop_size,
        keep_prob=args.keep_prob,
    )


def summary_line(mean_best_f: float, runs: int, evals: int) -> str:
    return f"mean_best_f={mean_best_f:.10e} runs={runs} evals={evals}"


def cmd_oracle(args: argparse.Namespace) -> int:
    catalog = cached_catalog(objective_of(args))
    if args.out:
        write_minima_csv(catalog, args.out)
    mean = mean_minimum_value(catalog) if len(catalog) else math.nan
    best = catalog.minima[0].argmin if len(catalog) else ""
    print(f"minima={len(catalog)} mean_value={mean:.10e} best_argmin={best}")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    plan = ExperimentPlan(
        algorithm=algorithm_config(args, args.algo), n_runs=1, budget=args.budget,
        base_seed=args.seed, objective=objective_of(args),
    )
    result = run_once(plan, cached_catalog(plan.objective), 0)
    name, config_id = plan.algorithm.algorithm, plan.config_id
    if args.out:
        write_runs_csv(name, config_id, [args.seed], [result], args.out)
    if args.trace_out:
        write_trace_csv(trace_rows(name, config_id, [args.seed], [result]), args.trace_out)
    print(summary_line(result.best_f, 1, result.evals_used))
    return 0


def _plan(args: argparse.Namespace) -> ExperimentPlan:
    return ExperimentPlan(
        algorithm=algorithm_config(args, args.algo), n_runs=args.runs, budget=args.budget,
        base_seed=args.seed, objective=objective_of(args),
    )


def cmd_bench(args: argparse.Namespace) -> int:
    state = ExperimentState(plan=_plan(args), workers=args.workers, runs_out=args.out, trace_out=args.trace_out)
    final = run_experiment(state)
    print(summary_line(final.outcome.stats.mean_best_f, args.runs, args.budget))
    return 0


def cmd_ensemble(args: argparse.Namespace) -> int:
    state = ExperimentState(
        plan=_plan(args), workers=args.workers, ensemble_k=args.k,
        ensemble_out=args.out, runs_out=args.runs_out,
    )
    final = run_experiment(state)
    print(f"mean_found={final.coverage.mean_found:.4f} k={args.k} runs={args.runs} evals={args.budget}")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    objective = objective_of(args)
    plans: List[ExperimentPlan] = []
    for name, dims, width, height in args.algo:
        plans.append(ExperimentPlan(
            algorithm=algorithm_config(args, name, dims, width, height), n_runs=args.runs,
            budget=args.budget, base_seed=args.seed, objective=objective,
        ))
    result = budget_sweep(plans, cached_catalog(objective), workers=args.workers)

    if args.out:
        write_curve_csv(curve_rows(result), args.out)
    if args.trace_out:
        rows: List[list] = []
        for outcome in result.outcomes:
            plan = outcome.plan
            seeds = [plan.seed(index) for index in range(plan.n_runs)]
            rows.extend(trace_rows(
                plan.algorithm.algorithm, plan.config_id, seeds, outcome.runs, plan.checkpoint_schedule
            ))
        write_trace_csv(rows, args.trace_out)

    for outcome in result.outcomes:
        line = summary_line(outcome.stats.mean_best_f, args.runs, args.budget)
        print(f"{line} config={outcome.plan.algorithm.algorithm}/{outcome.plan.config_id}")
    return 0


def cmd_phase(args: argparse.Namespace) -> int:
    result = phase_sweep(
        betas=args.betas,
        snapshot_steps=args.steps,
        dims=args.dims,
        width=args.width,
        height=args.height if args.height is not None else (1 if args.dims == 1 else args.width),
        seed=args.seed,
        n_seeds=args.n_seeds,
        keep_snapshots_at=args.snapshot_steps,
        variation=VariationParams(mutation_std=args.mutation_std, mix_probability=args.mix_probability),
        objective=objective_of(args),
    )
    if args.out:
        write_phase_csv(result.entries, args.out)
    if args.snapshot_out:
        write_snapshot_csv(result.snapshots, args.snapshot_out)
    print(f"rows={len(result.entries)} betas={len(args.betas)} dims={args.dims}")
    return 0


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "oracle": cmd_oracle,
    "run": cmd_run,
    "bench": cmd_bench,
    "sweep": cmd_sweep,
    "phase": cmd_phase,
    "ensemble": cmd_ensemble,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse flags, dispatch, write CSV and print a one-line summary."""
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        settings = Settings.from_env()
    except (ValidationError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    parser, subparsers = build_parser(settings)
    try:
        apply_flag_file(argv, subparsers)
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    except (ConfigurationError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2

    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except (ValidationError, ConfigurationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (IsingEvoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
