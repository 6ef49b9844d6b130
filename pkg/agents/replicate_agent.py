import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from typing import List, Optional, Sequence, Tuple

import numpy as np

from graph.state import AggregateStats, ExperimentPlan, ExperimentState, ReplicateOutcome
from optimizers import RunResult, best_at, run_algorithm
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog

logger = logging.getLogger(__name__)


def run_once(plan: ExperimentPlan, catalog: Optional[MinimaCatalog], run_index: int) -> RunResult:
    """One run with a fresh evaluator and a generator seeded by base_seed + run_index."""
    ev = BudgetedEvaluator(plan.objective, plan.budget)
    rng = np.random.default_rng(plan.seed(run_index))
    return run_algorithm(plan.algorithm, ev, rng, catalog)


def mean_std(values: Sequence[float]) -> Tuple[float, float]:
    """Population mean and std with exactly rounded sums, independent of order."""
    n = len(values)
    mean = math.fsum(values) / n
    variance = math.fsum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(variance)


def aggregate(plan: ExperimentPlan, runs: Sequence[RunResult]) -> AggregateStats:
    mean, std = mean_std([run.best_f for run in runs])
    per_mean: List[Tuple[int, float]] = []
    per_std: List[Tuple[int, float]] = []
    for checkpoint in plan.checkpoint_schedule:
        m, s = mean_std([best_at(run, checkpoint) for run in runs])
        per_mean.append((checkpoint, m))
        per_std.append((checkpoint, s))
    return AggregateStats(
        mean_best_f=mean,
        std_best_f=std,
        per_checkpoint_mean=tuple(per_mean),
        per_checkpoint_std=tuple(per_std),
    )


def replicate(plan: ExperimentPlan, catalog: Optional[MinimaCatalog] = None, workers: int = 1) -> ReplicateOutcome:
    """
    Run the plan's optimizer n_runs times and aggregate best-so-far statistics.

    Runs are independent; with workers > 1 they execute in a process pool and
    are joined in run-index order, so results do not depend on `workers`.
    """
    started = time.perf_counter()
    logger.info(
        "Starting replicate: %s %s, %d runs x %d evaluations",
        plan.algorithm.algorithm, plan.config_id, plan.n_runs, plan.budget,
    )

    indices = range(plan.n_runs)
    if workers > 1 and plan.n_runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run_once, repeat(plan), repeat(catalog), indices, chunksize=4))
    else:
        runs = [run_once(plan, catalog, index) for index in indices]

    outcome = ReplicateOutcome(plan=plan, stats=aggregate(plan, runs), runs=tuple(runs))
    logger.info(
        "Replicate completed in %.1fs: mean_best_f=%.6e std=%.6e",
        time.perf_counter() - started, outcome.stats.mean_best_f, outcome.stats.std_best_f,
    )
    return outcome


def replicate_node(state: ExperimentState) -> ExperimentState:
    """Node function that runs the replicated experiment"""

    started = time.perf_counter()
    state.outcome = replicate(state.plan, state.catalog, workers=state.workers)
    state.processing_time["replicate"] = time.perf_counter() - started
    state.current_step = "replicate_completed"
    return state
