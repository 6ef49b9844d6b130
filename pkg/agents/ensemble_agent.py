import logging
import math
import time
from typing import Optional, Sequence

from agents.replicate_agent import replicate
from graph.state import EnsembleCoverage, ExperimentPlan, ExperimentState
from optimizers import RunResult
from tools.objective_tool import MinimaCatalog, top_k

logger = logging.getLogger(__name__)


def ensemble_coverage(
    plan: ExperimentPlan,
    catalog: MinimaCatalog,
    k: int = 10,
    runs: Optional[Sequence[RunResult]] = None,
    workers: int = 1,
) -> EnsembleCoverage:
    """
    How many of the k lowest minima each run evaluated at least once.

    Reuses `runs` when given (they must come from `plan` with `catalog`),
    otherwise replicates the plan.
    """
    targets = frozenset(m.argmin for m in top_k(catalog, k))
    if runs is None:
        runs = replicate(plan, catalog, workers=workers).runs

    found = tuple(len(targets & run.hits) for run in runs)
    coverage = EnsembleCoverage(k=k, per_run_found=found, mean_found=math.fsum(found) / len(found))
    logger.info("Ensemble coverage: %.2f of top-%d minima found on average", coverage.mean_found, k)
    return coverage


def ensemble_node(state: ExperimentState) -> ExperimentState:
    """Node function that scores top-k coverage of the replicated runs"""

    started = time.perf_counter()
    state.coverage = ensemble_coverage(
        state.plan, state.catalog, k=state.ensemble_k, runs=state.outcome.runs
    )
    state.processing_time["ensemble_coverage"] = time.perf_counter() - started
    state.current_step = "ensemble_coverage_completed"
    return state
