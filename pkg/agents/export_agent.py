import logging
import time

from graph.state import ExperimentState
from tools.csv_export_tool import trace_rows, write_ensemble_csv, write_runs_csv, write_trace_csv

logger = logging.getLogger(__name__)


def export_results_node(state: ExperimentState) -> ExperimentState:
    """Node function that writes the requested CSV files once all runs are done"""

    started = time.perf_counter()
    plan = state.plan
    name, config_id = plan.algorithm.algorithm, plan.config_id
    seeds = [plan.seed(index) for index in range(plan.n_runs)]
    runs = state.outcome.runs

    if state.runs_out:
        state.written.append(str(write_runs_csv(name, config_id, seeds, runs, state.runs_out)))
    if state.trace_out:
        rows = trace_rows(name, config_id, seeds, runs)
        state.written.append(str(write_trace_csv(rows, state.trace_out)))
    if state.ensemble_out and state.coverage is not None:
        path = write_ensemble_csv(name, config_id, seeds, state.coverage.per_run_found, state.ensemble_out)
        state.written.append(str(path))

    state.processing_time["export_results"] = time.perf_counter() - started
    state.current_step = "export_results_completed"
    logger.info("Export completed: %d files", len(state.written))
    return state
