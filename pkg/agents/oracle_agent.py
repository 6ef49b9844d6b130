import logging
import time
from functools import lru_cache

from graph.state import ExperimentState
from tools.objective_tool import MinimaCatalog, ObjectiveSpec, enumerate_local_minima, top_k

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8)
def cached_catalog(spec: ObjectiveSpec) -> MinimaCatalog:
    """Oracle catalog, computed once per domain per process."""
    return enumerate_local_minima(spec)


def build_catalog_node(state: ExperimentState) -> ExperimentState:
    """Node function that enumerates the local minima of the plan's domain"""

    started = time.perf_counter()
    logger.info("Starting oracle over [%d, %d)...", state.plan.objective.lo, state.plan.objective.hi)

    state.catalog = cached_catalog(state.plan.objective)
    if state.ensemble_k is not None:
        # k larger than the catalog fails here, before any run starts
        top_k(state.catalog, state.ensemble_k)

    state.processing_time["build_catalog"] = time.perf_counter() - started
    state.current_step = "build_catalog_completed"
    logger.info("Oracle completed: %d local minima", len(state.catalog))
    return state
