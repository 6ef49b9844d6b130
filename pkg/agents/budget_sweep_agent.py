import logging
from typing import List, Sequence

from agents.replicate_agent import replicate
from graph.state import BudgetSweepResult, ExperimentPlan
from tools.csv_export_tool import fmt_real
from tools.errors import ConfigurationError
from tools.objective_tool import MinimaCatalog, top_k

logger = logging.getLogger(__name__)

REFERENCE_LEVELS = 3


def budget_sweep(plans: Sequence[ExperimentPlan], catalog: MinimaCatalog, workers: int = 1) -> BudgetSweepResult:
    """Mean best-so-far curves over a shared checkpoint schedule, one per plan."""
    if not plans:
        raise ConfigurationError("budget_sweep needs at least one plan")
    schedule = plans[0].checkpoint_schedule
    for plan in plans[1:]:
        if plan.checkpoint_schedule != schedule:
            raise ConfigurationError(
                f"{plan.config_id}: plans in one sweep must share the checkpoint schedule"
            )

    outcomes = tuple(replicate(plan, catalog, workers=workers) for plan in plans)
    levels = tuple(m.value for m in top_k(catalog, min(REFERENCE_LEVELS, len(catalog))))
    return BudgetSweepResult(outcomes=outcomes, reference_levels=levels)


def curve_rows(result: BudgetSweepResult) -> List[list]:
    """Rows for the curve CSV, reference lines last."""
    rows = []
    for outcome in result.outcomes:
        name = outcome.plan.algorithm.algorithm
        stds = dict(outcome.stats.per_checkpoint_std)
        for idx, mean in outcome.stats.per_checkpoint_mean:
            rows.append([name, outcome.plan.config_id, idx, fmt_real(mean), fmt_real(stds[idx])])
    if result.outcomes:
        schedule = result.outcomes[0].plan.checkpoint_schedule
        for rank, level in enumerate(result.reference_levels, start=1):
            for idx in schedule:
                rows.append(["reference", f"rank{rank}", idx, fmt_real(level), fmt_real(0.0)])
    return rows
