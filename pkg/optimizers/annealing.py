import math
from typing import Literal, Optional

import numpy as np

from optimizers.base import RunRecorder, RunResult, metropolis
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog
from tools.variation_tool import VariationParams, normal_step

Schedule = Literal["sqrt", "linear"]


def annealing_beta(beta0: float, step: int, schedule: Schedule = "sqrt") -> float:
    """Inverse temperature at the 1-based update step."""
    if schedule == "linear":
        return beta0 * step
    return beta0 * math.sqrt(step)


def run_sim_annealing(
    beta0: float,
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
    variation: Optional[VariationParams] = None,
    schedule: Schedule = "sqrt",
) -> RunResult:
    """
    Single-candidate annealing: normal steps accepted with the Metropolis rule
    while beta grows with the update counter.
    """
    if beta0 < 0 or not math.isfinite(beta0):
        raise ValueError(f"beta0 must be a finite non-negative number, got {beta0}")
    variation = variation or VariationParams()
    spec = ev.spec
    recorder = RunRecorder(ev, catalog)

    current = int(rng.integers(spec.lo, spec.hi))
    f_current = recorder.evaluate(current)
    recorder.offer(current, f_current)

    step = 0
    while not ev.exhausted:
        step += 1
        beta = annealing_beta(beta0, step, schedule)
        candidate = normal_step(current, variation, rng, spec)
        f_candidate = recorder.evaluate(candidate)
        recorder.offer(candidate, f_candidate)
        if rng.random() < metropolis(f_current, f_candidate, beta):
            current, f_current = candidate, f_candidate

    return recorder.result()
