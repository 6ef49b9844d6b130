from typing import Optional

import numpy as np

from optimizers.base import RunRecorder, RunResult
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog


def run_random_search(
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
) -> RunResult:
    """Uniform guesses with replacement until the budget is spent."""
    spec = ev.spec
    recorder = RunRecorder(ev, catalog)
    # at least one evaluation, so a zero budget surfaces as BudgetExhausted
    while True:
        x = int(rng.integers(spec.lo, spec.hi))
        recorder.offer(x, recorder.evaluate(x))
        if ev.exhausted:
            break
    return recorder.result()
