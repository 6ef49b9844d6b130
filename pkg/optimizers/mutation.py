from typing import Optional

import numpy as np

from optimizers.base import RunRecorder, RunResult
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog
from tools.variation_tool import VariationParams, normal_step


def run_mutation(
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
    variation: Optional[VariationParams] = None,
    start: Optional[int] = None,
) -> RunResult:
    """Greedy single-candidate search: keep a normal step only if it is strictly lower."""
    variation = variation or VariationParams()
    spec = ev.spec
    recorder = RunRecorder(ev, catalog)

    current = int(rng.integers(spec.lo, spec.hi)) if start is None else spec.clamp(int(start))
    f_current = recorder.evaluate(current)
    recorder.offer(current, f_current)

    while not ev.exhausted:
        candidate = normal_step(current, variation, rng, spec)
        f_candidate = recorder.evaluate(candidate)
        if f_candidate < f_current:
            current, f_current = candidate, f_candidate
            recorder.offer(current, f_current)

    return recorder.result()
