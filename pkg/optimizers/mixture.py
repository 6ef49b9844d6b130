from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from optimizers.base import RunRecorder, RunResult
from tools.errors import BudgetExhausted
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog
from tools.variation_tool import average_mix

PopulationObserver = Callable[[Tuple[int, ...], int], None]


def run_mixture(
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
    pop_size: int = 100,
    keep_prob: float = 0.10,
    start: Optional[Sequence[int]] = None,
    on_step: Optional[PopulationObserver] = None,
) -> RunResult:
    """
    Unstructured population evolved by pairwise averaging only.

    A child replaces the worse parent when it beats it; otherwise it replaces
    a random parent with probability keep_prob. `start` fixes the initial
    population instead of drawing it; `on_step` sees the population after
    init and after every child.
    """
    if pop_size < 2:
        raise ValueError(f"pop_size must be at least 2, got {pop_size}")
    if not 0.0 <= keep_prob <= 1.0:
        raise ValueError(f"keep_prob must lie in [0, 1], got {keep_prob}")
    if start is not None and len(start) != pop_size:
        raise ValueError(f"start holds {len(start)} values, expected {pop_size}")
    if ev.remaining <= pop_size:
        raise BudgetExhausted(
            f"budget of {ev.remaining} evaluations must exceed the population size {pop_size}"
        )

    spec = ev.spec
    recorder = RunRecorder(ev, catalog)

    if start is None:
        population = [int(x) for x in rng.integers(spec.lo, spec.hi, size=pop_size)]
    else:
        population = [spec.clamp(int(x)) for x in start]
    values = []
    for x in population:
        f = recorder.evaluate(x)
        values.append(f)
        recorder.offer(x, f)
    if on_step is not None:
        on_step(tuple(population), ev.used)

    while not ev.exhausted:
        a = int(rng.integers(pop_size))
        b = int(rng.integers(pop_size - 1))
        if b >= a:
            b += 1
        child = average_mix(population[a], population[b])
        f_child = recorder.evaluate(child)
        recorder.offer(child, f_child)

        worse = a if values[a] >= values[b] else b
        if f_child < values[worse]:
            population[worse], values[worse] = child, f_child
        elif rng.random() < keep_prob:
            slot = (a, b)[int(rng.integers(2))]
            population[slot], values[slot] = child, f_child
        if on_step is not None:
            on_step(tuple(population), ev.used)

    return recorder.result()
