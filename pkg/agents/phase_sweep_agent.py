import logging
import math
from typing import Dict, List, Optional, Sequence

import numpy as np

from graph.state import PhaseEntry, PhaseSweepResult
from optimizers import IsingConfig, run_ising
from tools.errors import ConfigurationError
from tools.lattice_tool import LatticeState, Snapshot, relative_std, take_snapshot
from tools.objective_tool import BudgetedEvaluator, ObjectiveSpec
from tools.variation_tool import VariationParams

logger = logging.getLogger(__name__)

DEFAULT_BETAS = (0.1, 1.0, 10.0, 100.0)
DEFAULT_STEPS = (0, 1_000, 10_000, 100_000)


class _StepRecorder:
    """
    Observer for run_ising: records rel_std (and optionally a snapshot) once
    the evaluation count reaches each requested step. Steps not exceeding
    the population size are taken right after initialisation.
    """

    def __init__(self, steps: Sequence[int], keep: frozenset, beta: float):
        self.steps = list(steps)
        self.keep = keep
        self.beta = beta
        self.position = 0
        self.rel_std: Dict[int, float] = {}
        self.snapshots: List[Snapshot] = []

    def __call__(self, state: LatticeState, used: int) -> None:
        while self.position < len(self.steps) and self.steps[self.position] <= used:
            step = self.steps[self.position]
            self.rel_std[step] = relative_std(state)
            if step in self.keep:
                self.snapshots.append(take_snapshot(state, step, self.beta))
            self.position += 1


def phase_sweep(
    betas: Sequence[float] = DEFAULT_BETAS,
    snapshot_steps: Sequence[int] = DEFAULT_STEPS,
    dims: int = 2,
    width: int = 30,
    height: int = 30,
    seed: int = 0,
    n_seeds: int = 1,
    keep_snapshots_at: Optional[Sequence[int]] = None,
    variation: Optional[VariationParams] = None,
    objective: Optional[ObjectiveSpec] = None,
) -> PhaseSweepResult:
    """
    Relative std of the lattice over time for each beta.

    One Ising run per (beta, seed) with a budget of max(snapshot_steps)
    evaluations; every beta starts from the same seeds. With n_seeds > 1 the
    rel_std values are averaged and snapshots come from the first seed.
    """
    steps = list(snapshot_steps)
    if not steps or any(b <= a for a, b in zip(steps, steps[1:])) or steps[0] < 0:
        raise ConfigurationError(f"snapshot steps must be non-negative and strictly increasing: {steps}")
    if n_seeds < 1:
        raise ConfigurationError(f"n_seeds must be positive, got {n_seeds}")
    if dims == 1:
        height = 1
    keep = frozenset(steps if keep_snapshots_at is None else keep_snapshots_at)
    objective = objective or ObjectiveSpec()
    variation = variation or VariationParams()

    entries: List[PhaseEntry] = []
    snapshots: List[Snapshot] = []
    for beta in betas:
        cfg = IsingConfig(dims=dims, width=width, height=height, beta=beta, variation=variation)
        budget = max(steps[-1], cfg.size + 1)
        per_step: Dict[int, List[float]] = {step: [] for step in steps}
        for offset in range(n_seeds):
            recorder = _StepRecorder(steps, keep if offset == 0 else frozenset(), beta)
            ev = BudgetedEvaluator(objective, budget)
            run_ising(cfg, ev, np.random.default_rng(seed + offset), on_step=recorder)
            for step in steps:
                per_step[step].append(recorder.rel_std[step])
            snapshots.extend(recorder.snapshots)

        for step in steps:
            values = per_step[step]
            entries.append(PhaseEntry(dims=dims, beta=beta, step=step, rel_std=math.fsum(values) / len(values)))
        logger.info(
            "Phase sweep dims=%d beta=%g: rel_std %.4f -> %.4f",
            dims, beta, entries[-len(steps)].rel_std, entries[-1].rel_std,
        )

    return PhaseSweepResult(entries=tuple(entries), snapshots=tuple(snapshots))
