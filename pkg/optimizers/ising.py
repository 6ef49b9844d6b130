import logging
from typing import Callable, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from optimizers.base import RunRecorder, RunResult, StepObserver, metropolis
from tools.lattice_tool import init_uniform, pick_neighbor, pick_site
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog
from tools.variation_tool import VariationParams, propose

logger = logging.getLogger(__name__)


class IsingConfig(BaseModel):
    """Lattice shape, inverse temperature and variation operator of one Ising run."""

    model_config = ConfigDict(frozen=True)

    dims: Literal[1, 2] = Field(default=2, description="1 = ring, 2 = torus")
    width: int = Field(default=30, ge=1)
    height: int = Field(default=30, ge=1, description="Must be 1 for a ring")
    beta: float = Field(default=100.0, ge=0, allow_inf_nan=False)
    variation: VariationParams = Field(default_factory=VariationParams)

    @model_validator(mode="after")
    def _check_shape(self) -> "IsingConfig":
        if self.dims == 1 and self.height != 1:
            raise ValueError(f"a ring has height 1, got {self.height}")
        if self.width * self.height < 2:
            raise ValueError("the lattice needs at least 2 sites")
        return self

    @property
    def size(self) -> int:
        return self.width * self.height


def _run_lattice(
    cfg: IsingConfig,
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog],
    acceptance: Callable[[float, float], float],
    on_step: Optional[StepObserver],
) -> RunResult:
    recorder = RunRecorder(ev, catalog)
    spec = ev.spec

    start = ev.used
    state = init_uniform(ev, cfg.dims, cfg.width, cfg.height, rng)
    # init evaluates in row-major order; replay it for hits and best-so-far
    for n, (x, f) in enumerate(zip(state.cells.ravel().tolist(), state.quals.ravel().tolist())):
        recorder.note_hit(x)
        recorder.offer(x, f, eval_index=start + n + 1)
    logger.debug("lattice init: best x=%d f=%.6e", *state.best())
    if on_step is not None:
        on_step(state, ev.used)

    cells, quals = state.cells, state.quals
    while not ev.exhausted:
        i, j = pick_site(state, rng)
        ni, nj = pick_neighbor(state, i, j, rng)
        test = propose(int(cells[i, j]), int(cells[ni, nj]), cfg.variation, rng, spec)
        f_test = recorder.evaluate(test)
        if rng.random() < acceptance(float(quals[i, j]), f_test):
            state.replace(i, j, test, f_test)
            recorder.offer(test, f_test)
        if on_step is not None:
            on_step(state, ev.used)

    return recorder.result()


def run_ising(
    cfg: IsingConfig,
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
    on_step: Optional[StepObserver] = None,
) -> RunResult:
    """
    Ising based evolution.

    Uniform lattice init, then until the budget is spent: pick a site and one
    neighbour, propose, evaluate once and accept with the Metropolis rule.
    The global best only moves on accepted proposals.
    """
    beta = cfg.beta
    result = _run_lattice(cfg, ev, rng, catalog, lambda old, new: metropolis(old, new, beta), on_step)
    logger.debug("ising %dx%d beta=%g best_f=%.6e", cfg.width, cfg.height, beta, result.best_f)
    return result


def run_cellular(
    cfg: IsingConfig,
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
    accept_worse_prob: float = 0.10,
    on_step: Optional[StepObserver] = None,
) -> RunResult:
    """Same lattice loop, but a non-improving proposal is kept with a fixed probability."""
    if not 0.0 <= accept_worse_prob <= 1.0:
        raise ValueError(f"accept_worse_prob must lie in [0, 1], got {accept_worse_prob}")

    def fixed(old: float, new: float) -> float:
        return 1.0 if old > new else accept_worse_prob

    return _run_lattice(cfg, ev, rng, catalog, fixed, on_step)
