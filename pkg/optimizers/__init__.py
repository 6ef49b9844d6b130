from typing import Literal, Optional, Tuple, get_args

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from optimizers.annealing import Schedule, run_sim_annealing
from optimizers.base import (
    AcceptanceRule,
    RunRecorder,
    RunResult,
    StepObserver,
    acceptance_probability,
    best_at,
)
from optimizers.ising import IsingConfig, run_cellular, run_ising
from optimizers.mixture import run_mixture
from optimizers.mutation import run_mutation
from optimizers.random_search import run_random_search
from tools.errors import ConfigurationError
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog
from tools.variation_tool import VariationParams

AlgorithmName = Literal["ising", "cellular", "annealing", "mutation", "mixture", "random"]
ALGORITHMS: Tuple[str, ...] = get_args(AlgorithmName)


class AlgorithmConfig(BaseModel):
    """
    Algorithm id plus every knob of the six optimizers.

    Flat on purpose: fields map one-to-one onto CLI flags. Each runner reads
    only the fields it uses.
    """

    model_config = ConfigDict(frozen=True)

    algorithm: AlgorithmName = Field(default="ising")
    dims: Literal[1, 2] = Field(default=2)
    width: int = Field(default=30, ge=1)
    height: int = Field(default=30, ge=1)
    beta: float = Field(default=100.0, ge=0, allow_inf_nan=False)
    variation: VariationParams = Field(default_factory=VariationParams)
    accept_worse_prob: float = Field(default=0.10, ge=0.0, le=1.0)
    beta0: float = Field(default=1.0, ge=0, allow_inf_nan=False)
    schedule: Schedule = Field(default="sqrt")
    pop_size: int = Field(default=100, ge=2)
    keep_prob: float = Field(default=0.10, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_lattice(self) -> "AlgorithmConfig":
        if self.algorithm in ("ising", "cellular"):
            self.ising_config()
        return self

    def ising_config(self) -> IsingConfig:
        return IsingConfig(
            dims=self.dims, width=self.width, height=self.height,
            beta=self.beta, variation=self.variation,
        )

    @property
    def population_size(self) -> int:
        """Evaluations spent before the first update step."""
        if self.algorithm in ("ising", "cellular"):
            return self.width * self.height
        if self.algorithm == "mixture":
            return self.pop_size
        return 0

    @property
    def config_id(self) -> str:
        shape = f"{self.width}" if self.dims == 1 else f"{self.width}x{self.height}"
        if self.algorithm == "ising":
            return f"{self.dims}d-{shape}-b{self.beta:g}"
        if self.algorithm == "cellular":
            return f"{self.dims}d-{shape}-p{self.accept_worse_prob:g}"
        if self.algorithm == "annealing":
            return f"b0{self.beta0:g}-{self.schedule}"
        if self.algorithm == "mutation":
            return f"std{self.variation.mutation_std:g}"
        if self.algorithm == "mixture":
            return f"pop{self.pop_size}-k{self.keep_prob:g}"
        return "uniform"


def check_budget(config: AlgorithmConfig, budget: int) -> None:
    if budget < 1 or budget <= config.population_size:
        raise ConfigurationError(
            f"{config.algorithm}: budget {budget} must exceed the population size "
            f"{config.population_size}"
        )


def run_algorithm(
    config: AlgorithmConfig,
    ev: BudgetedEvaluator,
    rng: np.random.Generator,
    catalog: Optional[MinimaCatalog] = None,
    on_step: Optional[StepObserver] = None,
) -> RunResult:
    if config.algorithm == "ising":
        return run_ising(config.ising_config(), ev, rng, catalog, on_step=on_step)
    if config.algorithm == "cellular":
        return run_cellular(config.ising_config(), ev, rng, catalog, config.accept_worse_prob, on_step=on_step)
    if config.algorithm == "annealing":
        return run_sim_annealing(config.beta0, ev, rng, catalog, config.variation, config.schedule)
    if config.algorithm == "mutation":
        return run_mutation(ev, rng, catalog, config.variation)
    if config.algorithm == "mixture":
        return run_mixture(ev, rng, catalog, config.pop_size, config.keep_prob)
    return run_random_search(ev, rng, catalog)


__all__ = [
    "ALGORITHMS",
    "AcceptanceRule",
    "AlgorithmConfig",
    "AlgorithmName",
    "IsingConfig",
    "RunRecorder",
    "RunResult",
    "acceptance_probability",
    "best_at",
    "check_budget",
    "run_algorithm",
    "run_cellular",
    "run_ising",
    "run_mixture",
    "run_mutation",
    "run_random_search",
    "run_sim_annealing",
]
