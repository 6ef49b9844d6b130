from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from optimizers import AlgorithmConfig, RunResult, check_budget
from tools.errors import ConfigurationError
from tools.lattice_tool import Snapshot
from tools.objective_tool import MinimaCatalog, ObjectiveSpec


def default_checkpoints(budget: int, first_decade: int = 2, last_decade: int = 5, per_decade: int = 20) -> Tuple[int, ...]:
    """Log-spaced evaluation indices, `per_decade` per decade, clipped to the budget."""
    count = (last_decade - first_decade) * per_decade + 1
    points = np.unique(np.rint(np.logspace(first_decade, last_decade, count)).astype(np.int64))
    kept = tuple(int(p) for p in points if p <= budget)
    return kept or (int(budget),)


class ExperimentPlan(BaseModel):
    """
    Replicated runs of one optimizer configuration.
    """

    model_config = ConfigDict(frozen=True)

    algorithm: AlgorithmConfig = Field(default_factory=AlgorithmConfig)
    n_runs: int = Field(default=100, ge=1, description="Independent runs, seeds base_seed + run index")
    budget: int = Field(default=100_000, ge=1, description="Evaluations per run, initialisation included")
    base_seed: int = Field(default=0)
    checkpoint_schedule: Tuple[int, ...] = Field(
        default=(), description="Evaluation indices at which best-so-far is aggregated"
    )
    objective: ObjectiveSpec = Field(default_factory=ObjectiveSpec)

    @model_validator(mode="before")
    @classmethod
    def _fill_schedule(cls, data: Any) -> Any:
        if isinstance(data, dict) and not data.get("checkpoint_schedule"):
            data = dict(data)
            data["checkpoint_schedule"] = default_checkpoints(int(data.get("budget", 100_000)))
        return data

    @model_validator(mode="after")
    def _check_plan(self) -> "ExperimentPlan":
        schedule = self.checkpoint_schedule
        if any(b <= a for a, b in zip(schedule, schedule[1:])):
            raise ValueError("checkpoint_schedule must be strictly increasing")
        if schedule and (schedule[0] < 1 or schedule[-1] > self.budget):
            raise ValueError(f"checkpoints must lie in [1, {self.budget}]")
        try:
            check_budget(self.algorithm, self.budget)
        except ConfigurationError as exc:
            raise ValueError(str(exc)) from exc
        return self

    @property
    def config_id(self) -> str:
        return self.algorithm.config_id

    def seed(self, run_index: int) -> int:
        return self.base_seed + run_index


class AggregateStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean_best_f: float
    std_best_f: float
    per_checkpoint_mean: Tuple[Tuple[int, float], ...] = Field(default=())
    per_checkpoint_std: Tuple[Tuple[int, float], ...] = Field(default=())

    @model_validator(mode="after")
    def _check_monotone(self) -> "AggregateStats":
        means = [m for _, m in self.per_checkpoint_mean]
        if any(b > a for a, b in zip(means, means[1:])):
            raise ValueError("per-checkpoint means must be non-increasing")
        return self


class ReplicateOutcome(BaseModel):
    """Aggregates plus the raw runs, ordered by run index."""

    model_config = ConfigDict(frozen=True)

    plan: ExperimentPlan
    stats: AggregateStats
    runs: Tuple[RunResult, ...]

    def hit_rate(self, x: int) -> float:
        return sum(1 for run in self.runs if x in run.hits) / len(self.runs)

    def miss_fraction(self, x: int) -> float:
        return 1.0 - self.hit_rate(x)


class BudgetSweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    outcomes: Tuple[ReplicateOutcome, ...]
    reference_levels: Tuple[float, ...] = Field(
        default=(), description="Values of the lowest catalog minima, drawn as horizontal lines"
    )


class PhaseEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    dims: int
    beta: float
    step: int = Field(ge=0)
    rel_std: float = Field(ge=0.0, le=0.5)


class PhaseSweepResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: Tuple[PhaseEntry, ...] = Field(default=())
    snapshots: Tuple[Snapshot, ...] = Field(default=())

    def rel_std(self, beta: float, step: int) -> float:
        for entry in self.entries:
            if entry.beta == beta and entry.step == step:
                return entry.rel_std
        raise KeyError((beta, step))


class EnsembleCoverage(BaseModel):
    model_config = ConfigDict(frozen=True)

    k: int = Field(default=10, ge=1)
    per_run_found: Tuple[int, ...] = Field(default=())
    mean_found: float = Field(default=0.0)

    @model_validator(mode="after")
    def _check_counts(self) -> "EnsembleCoverage":
        if any(not 0 <= n <= self.k for n in self.per_run_found):
            raise ValueError(f"found counts must lie in [0, {self.k}]")
        if not 0.0 <= self.mean_found <= self.k:
            raise ValueError(f"mean_found must lie in [0, {self.k}]")
        return self


class ExperimentState(BaseModel):
    """
    State carried through the experiment workflow graph.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    # --- Input parameters ---
    plan: ExperimentPlan
    ensemble_k: Optional[int] = Field(default=None, ge=1, description="Top-k coverage is computed when set")
    workers: int = Field(default=1, ge=1, description="Process pool size for replicated runs")
    runs_out: Optional[str] = Field(default=None, description="Runs CSV path")
    trace_out: Optional[str] = Field(default=None, description="Trace CSV path")
    ensemble_out: Optional[str] = Field(default=None, description="Ensemble CSV path")

    # --- Oracle ---
    catalog: Optional[MinimaCatalog] = Field(default=None, description="Local minima of the plan's domain")

    # --- Replicated runs ---
    outcome: Optional[ReplicateOutcome] = Field(default=None, description="Aggregates and raw runs")

    # --- Ensemble coverage ---
    coverage: Optional[EnsembleCoverage] = Field(default=None, description="Top-k minima found per run")

    # --- Processing metadata ---
    written: List[str] = Field(default=[], description="Files written by the export stage")
    current_step: str = Field(default="starting", description="Current step in the pipeline")
    processing_time: Dict[str, float] = Field(default={}, description="Seconds spent on each step")
