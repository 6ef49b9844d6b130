import bisect
import math
from typing import Callable, FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from tools.lattice_tool import LatticeState
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog

# Called with the lattice and the evaluation count after init and after every update.
StepObserver = Callable[[LatticeState, int], None]


class AcceptanceRule(BaseModel):
    model_config = ConfigDict(frozen=True)

    beta: float = Field(default=100.0, ge=0, allow_inf_nan=False, description="Inverse temperature")


def metropolis(old: float, new: float, beta: float) -> float:
    if old > new:
        return 1.0
    return min(1.0, math.exp(beta * (old - new)))


def acceptance_probability(old: float, new: float, rule: AcceptanceRule) -> float:
    """1 when the proposal improves, else exp(beta * (old - new))."""
    return metropolis(old, new, rule.beta)


class RunResult(BaseModel):
    """Outcome of one optimizer run."""

    model_config = ConfigDict(frozen=True)

    best_x: int
    best_f: float
    evals_used: int = Field(ge=0)
    trace: Tuple[Tuple[int, float], ...] = Field(
        default=(), description="(eval_index, best_f_so_far) at every improvement"
    )
    hits: FrozenSet[int] = Field(
        default=frozenset(), description="Evaluated points that are exact catalog argmins"
    )

    @model_validator(mode="after")
    def _check_trace(self) -> "RunResult":
        previous = math.inf
        for _, f in self.trace:
            if f > previous:
                raise ValueError("best-so-far trace must be non-increasing")
            previous = f
        return self


class RunRecorder:
    """
    Evaluates through a budgeted evaluator and keeps best-so-far, trace and hits.

    `evaluate` records hits for every evaluation; `offer` decides what counts
    as a best-so-far candidate, so each algorithm chooses when to call it.
    """

    def __init__(self, ev: BudgetedEvaluator, catalog: Optional[MinimaCatalog] = None):
        self.ev = ev
        self._targets = catalog.argmins() if catalog is not None else frozenset()
        self.hits: set = set()
        self.best_x: Optional[int] = None
        self.best_f = math.inf
        self.trace: List[Tuple[int, float]] = []

    def evaluate(self, x: int) -> float:
        f = self.ev.evaluate(x)
        if x in self._targets:
            self.hits.add(x)
        return f

    def note_hit(self, x: int) -> None:
        if x in self._targets:
            self.hits.add(x)

    def offer(self, x: int, f: float, eval_index: Optional[int] = None) -> None:
        if f < self.best_f:
            self.best_x = x
            self.best_f = f
            self.trace.append((self.ev.used if eval_index is None else eval_index, f))

    def result(self) -> RunResult:
        return RunResult(
            best_x=self.best_x,
            best_f=self.best_f,
            evals_used=self.ev.used,
            trace=tuple(self.trace),
            hits=frozenset(self.hits),
        )


def best_at(result: RunResult, eval_index: int) -> float:
    """Best-so-far value after `eval_index` evaluations; nan before the first one."""
    indices = [idx for idx, _ in result.trace]
    position = bisect.bisect_right(indices, eval_index)
    if position == 0:
        return math.nan
    return result.trace[position - 1][1]
