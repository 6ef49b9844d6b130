import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from tools.errors import BudgetExhausted, ConfigurationError, DomainViolation

logger = logging.getLogger(__name__)


def raw_value(x: int) -> float:
    """|sin((x + 1) / 100)| in double precision, defined for every integer."""
    return abs(math.sin((int(x) + 1) / 100))


# Objective registry keyed by id. Only the integer sine benchmark ships.
OBJECTIVES: Dict[str, Callable[[int], float]] = {
    "abs_sin": raw_value,
}


class ObjectiveSpec(BaseModel):
    """
    Benchmark function plus its integer optimisation domain [lo, hi).
    """

    model_config = ConfigDict(frozen=True)

    lo: int = Field(default=0, description="Inclusive lower bound of the domain")
    hi: int = Field(default=100_000, description="Exclusive upper bound of the domain")
    id: str = Field(default="abs_sin", description="Registry id of the objective function")

    @model_validator(mode="after")
    def _check_domain(self) -> "ObjectiveSpec":
        if self.lo >= self.hi:
            raise ValueError(f"empty domain: lo={self.lo} must be < hi={self.hi}")
        if self.id not in OBJECTIVES:
            raise ValueError(f"unknown objective id {self.id!r}; known: {sorted(OBJECTIVES)}")
        return self

    @property
    def function(self) -> Callable[[int], float]:
        return OBJECTIVES[self.id]

    @property
    def width(self) -> int:
        return self.hi - self.lo

    def contains(self, x: int) -> bool:
        return self.lo <= x < self.hi

    def clamp(self, x: int) -> int:
        return min(max(x, self.lo), self.hi - 1)


class BudgetedEvaluator:
    """
    Wraps an ObjectiveSpec with an exact evaluation budget.

    Every call costs one unit; repeated arguments are not cached.
    A single optimizer run owns an evaluator.
    """

    __slots__ = ("spec", "budget", "used", "_f")

    def __init__(self, spec: ObjectiveSpec, budget: int):
        if budget < 0:
            raise ConfigurationError(f"budget must be non-negative, got {budget}")
        self.spec = spec
        self.budget = int(budget)
        self.used = 0
        self._f = spec.function

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.budget

    def evaluate(self, x: int) -> float:
        if self.used >= self.budget:
            raise BudgetExhausted(f"budget of {self.budget} evaluations exhausted")
        if not self.spec.contains(x):
            raise DomainViolation(f"x={x} outside [{self.spec.lo}, {self.spec.hi})")
        self.used += 1
        return self._f(x)


def evaluate(ev: BudgetedEvaluator, x: int) -> float:
    return ev.evaluate(x)


class LocalMinimum(BaseModel):
    model_config = ConfigDict(frozen=True)

    argmin: int
    value: float = Field(description="Function value at argmin")
    rank: int = Field(ge=1, description="1 = lowest value in the domain")


class MinimaCatalog(BaseModel):
    """All strict local minima of a domain, ascending by value."""

    model_config = ConfigDict(frozen=True)

    minima: Tuple[LocalMinimum, ...] = Field(default=())
    domain: ObjectiveSpec = Field(default_factory=ObjectiveSpec)

    @model_validator(mode="after")
    def _check_ranks(self) -> "MinimaCatalog":
        for position, minimum in enumerate(self.minima, start=1):
            if minimum.rank != position:
                raise ValueError(f"rank {minimum.rank} at position {position}")
        return self

    def __len__(self) -> int:
        return len(self.minima)

    def argmins(self) -> frozenset:
        return frozenset(m.argmin for m in self.minima)

    def by_argmin(self, x: int) -> Optional[LocalMinimum]:
        for m in self.minima:
            if m.argmin == x:
                return m
        return None


def enumerate_local_minima(spec: ObjectiveSpec) -> MinimaCatalog:
    """
    Brute-force oracle: every x in [lo, hi) strictly below both neighbours.

    Boundary neighbours outside the domain are evaluated unbudgeted.
    """
    if spec.hi - spec.lo < 3:
        raise ConfigurationError(f"oracle needs at least 3 domain points, got {spec.width}")

    f = spec.function
    # values[k] holds f(lo - 1 + k)
    values = [f(x) for x in range(spec.lo - 1, spec.hi + 1)]
    found: List[Tuple[float, int]] = []
    for k in range(1, len(values) - 1):
        v = values[k]
        if v < values[k - 1] and v < values[k + 1]:
            found.append((v, spec.lo - 1 + k))

    found.sort()
    minima = tuple(
        LocalMinimum(argmin=x, value=v, rank=rank)
        for rank, (v, x) in enumerate(found, start=1)
    )
    logger.info("Oracle found %d local minima in [%d, %d)", len(minima), spec.lo, spec.hi)
    return MinimaCatalog(minima=minima, domain=spec)


def mean_minimum_value(cat: MinimaCatalog) -> float:
    if not cat.minima:
        raise ConfigurationError("mean of an empty catalog is undefined")
    return float(np.mean([m.value for m in cat.minima]))


def top_k(cat: MinimaCatalog, k: int) -> List[LocalMinimum]:
    if k < 1 or k > len(cat.minima):
        raise ConfigurationError(f"k={k} outside 1..{len(cat.minima)}")
    return list(cat.minima[:k])


def has_zero_in_domain(spec: ObjectiveSpec) -> bool:
    f = spec.function
    return any(f(x) == 0.0 for x in range(spec.lo, spec.hi))
