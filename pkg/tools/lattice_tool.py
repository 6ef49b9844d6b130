import logging
from typing import Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from tools.errors import BudgetExhausted, ConfigurationError
from tools.objective_tool import BudgetedEvaluator, ObjectiveSpec

logger = logging.getLogger(__name__)

Site = Tuple[int, int]


class LatticeState:
    """
    Population of integer candidates on a ring (dims=1) or torus (dims=2).

    cells[i, j] holds a candidate, quals[i, j] its cached objective value.
    Index i runs over the width, j over the height (always 0 for a ring).
    """

    def __init__(self, dims: int, cells: np.ndarray, quals: np.ndarray, domain: ObjectiveSpec):
        self.dims = dims
        self.cells = cells
        self.quals = quals
        self.domain = domain

    @property
    def width(self) -> int:
        return self.cells.shape[0]

    @property
    def height(self) -> int:
        return self.cells.shape[1]

    @property
    def size(self) -> int:
        return self.cells.size

    def neighbors(self, i: int, j: int) -> Tuple[Site, ...]:
        w, h = self.width, self.height
        if self.dims == 1:
            return (((i - 1) % w, 0), ((i + 1) % w, 0))
        return (
            ((i - 1) % w, j),
            ((i + 1) % w, j),
            (i, (j - 1) % h),
            (i, (j + 1) % h),
        )

    def replace(self, i: int, j: int, x: int, f: float) -> None:
        self.cells[i, j] = x
        self.quals[i, j] = f

    def best(self) -> Tuple[int, float]:
        flat = int(np.argmin(self.quals))
        i, j = np.unravel_index(flat, self.quals.shape)
        return int(self.cells[i, j]), float(self.quals[i, j])


class Snapshot(BaseModel):
    """Frozen copy of a lattice grid, tagged with evaluation count and beta."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    step: int = Field(ge=0, description="Evaluations consumed when taken")
    beta: float
    cells: np.ndarray

    @field_validator("cells")
    @classmethod
    def _read_only(cls, cells: np.ndarray) -> np.ndarray:
        cells = np.array(cells, dtype=np.int64, copy=True)
        cells.setflags(write=False)
        return cells


def init_uniform(
    ev: BudgetedEvaluator,
    dims: Literal[1, 2],
    width: int,
    height: int,
    rng: np.random.Generator,
) -> LatticeState:
    if dims not in (1, 2):
        raise ConfigurationError(f"dims must be 1 or 2, got {dims}")
    if dims == 1 and height != 1:
        raise ConfigurationError(f"a ring has height 1, got {height}")
    if width < 1 or height < 1:
        raise ConfigurationError(f"lattice sides must be positive, got {width}x{height}")

    size = width * height
    if ev.remaining <= size:
        raise BudgetExhausted(
            f"budget of {ev.remaining} evaluations must exceed the population size {size}"
        )

    spec = ev.spec
    cells = rng.integers(spec.lo, spec.hi, size=(width, height), dtype=np.int64)
    quals = np.empty((width, height), dtype=np.float64)
    for i in range(width):
        for j in range(height):
            quals[i, j] = ev.evaluate(int(cells[i, j]))
    return LatticeState(dims, cells, quals, spec)


def pick_site(state: LatticeState, rng: np.random.Generator) -> Site:
    i = int(rng.integers(state.width))
    if state.dims == 1:
        return i, 0
    return i, int(rng.integers(state.height))


def pick_neighbor(state: LatticeState, i: int, j: int, rng: np.random.Generator) -> Site:
    options = state.neighbors(i, j)
    return options[int(rng.integers(len(options)))]


def relative_std(state: LatticeState) -> float:
    """Population std (divide by N) of the cell values over the domain width."""
    return float(np.std(state.cells, dtype=np.float64)) / state.domain.width


def take_snapshot(state: LatticeState, step: int, beta: float) -> Snapshot:
    return Snapshot(step=step, beta=beta, cells=state.cells)
