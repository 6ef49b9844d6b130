import numpy as np
import pytest

from agents.oracle_agent import cached_catalog
from tools.objective_tool import BudgetedEvaluator, MinimaCatalog, ObjectiveSpec


@pytest.fixture(scope="session")
def default_spec() -> ObjectiveSpec:
    return ObjectiveSpec()


@pytest.fixture(scope="session")
def default_catalog(default_spec) -> MinimaCatalog:
    return cached_catalog(default_spec)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def make_evaluator(default_spec):
    def _make(budget: int) -> BudgetedEvaluator:
        return BudgetedEvaluator(default_spec, budget)

    return _make
