import math

import numpy as np
import pytest
from pydantic import ValidationError

from optimizers import (
    ALGORITHMS,
    AcceptanceRule,
    AlgorithmConfig,
    IsingConfig,
    RunResult,
    acceptance_probability,
    best_at,
    run_algorithm,
    run_cellular,
    run_ising,
    run_mixture,
    run_mutation,
    run_random_search,
    run_sim_annealing,
)
from optimizers.annealing import annealing_beta
from tools.errors import BudgetExhausted
from tools.objective_tool import BudgetedEvaluator, ObjectiveSpec, raw_value
from tools.variation_tool import propose

SMALL = {
    "ising": AlgorithmConfig(algorithm="ising", width=10, height=10),
    "ising-ring": AlgorithmConfig(algorithm="ising", dims=1, width=100, height=1),
    "cellular": AlgorithmConfig(algorithm="cellular", width=10, height=10),
    "annealing": AlgorithmConfig(algorithm="annealing"),
    "mutation": AlgorithmConfig(algorithm="mutation"),
    "mixture": AlgorithmConfig(algorithm="mixture"),
    "random": AlgorithmConfig(algorithm="random"),
}


def _run(config: AlgorithmConfig, seed: int, budget: int = 2_000, catalog=None) -> RunResult:
    ev = BudgetedEvaluator(ObjectiveSpec(), budget)
    return run_algorithm(config, ev, np.random.default_rng(seed), catalog)


class TestAcceptance:
    def test_improving(self):
        for beta in (0.0, 1.0, 100.0, 1e9):
            assert acceptance_probability(0.5, 0.2, AcceptanceRule(beta=beta)) == 1.0

    def test_equal(self):
        assert acceptance_probability(0.2, 0.2, AcceptanceRule(beta=100)) == 1.0

    def test_worse(self):
        assert acceptance_probability(0.0, 0.01, AcceptanceRule(beta=100)) == pytest.approx(math.exp(-1))

    def test_decreasing_in_beta(self):
        probs = [acceptance_probability(0.1, 0.11, AcceptanceRule(beta=b)) for b in (0.1, 1, 10, 100)]
        assert all(a > b for a, b in zip(probs, probs[1:]))

    def test_decreasing_in_gap(self):
        rule = AcceptanceRule(beta=10)
        probs = [acceptance_probability(0.1, 0.1 + gap, rule) for gap in (0.001, 0.01, 0.1, 0.5)]
        assert all(a > b for a, b in zip(probs, probs[1:]))

    def test_zero_beta_accepts_everything(self):
        assert acceptance_probability(0.0, 1.0, AcceptanceRule(beta=0)) == 1.0

    @pytest.mark.parametrize("beta", [-1.0, float("inf")])
    def test_invalid_beta(self, beta):
        with pytest.raises(ValidationError):
            AcceptanceRule(beta=beta)


class TestRunContract:
    @pytest.mark.parametrize("name", sorted(SMALL))
    def test_budget_trace_and_closure(self, name, default_catalog):
        for seed in range(20):
            result = _run(SMALL[name], seed, catalog=default_catalog)
            assert result.evals_used == 2_000
            values = [f for _, f in result.trace]
            assert all(a >= b for a, b in zip(values, values[1:]))
            indices = [idx for idx, _ in result.trace]
            assert all(1 <= idx <= 2_000 for idx in indices)
            assert 0 <= result.best_x < 100_000
            assert result.best_f == raw_value(result.best_x) > 0
            assert result.trace[-1] == (indices[-1], result.best_f)
            assert result.hits <= default_catalog.argmins()

    @pytest.mark.parametrize("name", sorted(SMALL))
    def test_deterministic(self, name):
        assert _run(SMALL[name], 7) == _run(SMALL[name], 7)

    def test_trace_must_be_monotone(self):
        with pytest.raises(ValidationError):
            RunResult(best_x=1, best_f=0.1, evals_used=2, trace=((1, 0.1), (2, 0.2)))

    def test_best_at(self):
        result = RunResult(best_x=3, best_f=0.1, evals_used=10, trace=((1, 0.5), (4, 0.3), (9, 0.1)))
        assert math.isnan(best_at(result, 0))
        assert best_at(result, 1) == 0.5
        assert best_at(result, 8) == 0.3
        assert best_at(result, 10) == 0.1

    def test_algorithm_ids(self):
        assert ALGORITHMS == ("ising", "cellular", "annealing", "mutation", "mixture", "random")
        assert all(AlgorithmConfig(algorithm=name).algorithm == name for name in ALGORITHMS)

    def test_config_ids(self):
        assert AlgorithmConfig().config_id == "2d-30x30-b100"
        assert AlgorithmConfig(dims=1, width=900, height=1).config_id == "1d-900-b100"
        assert AlgorithmConfig(algorithm="mixture").config_id == "pop100-k0.1"

    def test_ring_needs_height_one(self):
        with pytest.raises(ValidationError):
            AlgorithmConfig(algorithm="ising", dims=1, width=900, height=30)


class TestIsing:
    def test_one_update_after_init(self, make_evaluator, rng):
        ev = make_evaluator(901)
        result = run_ising(IsingConfig(), ev, rng)
        assert result.evals_used == 901

    def test_population_larger_than_budget(self, make_evaluator, rng):
        with pytest.raises(BudgetExhausted):
            run_ising(IsingConfig(), make_evaluator(900), rng)

    def test_quals_stay_coherent(self, make_evaluator, rng):
        seen = {}

        def observe(state, used):
            seen["state"] = state
            seen["used"] = used

        run_ising(IsingConfig(width=8, height=8), make_evaluator(5_000), rng, on_step=observe)
        state = seen["state"]
        assert seen["used"] == 5_000
        expected = np.vectorize(raw_value, otypes=[float])(state.cells)
        assert np.array_equal(expected, state.quals)

    def test_frozen_limit_is_hill_climbing(self, make_evaluator, rng):
        previous = {}

        def observe(state, used):
            if "quals" in previous:
                assert (state.quals <= previous["quals"]).all()
            previous["quals"] = state.quals.copy()

        run_ising(IsingConfig(width=5, height=5, beta=1e9), make_evaluator(3_000), rng, on_step=observe)

    def test_best_only_moves_on_acceptance(self, make_evaluator, rng):
        accepted = []

        def observe(state, used):
            accepted.append(float(state.quals.min()))

        result = run_ising(IsingConfig(width=5, height=5), make_evaluator(2_000), rng, on_step=observe)
        assert result.best_f == pytest.approx(min(accepted))

    def test_observer_sees_init_then_every_step(self, make_evaluator, rng):
        counts = []
        run_ising(IsingConfig(width=4, height=4), make_evaluator(40), rng, on_step=lambda s, used: counts.append(used))
        assert counts == list(range(16, 41))


class TestCellular:
    def test_zero_probability_is_local_hill_climbing(self, make_evaluator, rng):
        previous = {}

        def observe(state, used):
            if "quals" in previous:
                assert (state.quals <= previous["quals"]).all()
            previous["quals"] = state.quals.copy()

        result = run_cellular(
            IsingConfig(width=5, height=5), make_evaluator(2_000), rng, accept_worse_prob=0.0, on_step=observe
        )
        assert result.evals_used == 2_000
        assert result.best_f == pytest.approx(float(previous["quals"].min()))

    def test_unit_probability_accepts_every_proposal(self, make_evaluator, rng, monkeypatch):
        proposed = []

        def recording_propose(*args, **kwargs):
            proposed.append(propose(*args, **kwargs))
            return proposed[-1]

        monkeypatch.setattr("optimizers.ising.propose", recording_propose)

        steps = []

        def observe(state, used):
            if proposed:
                assert proposed[-1] in state.cells
            steps.append(used)

        run_cellular(IsingConfig(width=5, height=5), make_evaluator(500), rng, accept_worse_prob=1.0, on_step=observe)
        assert len(proposed) == 500 - 25
        assert steps[-1] == 500

    def test_probability_range(self, make_evaluator, rng):
        with pytest.raises(ValueError):
            run_cellular(IsingConfig(), make_evaluator(2_000), rng, accept_worse_prob=1.5)


class TestAnnealing:
    def test_schedules(self):
        assert annealing_beta(1.0, 10_000) == 100.0
        assert annealing_beta(2.0, 4, "linear") == 8.0

    def test_zero_beta0_runs(self, make_evaluator, rng):
        assert run_sim_annealing(0.0, make_evaluator(500), rng).evals_used == 500

    def test_negative_beta0(self, make_evaluator, rng):
        with pytest.raises(ValueError):
            run_sim_annealing(-1.0, make_evaluator(10), rng)


class TestMutation:
    def test_sticks_at_lowest_point(self, make_evaluator, rng, default_catalog):
        result = run_mutation(make_evaluator(10_000), rng, default_catalog, start=84822)
        assert result.best_x == 84822
        assert result.trace == ((1, raw_value(84822)),)
        assert 84822 in result.hits


class TestMixture:
    def test_identical_population_is_fixed_point(self, rng):
        ev = BudgetedEvaluator(ObjectiveSpec(lo=500, hi=501), 50)
        result = run_mixture(ev, rng, pop_size=2)
        assert (result.best_x, result.evals_used) == (500, 50)

    def test_improving_child_replaces_worse_parent(self, make_evaluator, rng):
        # child 84847 lies between the two parents' values
        seen = []
        run_mixture(
            make_evaluator(3), rng, pop_size=2, keep_prob=0.0, start=(84822, 84872),
            on_step=lambda population, used: seen.append(population),
        )
        assert raw_value(84822) < raw_value(84847) < raw_value(84872)
        assert seen == [(84822, 84872), (84822, 84847)]

    def test_child_worse_than_both_parents_is_dropped(self, make_evaluator, rng):
        # neighbouring minima average to a point near a peak
        seen = []
        result = run_mixture(
            make_evaluator(20), rng, pop_size=2, keep_prob=0.0, start=(84508, 84822),
            on_step=lambda population, used: seen.append(population),
        )
        assert raw_value(84665) > max(raw_value(84508), raw_value(84822))
        assert len(seen) == 19
        assert set(seen) == {(84508, 84822)}
        assert result.best_x == 84822

    def test_start_must_match_population(self, make_evaluator, rng):
        with pytest.raises(ValueError):
            run_mixture(make_evaluator(10), rng, pop_size=3, start=(1, 2))

    def test_budget_must_exceed_population(self, make_evaluator, rng):
        with pytest.raises(BudgetExhausted):
            run_mixture(make_evaluator(100), rng)

    @pytest.mark.parametrize("kwargs", [{"pop_size": 1}, {"keep_prob": 2.0}])
    def test_invalid_parameters(self, make_evaluator, rng, kwargs):
        with pytest.raises(ValueError):
            run_mixture(make_evaluator(1_000), rng, **kwargs)


class TestRandomSearch:
    def test_single_draw(self, make_evaluator):
        result = run_random_search(make_evaluator(1), np.random.default_rng(4))
        expected = int(np.random.default_rng(4).integers(0, 100_000))
        assert (result.best_x, result.best_f, result.evals_used) == (expected, raw_value(expected), 1)

    def test_zero_budget(self, make_evaluator, rng):
        with pytest.raises(BudgetExhausted):
            run_random_search(make_evaluator(0), rng)
