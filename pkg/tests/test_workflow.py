import csv

import pytest
from pydantic import ValidationError

from agents.oracle_agent import build_catalog_node
from graph.state import ExperimentPlan, ExperimentState
from graph.workflow import create_workflow, route_after_replicate, run_experiment
from optimizers import AlgorithmConfig
from tools.errors import ConfigurationError


def _state(tmp_path, **kwargs) -> ExperimentState:
    plan = ExperimentPlan(
        algorithm=AlgorithmConfig(algorithm="ising", width=5, height=5), n_runs=3, budget=800, base_seed=2
    )
    return ExperimentState(plan=plan, runs_out=str(tmp_path / "runs.csv"), **kwargs)


def _rows(path):
    with open(path) as handle:
        return list(csv.reader(handle))


def test_graph_compiles():
    assert create_workflow() is not None


def test_bench_pipeline(tmp_path):
    final = run_experiment(_state(tmp_path, trace_out=str(tmp_path / "trace.csv")))
    assert final.current_step == "export_results_completed"
    assert final.catalog is not None and len(final.catalog) == 318
    assert len(final.outcome.runs) == 3
    assert final.coverage is None
    assert set(final.processing_time) == {"build_catalog", "replicate", "export_results"}

    runs = _rows(tmp_path / "runs.csv")
    assert runs[0] == ["algorithm", "config_id", "seed", "evals_used", "best_x", "best_f"]
    assert [row[2] for row in runs[1:]] == ["2", "3", "4"]
    assert all(row[:2] == ["ising", "2d-5x5-b100"] and row[3] == "800" for row in runs[1:])
    trace = _rows(tmp_path / "trace.csv")
    assert trace[0] == ["algorithm", "config_id", "seed", "eval_index", "best_f"]
    assert len(trace) > 3


def test_ensemble_branch(tmp_path):
    state = _state(tmp_path, ensemble_k=10, ensemble_out=str(tmp_path / "ensemble.csv"))
    assert route_after_replicate(state) == "ensemble_coverage"
    final = run_experiment(state)
    assert final.coverage is not None
    assert len(final.coverage.per_run_found) == 3
    rows = _rows(tmp_path / "ensemble.csv")
    assert rows[0] == ["algorithm", "config_id", "seed", "found_count"]
    assert [int(row[3]) for row in rows[1:]] == list(final.coverage.per_run_found)
    assert len(final.written) == 2


def test_route_without_ensemble(tmp_path):
    assert route_after_replicate(_state(tmp_path)) == "export_results"


def test_ensemble_k_must_be_positive(tmp_path):
    with pytest.raises(ValidationError):
        _state(tmp_path, ensemble_k=0)


def test_ensemble_k_beyond_catalog_fails_before_runs(tmp_path, monkeypatch):
    def no_runs(state):
        pytest.fail("replicate ran with an invalid k")

    monkeypatch.setattr("graph.workflow.replicate_node", no_runs)
    with pytest.raises(ConfigurationError):
        build_catalog_node(_state(tmp_path, ensemble_k=400))
    with pytest.raises(ConfigurationError):
        run_experiment(_state(tmp_path, ensemble_k=400))
