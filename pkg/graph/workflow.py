from langgraph.graph import END, StateGraph

from agents.ensemble_agent import ensemble_node
from agents.export_agent import export_results_node
from agents.oracle_agent import build_catalog_node
from agents.replicate_agent import replicate_node
from graph.state import ExperimentState


def route_after_replicate(state: ExperimentState) -> str:
    """Score ensemble coverage only when a top-k size was requested"""
    return "ensemble_coverage" if state.ensemble_k is not None else "export_results"


def create_workflow():
    """Create the workflow for a replicated experiment"""

    workflow = StateGraph(ExperimentState)

    # Add all nodes
    workflow.add_node("build_catalog", build_catalog_node)
    workflow.add_node("replicate", replicate_node)
    workflow.add_node("ensemble_coverage", ensemble_node)
    workflow.add_node("export_results", export_results_node)

    # Set entry point
    workflow.set_entry_point("build_catalog")

    # Define the flow
    workflow.add_edge("build_catalog", "replicate")
    workflow.add_conditional_edges(
        "replicate",
        route_after_replicate,
        {"ensemble_coverage": "ensemble_coverage", "export_results": "export_results"},
    )
    workflow.add_edge("ensemble_coverage", "export_results")
    workflow.add_edge("export_results", END)

    return workflow.compile()


def run_experiment(initial_state: ExperimentState) -> ExperimentState:
    """Invoke the compiled graph and return the final state as a model."""
    final_state = create_workflow().invoke(initial_state)
    if isinstance(final_state, ExperimentState):
        return final_state
    return ExperimentState(**final_state)
