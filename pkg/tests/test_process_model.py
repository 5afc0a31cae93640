"""Graph template, edits, wildcard expansion and validation."""

from __future__ import annotations

import random

import pytest

from admin_tm.errors import (
    DuplicateNodeError,
    UnknownEdgeError,
    UnknownNodeError,
    WouldDisconnectDeploymentError,
)
from admin_tm.process_model import (
    Edge,
    GraphEdit,
    Guard,
    Node,
    NodeKind,
    Phase,
    ProcessGraph,
    RemoveMode,
    apply_edit,
    apply_edits,
    default_graph,
    expand_wildcards,
    validate,
)
from oracles import (
    ARTIFACT_IDS,
    CANONICAL_EDGES,
    DECISION_IDS,
    PROCESS_IDS,
    oracle_expand,
    random_graph,
)


def _edge_triples(graph: ProcessGraph) -> list[tuple[str, str, str | None]]:
    return [(e.source, e.target, e.guard.value if e.guard else None) for e in graph.edges]


def test_default_graph_node_census():
    graph = default_graph()
    processes = [n for n in graph.nodes if n.kind is NodeKind.PROCESS]
    decisions = [n for n in graph.nodes if n.kind is NodeKind.DECISION]
    artifacts = [n for n in graph.nodes if n.kind is NodeKind.ARTIFACT]
    assert [p.id for p in processes] == list(PROCESS_IDS)
    assert [d.id for d in decisions] == list(DECISION_IDS)
    assert [a.id for a in artifacts] == list(ARTIFACT_IDS)
    assert len(graph.nodes) == 30


def test_default_graph_edges_exact():
    assert _edge_triples(default_graph()) == list(CANONICAL_EDGES)


def test_default_graph_wildcards():
    graph = default_graph()
    assert len(graph.edges) == 38
    assert len(graph.wildcard_edges) == 3
    assert {e.source for e in graph.wildcard_edges} == {
        "hyperparameter_tuning",
        "d2_model_adequate",
        "d3_model_adequate",
    }


def test_default_graph_passes_validation():
    assert validate(default_graph()).ok


def test_process_phases_and_order():
    graph = default_graph()
    phase_of = {p.id: p.phase for p in graph.processes}
    assert phase_of["requirement_engineering"] is Phase.DATA_PROCESSING
    assert phase_of["feature_engineering_labelling"] is Phase.DATA_PROCESSING
    assert phase_of["model_training"] is Phase.MODEL_DEVELOPMENT
    assert phase_of["model_evaluation_after_development"] is Phase.MODEL_DEVELOPMENT
    assert phase_of["software_deployment"] is Phase.DEPLOYMENT
    assert phase_of["model_evaluation_during_deployment"] is Phase.DEPLOYMENT
    indices = [p.canonical_index for p in graph.processes]
    assert indices == sorted(indices) == list(range(1, 11))


def test_node_invariants_enforced_at_construction():
    with pytest.raises(ValueError):
        Node("Bad-Id", NodeKind.ARTIFACT, "Bad")
    with pytest.raises(ValueError):
        Node("p_new", NodeKind.PROCESS, "No Phase")
    with pytest.raises(ValueError):
        Node("a_new", NodeKind.ARTIFACT, "Indexed", canonical_index=4)
    with pytest.raises(ValueError):
        Node("a_new", NodeKind.ARTIFACT, "")


def test_edge_target_wildcard_allowed():
    assert Edge("hyperparameter_tuning", "*").is_wildcard
    with pytest.raises(ValueError):
        Edge("x", "Not-An-Id")


# --- edits ---------------------------------------------------------------


def test_splice_resources_outputs_to_upstream_process():
    graph = apply_edit(
        default_graph(),
        GraphEdit.remove_process("feature_engineering_labelling", RemoveMode.SPLICE),
    )
    triples = _edge_triples(graph)
    assert not graph.has_node("feature_engineering_labelling")
    assert ("a_clean_dataset", "feature_engineering_labelling", None) not in triples
    # the five outputs now come from data preparation
    for artifact in ("a_features", "a_labels", "a_training_dataset",
                     "a_validation_dataset", "a_testing_dataset"):
        assert ("data_preparation", artifact, None) in triples
    assert graph.has_node("a_features")
    assert validate(graph).ok


def test_splice_drops_outputs_when_no_upstream_process():
    graph = apply_edit(
        default_graph(), GraphEdit.remove_process("requirement_engineering", RemoveMode.SPLICE)
    )
    triples = _edge_triples(graph)
    assert all(src != "requirement_engineering" for src, _, _ in triples)
    assert all(dst != "a_requirements_spec" or src != "requirement_engineering" for src, dst, _ in triples)
    assert graph.has_node("a_requirements_spec")
    assert validate(graph).ok


def test_prune_cascades_decision_and_sweeps_artifact():
    graph = apply_edit(
        default_graph(),
        GraphEdit.remove_process("model_evaluation_during_deployment", RemoveMode.PRUNE),
    )
    assert not graph.has_node("model_evaluation_during_deployment")
    assert not graph.has_node("d3_model_adequate")  # lost its only input
    triples = _edge_triples(graph)
    assert ("d3_model_adequate", "software_deployment", "yes") not in triples
    assert ("d3_model_adequate", "*", "no") not in triples
    assert len(graph.edges) == 38 - 4
    assert validate(graph).ok


def test_prune_sweeps_orphaned_decision_artifact():
    graph = apply_edit(default_graph(), GraphEdit.remove_process("decision_making", RemoveMode.PRUNE))
    assert not graph.has_node("decision_making")
    assert not graph.has_node("a_decision")  # left with no producer and no consumer
    assert graph.has_node("a_prediction")  # still produced by deployment
    assert validate(graph).ok


def test_remove_artifact_then_prune_process_applies_cleanly():
    graph = apply_edits(
        default_graph(),
        (
            GraphEdit.remove_artifact("a_decision"),
            GraphEdit.remove_process("decision_making", RemoveMode.PRUNE),
        ),
    )
    assert not graph.has_node("a_decision")
    assert not graph.has_node("decision_making")
    assert validate(graph).ok


def test_deployment_process_is_irremovable():
    for mode in (RemoveMode.SPLICE, RemoveMode.PRUNE):
        with pytest.raises(WouldDisconnectDeploymentError):
            apply_edit(default_graph(), GraphEdit.remove_process("software_deployment", mode))


def test_remove_unknown_targets_raise():
    graph = default_graph()
    with pytest.raises(UnknownNodeError):
        apply_edit(graph, GraphEdit.remove_process("no_such_process"))
    with pytest.raises(UnknownNodeError):
        apply_edit(graph, GraphEdit.remove_artifact("a_missing"))
    with pytest.raises(UnknownNodeError):
        # artifact removal must name an artifact, not a process
        apply_edit(graph, GraphEdit.remove_artifact("model_training"))
    with pytest.raises(UnknownEdgeError):
        apply_edit(graph, GraphEdit.remove_edge("a_prediction", "model_training"))


def test_add_node_and_edge():
    extra = Node("a_audit_log", NodeKind.ARTIFACT, "Audit Log")
    graph = apply_edits(
        default_graph(),
        (
            GraphEdit.add_node(extra),
            GraphEdit.add_edge(Edge("software_deployment", "a_audit_log")),
        ),
    )
    assert graph.has_node("a_audit_log")
    assert ("software_deployment", "a_audit_log", None) in _edge_triples(graph)
    assert validate(graph).ok
    with pytest.raises(DuplicateNodeError):
        apply_edit(graph, GraphEdit.add_node(extra))
    with pytest.raises(UnknownNodeError):
        apply_edit(graph, GraphEdit.add_edge(Edge("a_audit_log", "a_nowhere")))


def test_remove_edge_cascades_decision_without_inputs():
    graph = apply_edit(
        default_graph(),
        GraphEdit.remove_edge("model_evaluation_during_development", "d1_model_adequate"),
    )
    assert not graph.has_node("d1_model_adequate")
    triples = _edge_triples(graph)
    assert ("d1_model_adequate", "hyperparameter_tuning", "no") not in triples
    assert ("d1_model_adequate", "model_evaluation_after_development", "yes") not in triples


def test_edits_do_not_mutate_the_input_graph():
    graph = default_graph()
    apply_edit(graph, GraphEdit.remove_process("decision_making", RemoveMode.PRUNE))
    assert len(graph.nodes) == 30
    assert len(graph.edges) == 38


# --- wildcard expansion ------------------------------------------------------


def test_expansion_on_default_graph_exact():
    expanded = expand_wildcards(default_graph())
    assert not expanded.wildcard_edges
    triples = _edge_triples(expanded)
    assert len(triples) == 38 - 3 + (5 + 6 + 7)
    # tuning feeds back into every earlier development process
    for target in PROCESS_IDS[:5]:
        assert ("hyperparameter_tuning", target, None) in triples
    # the post-development "no" branch reaches every process before its evaluator
    for target in PROCESS_IDS[:6]:
        assert ("d2_model_adequate", target, "no") in triples
    # the in-deployment "no" branch reaches all seven development processes
    for target in PROCESS_IDS[:7]:
        assert ("d3_model_adequate", target, "no") in triples
    # fallback arrows never land in the deployment phase
    deployment = {"software_deployment", "decision_making", "model_evaluation_during_deployment"}
    fallback_sources = {("hyperparameter_tuning", None), ("d2_model_adequate", "no"), ("d3_model_adequate", "no")}
    assert all(
        dst not in deployment for src, dst, guard in triples if (src, guard) in fallback_sources
    )


def test_expansion_matches_oracle_on_default_graph():
    expanded = expand_wildcards(default_graph())
    assert sorted(_edge_triples(expanded)) == sorted(oracle_expand(default_graph()))


def test_expansion_matches_oracle_on_random_graphs():
    rng = random.Random(20260816)
    for _ in range(50):
        graph = random_graph(rng)
        expanded = expand_wildcards(graph)
        assert not expanded.wildcard_edges
        assert sorted(_edge_triples(expanded)) == sorted(oracle_expand(graph))


def test_expansion_is_idempotent():
    once = expand_wildcards(default_graph())
    assert expand_wildcards(once) == once


def test_expansion_preserves_guards():
    expanded = expand_wildcards(default_graph())
    d2_targets = [e for e in expanded.edges if e.source == "d2_model_adequate" and e.target != "software_deployment"]
    assert d2_targets and all(e.guard is Guard.NO for e in d2_targets)


# --- validation ----------------------------------------------------------------


def _codes(graph: ProcessGraph) -> set[str]:
    return {v.code for v in validate(graph).violations}


def test_validate_flags_dangling_edge():
    graph = ProcessGraph(
        nodes=default_graph().nodes,
        edges=default_graph().edges + (Edge("a_prediction", "a_ghost"),),
    )
    assert "dangling_edge" in _codes(graph)


def test_validate_flags_duplicate_node_ids():
    node = Node("a_twin", NodeKind.ARTIFACT, "Twin")
    graph = ProcessGraph(nodes=default_graph().nodes + (node, node), edges=default_graph().edges)
    assert "duplicate_node_id" in _codes(graph)


def test_validate_flags_guard_problems():
    base = default_graph()
    graph = ProcessGraph(nodes=base.nodes, edges=base.edges + (Edge("model_training", "a_labels", Guard.YES),))
    assert "guard_on_non_decision" in _codes(graph)
    graph = ProcessGraph(nodes=base.nodes, edges=base.edges + (Edge("d1_model_adequate", "model_training"),))
    assert "missing_guard_on_decision" in _codes(graph)


def test_validate_flags_self_loop():
    base = default_graph()
    graph = ProcessGraph(nodes=base.nodes, edges=base.edges + (Edge("model_training", "model_training"),))
    assert "self_loop" in _codes(graph)


def test_validate_flags_missing_deployment():
    nodes = tuple(n for n in default_graph().nodes if n.id != "software_deployment")
    edges = tuple(e for e in default_graph().edges if "software_deployment" not in (e.source, e.target))
    assert "would_disconnect_deployment" in _codes(ProcessGraph(nodes=nodes, edges=edges))


def test_validate_flags_phase_order_breach():
    # a deployment-phase process indexed before the development ones
    rogue = Node("early_deploy_step", NodeKind.PROCESS, "Early Step", Phase.DEPLOYMENT, 1)
    graph = ProcessGraph(nodes=default_graph().nodes + (rogue,), edges=default_graph().edges)
    assert "phase_order" in _codes(graph)


def test_validate_flags_unlabelled_question():
    nodes = tuple(
        n if n.id != "d1_model_adequate" else Node("d1_model_adequate", NodeKind.DECISION, "Model Adequate")
        for n in default_graph().nodes
    )
    graph = ProcessGraph(nodes=nodes, edges=default_graph().edges)
    assert "decision_label_not_question" in _codes(graph)
