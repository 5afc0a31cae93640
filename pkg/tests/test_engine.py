"""Rule evaluation, attachment filtering and full enumeration."""

from __future__ import annotations

import random

import pytest

from admin_tm.engine import (
    Status,
    applicability,
    attach,
    enumerate_threats,
    threat_model,
)
from admin_tm.errors import InvalidGraphError, UnknownAttackError
from admin_tm.process_model import Edge, ProcessGraph, default_graph, expand_wildcards
from admin_tm.profile import build_profile
from admin_tm.taxonomy import leaves, stride_for
from conftest import (
    OPEN_CLASSIFIER_ANSWERS,
    PRIVATE_DETECTOR_ANSWERS,
    PRIVATE_DETECTOR_OVERLAY_EDITS,
)
from oracles import LEAF_IDS, random_answers, rule_table, truth_table_answers

ALL_MODALITIES = (
    "image", "video", "natural_language_text", "prompt_interface",
    "audio", "time_series", "tabular", "network_telemetry",
)


def _statuses(result) -> dict[str, tuple[str, str]]:
    return {
        f.attack: (f.applicability.status.value, f.applicability.reason_code.value)
        for f in result.findings
    }


def test_applicability_matches_rule_table_for_reference_profiles():
    for answers in (OPEN_CLASSIFIER_ANSWERS, PRIVATE_DETECTOR_ANSWERS):
        profile = build_profile(answers)
        expected = rule_table(answers)
        for attack in LEAF_IDS:
            outcome = applicability(attack, profile)
            assert (outcome.status.value, outcome.reason_code.value) == expected[attack], attack


def test_applicability_rejects_unknown_and_grouping_ids():
    profile = build_profile(OPEN_CLASSIFIER_ANSWERS)
    with pytest.raises(UnknownAttackError):
        applicability("data.exfiltration.everything", profile)
    with pytest.raises(UnknownAttackError):
        applicability("data.exfiltration", profile)


def test_truth_table_oracle_equivalence():
    for answers in truth_table_answers():
        result = threat_model(build_profile(answers))
        assert _statuses(result) == rule_table(answers)


def test_enumeration_is_deterministic_over_random_profiles():
    rng = random.Random(424242)
    for _ in range(100):
        answers = random_answers(rng)
        first = threat_model(build_profile(answers))
        second = threat_model(build_profile(dict(answers)))
        assert first == second


def test_modality_monotonicity():
    rng = random.Random(31337)
    for _ in range(100):
        answers = random_answers(rng)
        base = threat_model(build_profile(answers))
        extra = [m for m in ALL_MODALITIES if m not in answers["input_modalities"]]
        if not extra:
            continue
        enlarged = dict(answers)
        enlarged["input_modalities"] = list(answers["input_modalities"]) + rng.sample(
            extra, rng.randint(1, len(extra))
        )
        grown = threat_model(build_profile(enlarged))
        before = _statuses(base)
        after = _statuses(grown)
        for attack in LEAF_IDS:
            if before[attack][0] == "applicable":
                assert after[attack][0] == "applicable", attack
            if before[attack][0] == "accepted_risk":
                assert after[attack][0] == "accepted_risk", attack


def test_attach_filters_selector_to_graph():
    expanded = expand_wildcards(default_graph())
    assert attach("input.mitm", expanded) == {"a_production_data", "a_prediction", "decision_making"}
    assert attach("input.dos.flooding", expanded) == {"software_deployment"}

    classifier_graph = threat_model(build_profile(OPEN_CLASSIFIER_ANSWERS)).graph
    assert attach("data.poisoning", classifier_graph) == {
        "data_preparation",
        "a_raw_dataset",
        "a_clean_dataset",
        "a_training_dataset",
        "a_validation_dataset",
    }
    assert attach("input.mitm", classifier_graph) == {"a_production_data", "a_prediction"}


def test_enumeration_invariants(open_classifier_result, private_detector_result):
    for result in (open_classifier_result, private_detector_result):
        assert [f.attack for f in result.findings] == list(LEAF_IDS)
        node_ids = result.graph.node_ids
        for finding in result.findings:
            assert finding.stride == stride_for(finding.attack)
            assert finding.attachments <= node_ids
            if finding.applicability.status is Status.NOT_APPLICABLE:
                assert finding.attachments == frozenset()
            else:
                assert finding.attachments


def test_enumeration_counts_for_reference_profiles(open_classifier_result, private_detector_result):
    def count(result, status):
        return sum(1 for f in result.findings if f.applicability.status is status)

    assert count(open_classifier_result, Status.APPLICABLE) == 7
    assert count(open_classifier_result, Status.NOT_APPLICABLE) == 7
    assert count(open_classifier_result, Status.ACCEPTED_RISK) == 0
    assert count(private_detector_result, Status.ACCEPTED_RISK) == 1


def test_poisoning_variants_follow_repository_flag():
    result = threat_model(build_profile(OPEN_CLASSIFIER_ANSWERS))
    poisoning = next(f for f in result.findings if f.attack == "data.poisoning")
    assert poisoning.variants == ("addition", "modification", "deletion")

    hardened = dict(OPEN_CLASSIFIER_ANSWERS, repository_integrity_assured="yes")
    result = threat_model(build_profile(hardened))
    poisoning = next(f for f in result.findings if f.attack == "data.poisoning")
    assert poisoning.applicability.status is Status.APPLICABLE  # source still not fully trusted
    assert poisoning.variants == ("addition",)

    trusted = dict(
        OPEN_CLASSIFIER_ANSWERS,
        data_source_trust="fully_trusted",
        repository_integrity_assured="yes",
    )
    result = threat_model(build_profile(trusted))
    poisoning = next(f for f in result.findings if f.attack == "data.poisoning")
    assert poisoning.applicability.status is Status.NOT_APPLICABLE
    assert poisoning.variants == ()


def test_pipeline_graph_shapes(open_classifier_result, private_detector_result):
    classifier = open_classifier_result.graph
    assert len(classifier.nodes) == 23
    assert len(classifier.edges) == 34
    assert not classifier.has_node("feature_engineering_labelling")
    assert not classifier.has_node("decision_making")
    assert not classifier.has_node("a_decision")

    detector = private_detector_result.graph
    assert len(detector.nodes) == 27
    assert len(detector.edges) == 35
    assert detector.has_node("decision_making")
    assert not detector.has_node("a_features")
    # overlay removed the post-evaluation fallback, so no expanded d2 "no" arrows
    assert all(e.source != "d2_model_adequate" or e.guard.value == "yes" for e in detector.edges)


def test_overlay_edits_change_the_graph_not_the_statuses(private_detector_profile):
    with_overlay = threat_model(private_detector_profile, PRIVATE_DETECTOR_OVERLAY_EDITS)
    without_overlay = threat_model(private_detector_profile)
    assert _statuses(with_overlay) == _statuses(without_overlay)
    assert len(without_overlay.graph.edges) == len(with_overlay.graph.edges) + 6


def test_enumerate_expands_wildcards_itself(open_classifier_profile):
    graph = default_graph()
    result = enumerate_threats(graph, open_classifier_profile)
    assert not result.graph.wildcard_edges
    assert len(result.graph.edges) == 53


def test_enumerate_rejects_invalid_graph(open_classifier_profile):
    base = default_graph()
    broken = ProcessGraph(nodes=base.nodes, edges=base.edges + (Edge("a_prediction", "a_ghost"),))
    with pytest.raises(InvalidGraphError):
        enumerate_threats(broken, open_classifier_profile)


def test_result_metadata(open_classifier_result):
    assert open_classifier_result.taxonomy_version == "v1"
    assert open_classifier_result.tool_version == "0.1.0"
    assert open_classifier_result.created_at is None
    stamped = threat_model(
        build_profile(OPEN_CLASSIFIER_ANSWERS), created_at="2026-08-16T00:00:00Z"
    )
    assert stamped.created_at == "2026-08-16T00:00:00Z"
    assert stamped.findings == open_classifier_result.findings


def test_every_leaf_has_a_rule():
    assert set(LEAF_IDS) == {leaf.id for leaf in leaves()}
    profile = build_profile(OPEN_CLASSIFIER_ANSWERS)
    for leaf in leaves():
        assert applicability(leaf.id, profile) is not None
