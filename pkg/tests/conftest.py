"""Shared fixtures: the two reference answer sets and their pipelines."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from admin_tm.engine import threat_model
from admin_tm.process_model import GraphEdit, Guard
from admin_tm.profile import build_profile

FIXTURES = Path(__file__).parent / "fixtures"

#: A public-data image classifier: open internet service, camera input,
#: no feature engineering or labelling, no monitoring, no decision stage.
OPEN_CLASSIFIER_ANSWERS: dict = {
    "name": "open-classifier",
    "data_visibility": "public",
    "data_source_trust": "partially_trusted",
    "repository_integrity_assured": "no",
    "model_openness": "open_source",
    "model_query_access": "public",
    "deployment_exposure": "public_internet",
    "input_modalities": ["image"],
    "captures_physical_environment": "yes",
    "transport_security": "untrusted_network",
    "dev_pipeline_compromise_conceivable": "yes",
    "uses_feature_engineering": "no",
    "uses_labelling": "no",
    "monitors_model_in_deployment": "no",
    "has_decision_making_stage": "no",
}

#: A private-data detector for known clients: labelled data, trusted
#: cloud transport, images handed in digitally, decisions made downstream.
PRIVATE_DETECTOR_ANSWERS: dict = {
    "name": "private-detector",
    "data_visibility": "private",
    "data_source_trust": "partially_trusted",
    "repository_integrity_assured": "no",
    "model_openness": "open_source",
    "model_query_access": "restricted",
    "deployment_exposure": "restricted_clients",
    "input_modalities": ["image"],
    "captures_physical_environment": "no",
    "transport_security": "trusted_provider",
    "dev_pipeline_compromise_conceivable": "yes",
    "uses_feature_engineering": "no",
    "uses_labelling": "yes",
    "monitors_model_in_deployment": "no",
    "has_decision_making_stage": "yes",
}

#: The detector's process has no loop back into development after the
#: final evaluation, so the fallback arrow is dropped.
PRIVATE_DETECTOR_OVERLAY_EDITS = (
    GraphEdit.remove_edge("d2_model_adequate", "*", Guard.NO),
)


@pytest.fixture(scope="session")
def open_classifier_profile():
    return build_profile(OPEN_CLASSIFIER_ANSWERS)


@pytest.fixture(scope="session")
def private_detector_profile():
    return build_profile(PRIVATE_DETECTOR_ANSWERS)


@pytest.fixture(scope="session")
def open_classifier_result(open_classifier_profile):
    return threat_model(open_classifier_profile)


@pytest.fixture(scope="session")
def private_detector_result(private_detector_profile):
    return threat_model(private_detector_profile, PRIVATE_DETECTOR_OVERLAY_EDITS)
