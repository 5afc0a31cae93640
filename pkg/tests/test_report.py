"""Report rendering and result comparison."""

from __future__ import annotations

import dataclasses
import json

import pytest

from admin_tm.engine import Status, threat_model
from admin_tm.errors import MinimumTwoError, TaxonomyVersionMismatchError
from admin_tm.report import GroupBy, ReportFormat, ReportOptions, compare, render
from admin_tm.profile import build_profile
from conftest import OPEN_CLASSIFIER_ANSWERS


def _table_rows(markdown: str) -> list[list[str]]:
    rows = []
    for line in markdown.splitlines():
        if not line.startswith("| ") or line.startswith("| Attack") or line.startswith("| ---"):
            continue
        rows.append([cell.strip() for cell in line.strip("|").split("|")])
    return rows


def test_markdown_report_structure(open_classifier_result):
    text = render(open_classifier_result)
    assert text.startswith("# Threat model: open-classifier\n")
    assert "- taxonomy_version: v1" in text
    assert "- tool_version: 0.1.0" in text
    assert "## Dataset" in text
    assert "## Model" in text
    assert "## Input" in text
    rows = _table_rows(text)
    assert len(rows) == 14
    theft = next(r for r in rows if r[0] == "data.exfiltration.dataset_theft")
    assert theft[1] == "not_applicable"
    assert theft[2] == "data_public"
    assert theft[4] == ""


def test_markdown_omits_not_applicable_on_request(open_classifier_result):
    options = ReportOptions(include_not_applicable=False)
    rows = _table_rows(render(open_classifier_result, options))
    assert len(rows) == 7
    assert all(r[1] != "not_applicable" for r in rows)


def test_markdown_rows_agree_with_json(private_detector_result):
    markdown_rows = {r[0]: r[1] for r in _table_rows(render(private_detector_result))}
    payload = json.loads(render(private_detector_result, ReportOptions(format=ReportFormat.JSON)))
    json_rows = {f["attack"]: f["status"] for f in payload["result"]["findings"]}
    assert markdown_rows == json_rows


def test_attachment_cells_use_labels(private_detector_result):
    rows = _table_rows(render(private_detector_result))
    mitm = next(r for r in rows if r[0] == "input.mitm")
    assert mitm[1] == "accepted_risk"
    assert "Decision Making" in mitm[4]
    assert "decision_making" not in mitm[4]


def test_summary_counts_and_exposure(open_classifier_result):
    text = render(open_classifier_result, ReportOptions(format=ReportFormat.SUMMARY))
    assert "threat model: open-classifier" in text
    assert "  applicable: 7" in text
    assert "  not_applicable: 7" in text
    assert "  accepted_risk: 0" in text
    assert "  Spoofing: 4" in text
    assert "  Tampering: 3" in text
    assert "  Repudiation: 2" in text
    assert "  InformationDisclosure: 0" in text
    assert "  DenialOfService: 2" in text
    assert "  ElevationOfPrivilege: 0" in text


def test_summary_for_private_detector(private_detector_result):
    text = render(private_detector_result, ReportOptions(format=ReportFormat.SUMMARY))
    assert "  applicable: 6" in text
    assert "  accepted_risk: 1" in text
    assert "  Spoofing: 3" in text
    assert "  InformationDisclosure: 3" in text
    assert "  DenialOfService: 0" in text


def test_group_by_stride_sections(open_classifier_result):
    text = render(open_classifier_result, ReportOptions(group_by=GroupBy.STRIDE))
    assert "## Spoofing" in text
    assert "## Tampering" in text
    assert "## Dataset" not in text
    # a finding with two stride letters appears under both sections
    assert sum(1 for line in text.splitlines() if line.startswith("| input.evasion.real_world ")) == 2


def test_render_is_deterministic(open_classifier_result, private_detector_result):
    for result in (open_classifier_result, private_detector_result):
        for options in (
            ReportOptions(),
            ReportOptions(format=ReportFormat.JSON),
            ReportOptions(format=ReportFormat.SUMMARY),
            ReportOptions(group_by=GroupBy.STRIDE, include_not_applicable=False),
        ):
            assert render(result, options) == render(result, options)


def test_compare_side_by_side(open_classifier_result, private_detector_result):
    text = compare([open_classifier_result, private_detector_result])
    assert text.startswith("# Threat model comparison\n")
    assert "| Attack | open-classifier | private-detector |" in text
    rows = {r[0]: r[1:] for r in _table_rows(text)}
    assert len(rows) == 14
    assert rows["input.dos.flooding"] == ["applicable", "not_applicable"]
    assert rows["input.mitm"] == ["applicable", "accepted_risk"]
    assert rows["data.exfiltration.dataset_theft"] == ["not_applicable", "applicable"]


def test_compare_requires_two(open_classifier_result):
    with pytest.raises(MinimumTwoError):
        compare([open_classifier_result])


def test_compare_rejects_mixed_taxonomy_versions(open_classifier_result, private_detector_result):
    old = dataclasses.replace(private_detector_result, taxonomy_version="v0")
    with pytest.raises(TaxonomyVersionMismatchError):
        compare([open_classifier_result, old])


def test_compare_disambiguates_duplicate_names(open_classifier_result):
    twin = threat_model(build_profile(OPEN_CLASSIFIER_ANSWERS))
    text = compare([open_classifier_result, twin])
    assert "| Attack | open-classifier | open-classifier (2) |" in text
    for row in _table_rows(text):
        assert row[1] == row[2]


def test_json_report_round_trips_created_at():
    result = threat_model(build_profile(OPEN_CLASSIFIER_ANSWERS), created_at="2026-08-16T09:30:00Z")
    assert "- created_at: 2026-08-16T09:30:00Z" in render(result)
    payload = json.loads(render(result, ReportOptions(format=ReportFormat.JSON)))
    assert payload["result"]["created_at"] == "2026-08-16T09:30:00Z"
