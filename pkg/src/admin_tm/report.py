"""Read-only report rendering for threat model results.

Three formats: markdown (sectioned pipe tables for humans and docs),
json (the canonical result document), and summary (terminal-friendly
counts).  Rendering is deterministic: equal results and options give
byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .engine import Status, ThreatFinding, ThreatModelResult
from .errors import MinimumTwoError, TaxonomyVersionMismatchError
from .io_schema import result_document, serialize
from .taxonomy import STRIDE_ORDER, leaves, lookup, sorted_stride

CATEGORY_ORDER = ("data", "model", "input")

_TABLE_HEADER = "| Attack | Status | Reason | STRIDE | Attachment points |"
_TABLE_RULE = "| --- | --- | --- | --- | --- |"


class ReportFormat(Enum):
    MARKDOWN = "markdown"
    JSON = "json"
    SUMMARY = "summary"


class GroupBy(Enum):
    CATEGORY = "category"
    STRIDE = "stride"


@dataclass(frozen=True)
class ReportOptions:
    format: ReportFormat = ReportFormat.MARKDOWN
    include_not_applicable: bool = True
    group_by: GroupBy = GroupBy.CATEGORY


def render(result: ThreatModelResult, options: ReportOptions | None = None) -> str:
    """Render one result in the requested format."""
    options = options or ReportOptions()
    if options.format is ReportFormat.JSON:
        return serialize(result_document(result))
    if options.format is ReportFormat.SUMMARY:
        return _summary(result)
    return _markdown(result, options)


def _visible(result: ThreatModelResult, options: ReportOptions) -> tuple[ThreatFinding, ...]:
    if options.include_not_applicable:
        return result.findings
    return tuple(
        f for f in result.findings if f.applicability.status is not Status.NOT_APPLICABLE
    )


def _row(result: ThreatModelResult, finding: ThreatFinding) -> str:
    stride = ", ".join(s.value for s in sorted_stride(finding.stride))
    labels = []
    for node_id in finding.attachments:
        node = result.graph.node(node_id)
        labels.append(node.label if node is not None else node_id)
    attachments = "; ".join(sorted(labels))
    return (
        f"| {finding.attack} | {finding.applicability.status.value} "
        f"| {finding.applicability.reason_code.value} | {stride} | {attachments} |"
    )


def _table(result: ThreatModelResult, findings: Iterable[ThreatFinding]) -> list[str]:
    lines = [_TABLE_HEADER, _TABLE_RULE]
    lines.extend(_row(result, f) for f in findings)
    return lines


def _markdown(result: ThreatModelResult, options: ReportOptions) -> str:
    lines = [f"# Threat model: {result.profile.name}", ""]
    lines.append(f"- taxonomy_version: {result.taxonomy_version}")
    lines.append(f"- tool_version: {result.tool_version}")
    if result.created_at is not None:
        lines.append(f"- created_at: {result.created_at}")
    visible = _visible(result, options)

    if options.group_by is GroupBy.CATEGORY:
        for category in CATEGORY_ORDER:
            rows = [f for f in visible if f.attack.split(".", 1)[0] == category]
            lines.extend(["", f"## {lookup(category).label}", ""])
            lines.extend(_table(result, rows))
    else:
        for stride in STRIDE_ORDER:
            rows = [f for f in visible if stride in f.stride]
            if not rows:
                continue
            lines.extend(["", f"## {stride.value}", ""])
            lines.extend(_table(result, rows))

    return "\n".join(lines) + "\n"


def _summary(result: ThreatModelResult) -> str:
    by_status = {status: 0 for status in Status}
    for finding in result.findings:
        by_status[finding.applicability.status] += 1
    exposure = {stride: 0 for stride in STRIDE_ORDER}
    for finding in result.findings:
        if finding.applicability.status is Status.NOT_APPLICABLE:
            continue
        for stride in finding.stride:
            exposure[stride] += 1

    lines = [f"threat model: {result.profile.name}"]
    lines.append(f"taxonomy {result.taxonomy_version}, tool {result.tool_version}")
    lines.append("")
    lines.append("status counts:")
    lines.extend(f"  {status.value}: {by_status[status]}" for status in Status)
    lines.append("")
    lines.append("stride exposure (applicable + accepted_risk):")
    lines.extend(f"  {stride.value}: {exposure[stride]}" for stride in STRIDE_ORDER)
    return "\n".join(lines) + "\n"


def compare(results: Sequence[ThreatModelResult]) -> str:
    """Render several results side by side, one status column per result."""
    if len(results) < 2:
        raise MinimumTwoError("comparison needs at least two results")
    versions = {r.taxonomy_version for r in results}
    if len(versions) > 1:
        listed = ", ".join(sorted(versions))
        raise TaxonomyVersionMismatchError(
            f"results span taxonomy versions {listed}; re-run enumeration on one version"
        )

    names: list[str] = []
    seen: dict[str, int] = {}
    for result in results:
        name = result.profile.name
        seen[name] = seen.get(name, 0) + 1
        names.append(name if seen[name] == 1 else f"{name} ({seen[name]})")

    lines = ["# Threat model comparison", ""]
    lines.append("| Attack | " + " | ".join(names) + " |")
    lines.append("| --- |" + " --- |" * len(names))
    by_attack = [{f.attack: f for f in r.findings} for r in results]
    for leaf in leaves():
        cells = []
        for findings in by_attack:
            finding = findings.get(leaf.id)
            cells.append(finding.applicability.status.value if finding else "-")
        lines.append(f"| {leaf.id} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
