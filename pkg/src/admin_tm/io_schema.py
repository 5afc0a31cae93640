"""Strict JSON document formats for profiles, overlays and results.

Parsing is closed-world: an unknown field is an error, never silently
ignored, because a typo in a security questionnaire must not default its
way into a wrong threat model.  Serialization is canonical: fixed key
order, fixed list orderings, two-space indentation, trailing newline.
parse(serialize(doc)) returns an equal document, byte for byte on the
second serialize.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any

from .engine import (
    Applicability,
    ReasonCode,
    Status,
    ThreatFinding,
    ThreatModelResult,
)
from .errors import (
    BadEnumValueError,
    DocumentSyntaxError,
    InvalidValueError,
    KindMismatchError,
    MissingFieldError,
    UnknownFieldError,
    VersionMismatchError,
)
from .process_model import (
    Edge,
    EditKind,
    GraphEdit,
    Guard,
    Node,
    NodeKind,
    Phase,
    ProcessGraph,
    RemoveMode,
    WildcardPolicy,
)
from .profile import (
    PROFILE_FIELD_ORDER,
    InputModality,
    SoftwareProfile,
    build_profile,
)
from .taxonomy import TAXONOMY_VERSION, Stride, sorted_stride, taxonomy

FORMAT_VERSION = "admin-tm/1"


class DocumentKind(Enum):
    PROFILE = "profile"
    GRAPH_OVERLAY = "graph_overlay"
    RESULT = "result"


#: Top-level key that carries each kind's body.
_BODY_KEY = {
    DocumentKind.PROFILE: "profile",
    DocumentKind.GRAPH_OVERLAY: "edits",
    DocumentKind.RESULT: "result",
}


@dataclass(frozen=True)
class GraphOverlay:
    """User-authored customization: an ordered list of graph edits."""

    edits: tuple[GraphEdit, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "edits", tuple(self.edits))


@dataclass(frozen=True)
class Document:
    """A parsed interchange document."""

    format_version: str
    kind: DocumentKind
    body: SoftwareProfile | GraphOverlay | ThreatModelResult

    @property
    def stale(self) -> bool:
        """True when a result was built against another taxonomy version."""
        return (
            self.kind is DocumentKind.RESULT
            and self.body.taxonomy_version != TAXONOMY_VERSION
        )


def profile_document(profile: SoftwareProfile) -> Document:
    return Document(FORMAT_VERSION, DocumentKind.PROFILE, profile)


def overlay_document(overlay: GraphOverlay) -> Document:
    return Document(FORMAT_VERSION, DocumentKind.GRAPH_OVERLAY, overlay)


def result_document(result: ThreatModelResult) -> Document:
    return Document(FORMAT_VERSION, DocumentKind.RESULT, result)


# --- strict readers -------------------------------------------------------------


def _object(value: Any, where: str) -> dict:
    if not isinstance(value, dict):
        raise InvalidValueError(f"{where} must be an object")
    return value


def _array(value: Any, where: str) -> list:
    if not isinstance(value, list):
        raise InvalidValueError(f"{where} must be an array")
    return value


def _string(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise InvalidValueError(f"{where} must be a string")
    return value


def _check_fields(obj: dict, where: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> None:
    for key in obj:
        if key not in required and key not in optional:
            raise UnknownFieldError(f"{where} has no field {key!r}")
    for key in required:
        if key not in obj:
            raise MissingFieldError(f"{where} is missing required field {key!r}")


def _enum(enum: type[Enum], raw: Any, where: str) -> Any:
    try:
        return enum(raw)
    except ValueError:
        legal = ", ".join(e.value for e in enum)
        raise BadEnumValueError(f"{where}: {raw!r} is not one of {legal}") from None


def _node_from(obj: Any, where: str) -> Node:
    node = _object(obj, where)
    _check_fields(node, where, required=("id", "kind", "label"), optional=("phase", "canonical_index"))
    phase = _enum(Phase, node["phase"], f"{where}.phase") if "phase" in node else None
    index = node.get("canonical_index")
    if index is not None and not isinstance(index, int):
        raise InvalidValueError(f"{where}.canonical_index must be an integer")
    try:
        return Node(
            id=_string(node["id"], f"{where}.id"),
            kind=_enum(NodeKind, node["kind"], f"{where}.kind"),
            label=_string(node["label"], f"{where}.label"),
            phase=phase,
            canonical_index=index,
        )
    except ValueError as exc:
        raise InvalidValueError(f"{where}: {exc}") from None


def _edge_from(obj: Any, where: str) -> Edge:
    edge = _object(obj, where)
    _check_fields(edge, where, required=("source", "target"), optional=("guard",))
    guard = _enum(Guard, edge["guard"], f"{where}.guard") if "guard" in edge else None
    try:
        return Edge(
            source=_string(edge["source"], f"{where}.source"),
            target=_string(edge["target"], f"{where}.target"),
            guard=guard,
        )
    except ValueError as exc:
        raise InvalidValueError(f"{where}: {exc}") from None


_EDIT_FIELDS: dict[EditKind, tuple[tuple[str, ...], tuple[str, ...]]] = {
    EditKind.REMOVE_PROCESS: (("kind", "node_id"), ("mode",)),
    EditKind.REMOVE_ARTIFACT: (("kind", "node_id"), ()),
    EditKind.ADD_NODE: (("kind", "node"), ()),
    EditKind.ADD_EDGE: (("kind", "edge"), ()),
    EditKind.REMOVE_EDGE: (("kind", "edge"), ()),
}


def _edit_from(obj: Any, where: str) -> GraphEdit:
    edit = _object(obj, where)
    if "kind" not in edit:
        raise MissingFieldError(f"{where} is missing required field 'kind'")
    kind = _enum(EditKind, edit["kind"], f"{where}.kind")
    required, optional = _EDIT_FIELDS[kind]
    _check_fields(edit, where, required=required, optional=optional)
    if kind is EditKind.REMOVE_PROCESS:
        mode = _enum(RemoveMode, edit["mode"], f"{where}.mode") if "mode" in edit else RemoveMode.SPLICE
        return GraphEdit.remove_process(_string(edit["node_id"], f"{where}.node_id"), mode)
    if kind is EditKind.REMOVE_ARTIFACT:
        return GraphEdit.remove_artifact(_string(edit["node_id"], f"{where}.node_id"))
    if kind is EditKind.ADD_NODE:
        return GraphEdit.add_node(_node_from(edit["node"], f"{where}.node"))
    edge = _edge_from(edit["edge"], f"{where}.edge")
    if kind is EditKind.ADD_EDGE:
        return GraphEdit.add_edge(edge)
    return GraphEdit(kind=EditKind.REMOVE_EDGE, edge=edge)


def _graph_from(obj: Any, where: str) -> ProcessGraph:
    graph = _object(obj, where)
    _check_fields(graph, where, required=("nodes", "edges", "wildcard_policy"))
    nodes = tuple(
        _node_from(n, f"{where}.nodes[{i}]") for i, n in enumerate(_array(graph["nodes"], f"{where}.nodes"))
    )
    edges = tuple(
        _edge_from(e, f"{where}.edges[{i}]") for i, e in enumerate(_array(graph["edges"], f"{where}.edges"))
    )
    policy = _enum(WildcardPolicy, graph["wildcard_policy"], f"{where}.wildcard_policy")
    return ProcessGraph(nodes=nodes, edges=edges, wildcard_policy=policy)


def _profile_from(obj: Any, where: str) -> SoftwareProfile:
    body = _object(obj, where)
    for key in body:
        if key not in PROFILE_FIELD_ORDER:
            raise UnknownFieldError(f"{where} has no field {key!r}")
    return build_profile(body)


def _finding_from(obj: Any, where: str) -> ThreatFinding:
    finding = _object(obj, where)
    _check_fields(
        finding,
        where,
        required=("attack", "status", "reason_code", "rationale", "stride", "attachments"),
        optional=("variants",),
    )
    stride = frozenset(
        _enum(Stride, s, f"{where}.stride[{i}]")
        for i, s in enumerate(_array(finding["stride"], f"{where}.stride"))
    )
    attachments = frozenset(
        _string(a, f"{where}.attachments[{i}]")
        for i, a in enumerate(_array(finding["attachments"], f"{where}.attachments"))
    )
    variants = tuple(
        _string(v, f"{where}.variants[{i}]")
        for i, v in enumerate(_array(finding.get("variants", []), f"{where}.variants"))
    )
    return ThreatFinding(
        attack=_string(finding["attack"], f"{where}.attack"),
        applicability=Applicability(
            status=_enum(Status, finding["status"], f"{where}.status"),
            reason_code=_enum(ReasonCode, finding["reason_code"], f"{where}.reason_code"),
            rationale=_string(finding["rationale"], f"{where}.rationale"),
        ),
        stride=stride,
        attachments=attachments,
        variants=variants,
    )


def _result_from(obj: Any, where: str) -> ThreatModelResult:
    result = _object(obj, where)
    _check_fields(
        result,
        where,
        required=("profile", "graph", "findings", "taxonomy_version", "tool_version"),
        optional=("created_at",),
    )
    findings = tuple(
        _finding_from(f, f"{where}.findings[{i}]")
        for i, f in enumerate(_array(result["findings"], f"{where}.findings"))
    )
    created_at = result.get("created_at")
    if created_at is not None:
        created_at = _string(created_at, f"{where}.created_at")
    return ThreatModelResult(
        profile=_profile_from(result["profile"], f"{where}.profile"),
        graph=_graph_from(result["graph"], f"{where}.graph"),
        findings=findings,
        taxonomy_version=_string(result["taxonomy_version"], f"{where}.taxonomy_version"),
        tool_version=_string(result["tool_version"], f"{where}.tool_version"),
        created_at=created_at,
    )


def parse(document_text: str, expected_kind: DocumentKind | str) -> Document:
    """Parse one document, strictly, and check it is of the expected kind."""
    if isinstance(expected_kind, str):
        expected_kind = _enum(DocumentKind, expected_kind, "expected_kind")
    try:
        raw = json.loads(document_text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from None

    top = _object(raw, "document")
    if "format_version" not in top:
        raise MissingFieldError("document is missing required field 'format_version'")
    version = _string(top["format_version"], "format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"document format_version {version!r} is not supported (this tool speaks {FORMAT_VERSION!r})"
        )
    if "kind" not in top:
        raise MissingFieldError("document is missing required field 'kind'")
    kind = _enum(DocumentKind, top["kind"], "kind")
    if kind is not expected_kind:
        raise KindMismatchError(f"expected a {expected_kind.value} document, got {kind.value!r}")

    body_key = _BODY_KEY[kind]
    _check_fields(top, "document", required=("format_version", "kind", body_key))

    body: SoftwareProfile | GraphOverlay | ThreatModelResult
    if kind is DocumentKind.PROFILE:
        body = _profile_from(top[body_key], "profile")
    elif kind is DocumentKind.GRAPH_OVERLAY:
        edits = _array(top[body_key], "edits")
        body = GraphOverlay(tuple(_edit_from(e, f"edits[{i}]") for i, e in enumerate(edits)))
    else:
        body = _result_from(top[body_key], "result")
    return Document(version, kind, body)


# --- canonical writers -----------------------------------------------------------


def _profile_dict(profile: SoftwareProfile) -> dict:
    out: dict[str, Any] = {}
    for key in PROFILE_FIELD_ORDER:
        value = getattr(profile, key)
        if key == "input_modalities":
            out[key] = [m.value for m in InputModality if m in value]
        elif isinstance(value, Enum):
            out[key] = value.value
        else:
            out[key] = value
    return out


def _node_dict(node: Node) -> dict:
    out: dict[str, Any] = {"id": node.id, "kind": node.kind.value, "label": node.label}
    if node.phase is not None:
        out["phase"] = node.phase.value
    if node.canonical_index is not None:
        out["canonical_index"] = node.canonical_index
    return out


def _edge_dict(edge: Edge) -> dict:
    out: dict[str, Any] = {"source": edge.source, "target": edge.target}
    if edge.guard is not None:
        out["guard"] = edge.guard.value
    return out


def _graph_dict(graph: ProcessGraph) -> dict:
    return {
        "nodes": [_node_dict(n) for n in graph.nodes],
        "edges": [_edge_dict(e) for e in graph.edges],
        "wildcard_policy": graph.wildcard_policy.value,
    }


def _edit_dict(edit: GraphEdit) -> dict:
    out: dict[str, Any] = {"kind": edit.kind.value}
    if edit.kind is EditKind.REMOVE_PROCESS:
        out["node_id"] = edit.node_id
        out["mode"] = (edit.mode or RemoveMode.SPLICE).value
    elif edit.kind is EditKind.REMOVE_ARTIFACT:
        out["node_id"] = edit.node_id
    elif edit.kind is EditKind.ADD_NODE:
        assert edit.node is not None
        out["node"] = _node_dict(edit.node)
    else:
        assert edit.edge is not None
        out["edge"] = _edge_dict(edit.edge)
    return out


def _finding_dict(finding: ThreatFinding) -> dict:
    out: dict[str, Any] = {
        "attack": finding.attack,
        "status": finding.applicability.status.value,
        "reason_code": finding.applicability.reason_code.value,
        "rationale": finding.applicability.rationale,
        "stride": [s.value for s in sorted_stride(finding.stride)],
        "attachments": sorted(finding.attachments),
    }
    if finding.variants:
        out["variants"] = list(finding.variants)
    return out


def _result_dict(result: ThreatModelResult) -> dict:
    out: dict[str, Any] = {
        "profile": _profile_dict(result.profile),
        "graph": _graph_dict(result.graph),
        "findings": [_finding_dict(f) for f in result.findings],
        "taxonomy_version": result.taxonomy_version,
        "tool_version": result.tool_version,
    }
    if result.created_at is not None:
        out["created_at"] = result.created_at
    return out


def serialize(doc: Document) -> str:
    """Render a document in canonical form (stable bytes for equal content)."""
    body: Any
    if doc.kind is DocumentKind.PROFILE:
        body = _profile_dict(doc.body)
    elif doc.kind is DocumentKind.GRAPH_OVERLAY:
        body = [_edit_dict(e) for e in doc.body.edits]
    else:
        body = _result_dict(doc.body)
    top = {"format_version": doc.format_version, "kind": doc.kind.value, _BODY_KEY[doc.kind]: body}
    return json.dumps(top, indent=2, ensure_ascii=False) + "\n"


def taxonomy_export() -> str:
    """Render the built-in attack catalog as a JSON document for tooling."""
    nodes = []
    for node in taxonomy():
        entry: dict[str, Any] = {
            "id": node.id,
            "label": node.label,
            "level": node.level.value,
            "description": node.description,
        }
        if node.parent is not None:
            entry["parent"] = node.parent
        if node.stride is not None:
            entry["stride"] = [s.value for s in sorted_stride(node.stride)]
        if node.variants:
            entry["variants"] = list(node.variants)
        if node.attachment_selector:
            entry["attachment_selector"] = list(node.attachment_selector)
        nodes.append(entry)
    top = {"taxonomy_version": TAXONOMY_VERSION, "attacks": nodes}
    return json.dumps(top, indent=2, ensure_ascii=False) + "\n"
