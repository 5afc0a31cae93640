"""Threat modelling as code for AI based software."""

from .engine import (
    Applicability,
    ReasonCode,
    Status,
    ThreatFinding,
    ThreatModelResult,
    TOOL_VERSION,
    applicability,
    attach,
    enumerate_threats,
    threat_model,
)
from .errors import AdminTmError
from .io_schema import (
    FORMAT_VERSION,
    Document,
    DocumentKind,
    GraphOverlay,
    overlay_document,
    parse,
    profile_document,
    result_document,
    serialize,
)
from .process_model import (
    Edge,
    GraphEdit,
    Node,
    ProcessGraph,
    apply_edit,
    apply_edits,
    default_graph,
    expand_wildcards,
    validate,
)
from .profile import (
    ProfileQuestion,
    SoftwareProfile,
    build_profile,
    derive_graph_edits,
    question_set,
)
from .report import ReportOptions, compare, render
from .taxonomy import TAXONOMY_VERSION, AttackNode, Stride, leaves, lookup, stride_for, taxonomy

__version__ = TOOL_VERSION

__all__ = [
    "AdminTmError",
    "Applicability",
    "AttackNode",
    "Document",
    "DocumentKind",
    "Edge",
    "FORMAT_VERSION",
    "GraphEdit",
    "GraphOverlay",
    "Node",
    "ProcessGraph",
    "ProfileQuestion",
    "ReasonCode",
    "ReportOptions",
    "SoftwareProfile",
    "Status",
    "Stride",
    "TAXONOMY_VERSION",
    "TOOL_VERSION",
    "ThreatFinding",
    "ThreatModelResult",
    "applicability",
    "apply_edit",
    "apply_edits",
    "attach",
    "build_profile",
    "compare",
    "default_graph",
    "derive_graph_edits",
    "enumerate_threats",
    "expand_wildcards",
    "leaves",
    "lookup",
    "overlay_document",
    "parse",
    "profile_document",
    "question_set",
    "render",
    "result_document",
    "serialize",
    "stride_for",
    "taxonomy",
    "threat_model",
    "validate",
]
