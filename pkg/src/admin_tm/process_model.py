"""Directed-graph model of the AI software development process.

The canonical template covers three phases (data processing, model
development, deployment) with ten processes, three decision points and
seventeen artifacts.  Fallback arrows whose target is the wildcard ``*``
stand for "any previous development process" and are expanded to concrete
edges before threat enumeration.

All values are immutable; every operation returns a new graph.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable

from .errors import (
    DuplicateNodeError,
    UnknownEdgeError,
    UnknownNodeError,
    WouldDisconnectDeploymentError,
)

NodeId = str

NODE_ID_RE = re.compile(r"[a-z][a-z0-9_]*\Z")

#: An edge target meaning "any previous development process".
WILDCARD = "*"

#: The one process no software profile may remove: every attack in the
#: taxonomy presumes a deployed model.
DEPLOYMENT_PROCESS = "software_deployment"


class NodeKind(Enum):
    PROCESS = "process"
    ARTIFACT = "artifact"
    DECISION = "decision"


class Phase(Enum):
    DATA_PROCESSING = "data_processing"
    MODEL_DEVELOPMENT = "model_development"
    DEPLOYMENT = "deployment"


#: Phases whose processes are legal wildcard-expansion targets.
DEVELOPMENT_PHASES = (Phase.DATA_PROCESSING, Phase.MODEL_DEVELOPMENT)

_PHASE_ORDER = {phase: i for i, phase in enumerate(Phase)}


class Guard(Enum):
    YES = "yes"
    NO = "no"


class WildcardPolicy(Enum):
    DEVELOPMENT_PROCESSES_ONLY = "development_processes_only"


class EditKind(Enum):
    REMOVE_PROCESS = "remove_process"
    REMOVE_ARTIFACT = "remove_artifact"
    ADD_NODE = "add_node"
    ADD_EDGE = "add_edge"
    REMOVE_EDGE = "remove_edge"


class RemoveMode(Enum):
    SPLICE = "splice"
    PRUNE = "prune"


@dataclass(frozen=True)
class Node:
    """One element of the process graph: a process, artifact or decision."""

    id: NodeId
    kind: NodeKind
    label: str
    phase: Phase | None = None
    canonical_index: int | None = None

    def __post_init__(self) -> None:
        if not NODE_ID_RE.match(self.id):
            raise ValueError(f"node id {self.id!r} must match [a-z][a-z0-9_]*")
        if not self.label:
            raise ValueError(f"node {self.id!r} needs a label")
        if self.kind is NodeKind.PROCESS:
            if self.phase is None:
                raise ValueError(f"process {self.id!r} needs a phase")
            if self.canonical_index is None or self.canonical_index < 1:
                raise ValueError(f"process {self.id!r} needs a positive canonical_index")
        elif self.canonical_index is not None:
            raise ValueError(f"{self.kind.value} {self.id!r} must not carry a canonical_index")


@dataclass(frozen=True)
class Edge:
    """A directed input/output arrow; target may be the wildcard ``*``."""

    source: NodeId
    target: NodeId
    guard: Guard | None = None

    def __post_init__(self) -> None:
        if not NODE_ID_RE.match(self.source):
            raise ValueError(f"edge source {self.source!r} must match [a-z][a-z0-9_]*")
        if self.target != WILDCARD and not NODE_ID_RE.match(self.target):
            raise ValueError(f"edge target {self.target!r} must match [a-z][a-z0-9_]* or be '*'")

    @property
    def is_wildcard(self) -> bool:
        return self.target == WILDCARD


@dataclass(frozen=True)
class ProcessGraph:
    """An immutable development-process graph."""

    nodes: tuple[Node, ...]
    edges: tuple[Edge, ...]
    wildcard_policy: WildcardPolicy = WildcardPolicy.DEVELOPMENT_PROCESSES_ONLY

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    def node(self, node_id: NodeId) -> Node | None:
        for node in self.nodes:
            if node.id == node_id:
                return node
        return None

    def has_node(self, node_id: NodeId) -> bool:
        return self.node(node_id) is not None

    @property
    def node_ids(self) -> frozenset[NodeId]:
        return frozenset(node.id for node in self.nodes)

    @property
    def processes(self) -> tuple[Node, ...]:
        procs = [n for n in self.nodes if n.kind is NodeKind.PROCESS]
        procs.sort(key=lambda n: n.canonical_index or 0)
        return tuple(procs)

    @property
    def wildcard_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_wildcard)


@dataclass(frozen=True)
class GraphEdit:
    """One customization step: remove/add a node or an edge.

    Process removal supports two modes: ``splice`` re-sources the removed
    process's outputs to its nearest producing predecessor process, so
    downstream artifacts survive; ``prune`` deletes the process, its
    incident edges, and any artifact left without producer and consumer.
    """

    kind: EditKind
    node_id: NodeId | None = None
    mode: RemoveMode | None = None
    node: Node | None = None
    edge: Edge | None = None

    @classmethod
    def remove_process(cls, node_id: NodeId, mode: RemoveMode = RemoveMode.SPLICE) -> GraphEdit:
        return cls(kind=EditKind.REMOVE_PROCESS, node_id=node_id, mode=mode)

    @classmethod
    def remove_artifact(cls, node_id: NodeId) -> GraphEdit:
        return cls(kind=EditKind.REMOVE_ARTIFACT, node_id=node_id)

    @classmethod
    def add_node(cls, node: Node) -> GraphEdit:
        return cls(kind=EditKind.ADD_NODE, node=node)

    @classmethod
    def add_edge(cls, edge: Edge) -> GraphEdit:
        return cls(kind=EditKind.ADD_EDGE, edge=edge)

    @classmethod
    def remove_edge(cls, source: NodeId, target: NodeId, guard: Guard | None = None) -> GraphEdit:
        return cls(kind=EditKind.REMOVE_EDGE, edge=Edge(source, target, guard))


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by :func:`validate`."""

    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationResult:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


# --- canonical template -------------------------------------------------------

_PROCESSES = (
    # (id, label, phase, canonical_index)
    ("requirement_engineering", "Requirement Engineering", Phase.DATA_PROCESSING, 1),
    ("data_preparation", "Data Preparation", Phase.DATA_PROCESSING, 2),
    ("feature_engineering_labelling", "Feature Engineering & Labelling", Phase.DATA_PROCESSING, 3),
    ("model_training", "Model Training", Phase.MODEL_DEVELOPMENT, 4),
    ("model_evaluation_during_development", "Model Evaluation during Development", Phase.MODEL_DEVELOPMENT, 5),
    ("hyperparameter_tuning", "Hyperparameter Tuning", Phase.MODEL_DEVELOPMENT, 6),
    ("model_evaluation_after_development", "Model Evaluation after Development", Phase.MODEL_DEVELOPMENT, 7),
    ("software_deployment", "Software Deployment", Phase.DEPLOYMENT, 8),
    ("decision_making", "Decision Making", Phase.DEPLOYMENT, 9),
    ("model_evaluation_during_deployment", "Model Evaluation during Deployment", Phase.DEPLOYMENT, 10),
)

_DECISIONS = (
    # (id, label, phase)
    ("d1_model_adequate", "Is the Model Adequate?", Phase.MODEL_DEVELOPMENT),
    ("d2_model_adequate", "Is the Model Adequate?", Phase.MODEL_DEVELOPMENT),
    ("d3_model_adequate", "Is the Model Adequate?", Phase.DEPLOYMENT),
)

_ARTIFACTS = (
    ("a_system_domain_info", "System & Domain Information"),
    ("a_stakeholder_requirements", "Stakeholder Requirements"),
    ("a_regulations", "Regulations"),
    ("a_requirements_spec", "Requirements Specification"),
    ("a_raw_dataset", "Raw Dataset"),
    ("a_clean_dataset", "Clean Dataset"),
    ("a_features", "Features"),
    ("a_labels", "Labels"),
    ("a_training_dataset", "Training Dataset"),
    ("a_validation_dataset", "Validation Dataset"),
    ("a_testing_dataset", "Testing Dataset"),
    ("a_algorithm", "Algorithm"),
    ("a_trained_model", "Trained Model"),
    ("a_optimized_model", "Optimised Model"),
    ("a_production_data", "Production Data"),
    ("a_prediction", "Prediction"),
    ("a_decision", "Decision"),
)

_EDGES = (
    # (source, target, guard)
    ("a_system_domain_info", "requirement_engineering", None),            # E01
    ("a_stakeholder_requirements", "requirement_engineering", None),      # E02
    ("a_regulations", "requirement_engineering", None),                   # E03
    ("requirement_engineering", "a_requirements_spec", None),             # E04
    ("a_requirements_spec", "data_preparation", None),                    # E05
    ("a_raw_dataset", "data_preparation", None),                          # E06
    ("data_preparation", "a_clean_dataset", None),                        # E07
    ("a_clean_dataset", "feature_engineering_labelling", None),           # E08
    ("feature_engineering_labelling", "a_features", None),                # E09
    ("feature_engineering_labelling", "a_labels", None),                  # E10
    ("feature_engineering_labelling", "a_training_dataset", None),        # E11
    ("feature_engineering_labelling", "a_validation_dataset", None),      # E12
    ("feature_engineering_labelling", "a_testing_dataset", None),         # E13
    ("a_training_dataset", "model_training", None),                       # E14
    ("a_features", "model_training", None),                               # E15
    ("a_labels", "model_training", None),                                 # E16
    ("a_algorithm", "model_training", None),                              # E17
    ("model_training", "a_trained_model", None),                          # E18
    ("a_trained_model", "model_evaluation_during_development", None),     # E19
    ("a_validation_dataset", "model_evaluation_during_development", None),  # E20
    ("model_evaluation_during_development", "d1_model_adequate", None),   # E21
    ("d1_model_adequate", "hyperparameter_tuning", Guard.NO),             # E22
    ("d1_model_adequate", "model_evaluation_after_development", Guard.YES),  # E23
    ("hyperparameter_tuning", "a_optimized_model", None),                 # E24
    ("hyperparameter_tuning", WILDCARD, None),                            # E25
    ("a_optimized_model", "model_evaluation_after_development", None),    # E26
    ("a_testing_dataset", "model_evaluation_after_development", None),    # E27
    ("model_evaluation_after_development", "d2_model_adequate", None),    # E28
    ("d2_model_adequate", "software_deployment", Guard.YES),              # E29
    ("d2_model_adequate", WILDCARD, Guard.NO),                            # E30
    ("a_production_data", "software_deployment", None),                   # E31
    ("software_deployment", "a_prediction", None),                        # E32
    ("a_prediction", "decision_making", None),                            # E33
    ("decision_making", "a_decision", None),                              # E34
    ("a_prediction", "model_evaluation_during_deployment", None),         # E35
    ("model_evaluation_during_deployment", "d3_model_adequate", None),    # E36
    ("d3_model_adequate", "software_deployment", Guard.YES),              # E37
    ("d3_model_adequate", WILDCARD, Guard.NO),                            # E38
)


def default_graph() -> ProcessGraph:
    """Return the canonical development-process template."""
    nodes = [
        Node(pid, NodeKind.PROCESS, label, phase, index)
        for pid, label, phase, index in _PROCESSES
    ]
    nodes += [Node(did, NodeKind.DECISION, label, phase) for did, label, phase in _DECISIONS]
    nodes += [Node(aid, NodeKind.ARTIFACT, label) for aid, label in _ARTIFACTS]
    edges = [Edge(src, dst, guard) for src, dst, guard in _EDGES]
    return ProcessGraph(nodes=tuple(nodes), edges=tuple(edges))


# --- validation ---------------------------------------------------------------


def validate(graph: ProcessGraph) -> ValidationResult:
    """Check every graph invariant; violations are data, not exceptions."""
    violations: list[Violation] = []
    seen: dict[NodeId, Node] = {}
    for node in graph.nodes:
        if node.id in seen:
            violations.append(Violation("duplicate_node_id", node.id, f"node id {node.id!r} appears more than once"))
        seen[node.id] = node

    for edge in graph.edges:
        if edge.source not in seen:
            violations.append(Violation("dangling_edge", edge.source, f"edge source {edge.source!r} is not a node of the graph"))
        if not edge.is_wildcard and edge.target not in seen:
            violations.append(Violation("dangling_edge", edge.target, f"edge target {edge.target!r} is not a node of the graph"))
        if edge.source == edge.target:
            violations.append(Violation("self_loop", edge.source, f"edge {edge.source!r} -> {edge.target!r} is a self-loop"))
        source = seen.get(edge.source)
        if source is not None:
            if edge.guard is not None and source.kind is not NodeKind.DECISION:
                violations.append(Violation("guard_on_non_decision", edge.source, f"edge {edge.source!r} -> {edge.target!r} carries a guard but its source is not a decision"))
            if edge.guard is None and source.kind is NodeKind.DECISION:
                violations.append(Violation("missing_guard_on_decision", edge.source, f"edge {edge.source!r} -> {edge.target!r} leaves a decision without a yes/no guard"))

    deployment = seen.get(DEPLOYMENT_PROCESS)
    if deployment is None or deployment.kind is not NodeKind.PROCESS:
        violations.append(Violation("would_disconnect_deployment", DEPLOYMENT_PROCESS, "graph lacks the software_deployment process every threat presumes"))

    indices_in_phase_order = [
        node.canonical_index
        for node in sorted(
            (n for n in graph.nodes if n.kind is NodeKind.PROCESS),
            key=lambda n: (_PHASE_ORDER[n.phase], n.canonical_index or 0),
        )
    ]
    for earlier, later in zip(indices_in_phase_order, indices_in_phase_order[1:]):
        if earlier is not None and later is not None and earlier >= later:
            violations.append(Violation("phase_order", str(later), "process canonical indices must strictly increase in phase order"))
            break

    for node in graph.nodes:
        if node.kind is NodeKind.DECISION and not node.label.endswith("?"):
            violations.append(Violation("decision_label_not_question", node.id, f"decision {node.id!r} must carry a question label"))

    return ValidationResult(violations=tuple(violations))


# --- traversal helpers --------------------------------------------------------


def _nearest_process_ancestor(graph: ProcessGraph, start: NodeId, *, include_self: bool) -> Node | None:
    """Walk incoming edges breadth-first until a process is found.

    Ties within one BFS layer break toward the highest canonical index,
    i.e. the latest process in the lifecycle.
    """
    start_node = graph.node(start)
    if start_node is None:
        return None
    if include_self and start_node.kind is NodeKind.PROCESS:
        return start_node

    seen = {start}
    frontier = {start}
    while frontier:
        predecessors = {e.source for e in graph.edges if e.target in frontier} - seen
        hits = [n for p in predecessors if (n := graph.node(p)) and n.kind is NodeKind.PROCESS]
        if hits:
            return max(hits, key=lambda n: n.canonical_index or 0)
        seen |= predecessors
        frontier = predecessors
    return None


def _cascade_and_sweep(
    nodes: list[Node], edges: list[Edge], *, sweep_artifacts: bool
) -> tuple[list[Node], list[Edge]]:
    """Drop decisions left without input, and (optionally) edgeless artifacts."""
    changed = True
    while changed:
        changed = False
        fed = {e.target for e in edges}
        orphans = [n.id for n in nodes if n.kind is NodeKind.DECISION and n.id not in fed]
        if orphans:
            dropped = set(orphans)
            nodes = [n for n in nodes if n.id not in dropped]
            edges = [e for e in edges if e.source not in dropped and e.target not in dropped]
            changed = True
            continue
        if sweep_artifacts:
            touched = {e.source for e in edges} | {e.target for e in edges}
            stray = [n.id for n in nodes if n.kind is NodeKind.ARTIFACT and n.id not in touched]
            if stray:
                dropped = set(stray)
                nodes = [n for n in nodes if n.id not in dropped]
                changed = True
    return nodes, edges


def _require(graph: ProcessGraph, node_id: NodeId | None, kind: NodeKind) -> Node:
    node = graph.node(node_id) if node_id else None
    if node is None or node.kind is not kind:
        raise UnknownNodeError(f"graph has no {kind.value} node {node_id!r}")
    return node


# --- edits ---------------------------------------------------------------------


def apply_edit(graph: ProcessGraph, edit: GraphEdit) -> ProcessGraph:
    """Apply one customization edit, returning a new graph.

    Removing a node that was the only input of a decision cascades to the
    decision and its outgoing arrows.  The software_deployment process is
    irremovable.
    """
    if edit.kind is EditKind.REMOVE_PROCESS:
        return _remove_process(graph, edit)
    if edit.kind is EditKind.REMOVE_ARTIFACT:
        return _remove_artifact(graph, edit)
    if edit.kind is EditKind.ADD_NODE:
        return _add_node(graph, edit)
    if edit.kind is EditKind.ADD_EDGE:
        return _add_edge(graph, edit)
    if edit.kind is EditKind.REMOVE_EDGE:
        return _remove_edge(graph, edit)
    raise ValueError(f"unsupported edit kind {edit.kind!r}")


def apply_edits(graph: ProcessGraph, edits: Iterable[GraphEdit]) -> ProcessGraph:
    """Apply edits in order; the input graph is never modified."""
    for edit in edits:
        graph = apply_edit(graph, edit)
    return graph


def _remove_process(graph: ProcessGraph, edit: GraphEdit) -> ProcessGraph:
    process = _require(graph, edit.node_id, NodeKind.PROCESS)
    if process.id == DEPLOYMENT_PROCESS:
        raise WouldDisconnectDeploymentError(
            f"{DEPLOYMENT_PROCESS!r} cannot be removed: every modelled attack presumes a deployed model"
        )
    mode = edit.mode or RemoveMode.SPLICE
    nodes = [n for n in graph.nodes if n.id != process.id]

    if mode is RemoveMode.SPLICE:
        anchor = _nearest_process_ancestor(graph, process.id, include_self=False)
        edges: list[Edge] = []
        for e in graph.edges:
            if e.target == process.id:
                continue
            if e.source == process.id:
                if anchor is None:
                    continue  # nothing upstream to re-source onto
                e = replace(e, source=anchor.id)
            if e not in edges:
                edges.append(e)
        nodes, edges = _cascade_and_sweep(nodes, edges, sweep_artifacts=False)
    else:
        edges = [e for e in graph.edges if process.id not in (e.source, e.target)]
        nodes, edges = _cascade_and_sweep(nodes, edges, sweep_artifacts=True)

    return replace(graph, nodes=tuple(nodes), edges=tuple(edges))


def _remove_artifact(graph: ProcessGraph, edit: GraphEdit) -> ProcessGraph:
    artifact = _require(graph, edit.node_id, NodeKind.ARTIFACT)
    nodes = [n for n in graph.nodes if n.id != artifact.id]
    edges = [e for e in graph.edges if artifact.id not in (e.source, e.target)]
    nodes, edges = _cascade_and_sweep(nodes, edges, sweep_artifacts=False)
    return replace(graph, nodes=tuple(nodes), edges=tuple(edges))


def _add_node(graph: ProcessGraph, edit: GraphEdit) -> ProcessGraph:
    if edit.node is None:
        raise ValueError("add_node edit carries no node payload")
    if graph.has_node(edit.node.id):
        raise DuplicateNodeError(f"graph already contains a node {edit.node.id!r}")
    return replace(graph, nodes=graph.nodes + (edit.node,))


def _add_edge(graph: ProcessGraph, edit: GraphEdit) -> ProcessGraph:
    if edit.edge is None:
        raise ValueError("add_edge edit carries no edge payload")
    edge = edit.edge
    if not graph.has_node(edge.source):
        raise UnknownNodeError(f"edge source {edge.source!r} is not in the graph")
    if not edge.is_wildcard and not graph.has_node(edge.target):
        raise UnknownNodeError(f"edge target {edge.target!r} is not in the graph")
    return replace(graph, edges=graph.edges + (edge,))


def _remove_edge(graph: ProcessGraph, edit: GraphEdit) -> ProcessGraph:
    if edit.edge is None:
        raise ValueError("remove_edge edit carries no edge payload")
    if edit.edge not in graph.edges:
        raise UnknownEdgeError(
            f"graph has no edge {edit.edge.source!r} -> {edit.edge.target!r}"
            + (f" [{edit.edge.guard.value}]" if edit.edge.guard else "")
        )
    edges = list(graph.edges)
    edges.remove(edit.edge)
    nodes, edges = _cascade_and_sweep(list(graph.nodes), edges, sweep_artifacts=False)
    return replace(graph, nodes=tuple(nodes), edges=tuple(edges))


# --- wildcard expansion ---------------------------------------------------------


def expand_wildcards(graph: ProcessGraph) -> ProcessGraph:
    """Replace each ``*`` edge with one edge per eligible previous process.

    Eligible targets are development-lifecycle processes (data processing
    and model development phases) whose canonical index is strictly below
    that of the wildcard source's nearest process ancestor.  A wildcard
    whose source has no process ancestor expands to nothing.
    """
    if not graph.wildcard_edges:
        return graph
    edges: list[Edge] = []
    for edge in graph.edges:
        if not edge.is_wildcard:
            edges.append(edge)
            continue
        anchor = _nearest_process_ancestor(graph, edge.source, include_self=True)
        if anchor is None:
            continue
        targets = [
            p
            for p in graph.processes
            if p.phase in DEVELOPMENT_PHASES
            and (p.canonical_index or 0) < (anchor.canonical_index or 0)
        ]
        edges.extend(Edge(edge.source, p.id, edge.guard) for p in targets)
    return replace(graph, edges=tuple(edges))
