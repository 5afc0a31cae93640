"""Applicability rules: which attacks apply to a profiled software.

Each concrete attack has one deterministic rule over the software profile.
A rule yields a status, a machine-readable reason code and a short
rationale; the enumeration step pairs that with STRIDE tags and the graph
nodes the attack attaches to.  Rules never consult anything but the
profile, so identical inputs always produce identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable

from .errors import InvalidGraphError, UnknownAttackError
from .process_model import (
    GraphEdit,
    ProcessGraph,
    apply_edits,
    default_graph,
    expand_wildcards,
    validate,
)
from .profile import (
    DataSourceTrust,
    DataVisibility,
    DeploymentExposure,
    InputModality,
    ModelOpenness,
    ModelQueryAccess,
    SoftwareProfile,
    TransportSecurity,
    derive_graph_edits,
)
from .taxonomy import TAXONOMY_VERSION, Stride, is_leaf, leaves, lookup, stride_for

TOOL_VERSION = "0.1.0"


class Status(Enum):
    APPLICABLE = "applicable"
    NOT_APPLICABLE = "not_applicable"
    ACCEPTED_RISK = "accepted_risk"


class ReasonCode(Enum):
    DATA_PUBLIC = "data_public"
    DATA_PRIVATE = "data_private"
    NO_QUERY_ACCESS = "no_query_access"
    QUERYABLE_PRIVATE_DATA = "queryable_private_data"
    UNTRUSTED_DATA_SOURCE = "untrusted_data_source"
    REPOSITORY_COMPROMISE = "repository_compromise"
    TRUSTED_DATA_SOURCE = "trusted_data_source"
    PIPELINE_ACCESS_CONCEIVABLE = "pipeline_access_conceivable"
    PIPELINE_SECURED = "pipeline_secured"
    MODEL_OPEN_SOURCE = "model_open_source"
    QUERYABLE_PROPRIETARY_MODEL = "queryable_proprietary_model"
    NO_PROMPT_INPUT = "no_prompt_input"
    MODALITY_MATCH = "modality_match"
    MODALITY_ABSENT = "modality_absent"
    PUBLICLY_EXPOSED = "publicly_exposed"
    RESTRICTED_CLIENTS = "restricted_clients"
    NOT_PUBLICLY_EXPOSED = "not_publicly_exposed"
    PHYSICAL_CAPTURE = "physical_capture"
    NO_PHYSICAL_CAPTURE = "no_physical_capture"
    UNTRUSTED_NETWORK = "untrusted_network"
    TRUSTED_TRANSPORT = "trusted_transport"
    LOCAL_ONLY_DEPLOYMENT = "local_only_deployment"


@dataclass(frozen=True)
class Applicability:
    """One rule outcome: status plus why."""

    status: Status
    reason_code: ReasonCode
    rationale: str


@dataclass(frozen=True)
class ThreatFinding:
    """One attack's determination against one software."""

    attack: str
    applicability: Applicability
    stride: frozenset[Stride]
    attachments: frozenset[str]
    variants: tuple[str, ...] = ()


@dataclass(frozen=True)
class ThreatModelResult:
    """Complete enumeration output: customized graph plus all findings."""

    profile: SoftwareProfile
    graph: ProcessGraph
    findings: tuple[ThreatFinding, ...]
    taxonomy_version: str
    tool_version: str
    created_at: str | None = None


def _applicable(reason: ReasonCode, rationale: str) -> Applicability:
    return Applicability(Status.APPLICABLE, reason, rationale)


def _not_applicable(reason: ReasonCode, rationale: str) -> Applicability:
    return Applicability(Status.NOT_APPLICABLE, reason, rationale)


def _accepted(reason: ReasonCode, rationale: str) -> Applicability:
    return Applicability(Status.ACCEPTED_RISK, reason, rationale)


# R1 / R3: property inference and datapoint verification leak private data
# through whatever query surface the model exposes.
def _rule_private_data_via_queries(p: SoftwareProfile) -> Applicability:
    if p.data_visibility is DataVisibility.PRIVATE and p.model_query_access is not ModelQueryAccess.NONE:
        return _applicable(ReasonCode.QUERYABLE_PRIVATE_DATA,
                           "private data can leak through the model's query surface")
    if p.data_visibility is DataVisibility.PUBLIC:
        return _not_applicable(ReasonCode.DATA_PUBLIC,
                               "the data behind the model is already public")
    return _not_applicable(ReasonCode.NO_QUERY_ACCESS,
                           "the model exposes no query surface to leak through")


# R2: theft only matters for private datasets.
def _rule_dataset_theft(p: SoftwareProfile) -> Applicability:
    if p.data_visibility is DataVisibility.PRIVATE:
        return _applicable(ReasonCode.DATA_PRIVATE,
                           "the dataset is private and worth stealing")
    return _not_applicable(ReasonCode.DATA_PUBLIC,
                           "the data behind the model is already public")


# R4: poisoning is off the table only with fully trusted sources AND
# integrity-assured repositories.
def _rule_data_poisoning(p: SoftwareProfile) -> Applicability:
    if p.data_source_trust is not DataSourceTrust.FULLY_TRUSTED:
        return _applicable(ReasonCode.UNTRUSTED_DATA_SOURCE,
                           "data comes from sources that are not fully trusted")
    if not p.repository_integrity_assured:
        return _applicable(ReasonCode.REPOSITORY_COMPROMISE,
                           "a compromised data repository could alter trusted data")
    return _not_applicable(ReasonCode.TRUSTED_DATA_SOURCE,
                           "data sources are fully trusted and repositories are integrity-assured")


# R5: model poisoning rides on development-pipeline access.
def _rule_model_poisoning(p: SoftwareProfile) -> Applicability:
    if p.dev_pipeline_compromise_conceivable:
        return _applicable(ReasonCode.PIPELINE_ACCESS_CONCEIVABLE,
                           "an adversary could plausibly reach part of the development pipeline")
    return _not_applicable(ReasonCode.PIPELINE_SECURED,
                           "the development pipeline is considered out of an adversary's reach")


# R6 / R7: stealing policy or model only pays off for queryable proprietary models.
def _rule_proprietary_model_via_queries(p: SoftwareProfile) -> Applicability:
    if p.model_openness is ModelOpenness.OPEN_SOURCE:
        return _not_applicable(ReasonCode.MODEL_OPEN_SOURCE,
                               "the model is open source; its internals are already public")
    if p.model_query_access is ModelQueryAccess.NONE:
        return _not_applicable(ReasonCode.NO_QUERY_ACCESS,
                               "the model exposes no query surface to probe")
    return _applicable(ReasonCode.QUERYABLE_PROPRIETARY_MODEL,
                       "a proprietary model is exposed to queries")


# R8: prompt injection needs a prompt interface.
def _rule_prompt_injection(p: SoftwareProfile) -> Applicability:
    if InputModality.PROMPT_INTERFACE in p.input_modalities:
        return _applicable(ReasonCode.MODALITY_MATCH,
                           "a prompt interface is among the accepted input modalities")
    return _not_applicable(ReasonCode.NO_PROMPT_INPUT,
                           "the software takes no prompt input")


# R9 / R10: denial of service needs public reachability.
def _rule_dos(p: SoftwareProfile) -> Applicability:
    if p.deployment_exposure is DeploymentExposure.PUBLIC_INTERNET:
        return _applicable(ReasonCode.PUBLICLY_EXPOSED,
                           "the service is reachable from the public internet")
    if p.deployment_exposure is DeploymentExposure.RESTRICTED_CLIENTS:
        return _not_applicable(ReasonCode.RESTRICTED_CLIENTS,
                               "only known clients can reach the service")
    return _not_applicable(ReasonCode.NOT_PUBLICLY_EXPOSED,
                           "the service is not exposed over a network")


def _rule_modality(modalities: frozenset[InputModality], label: str) -> Callable[[SoftwareProfile], Applicability]:
    # R11 / R12: evasion variants keyed to accepted input modalities.
    def rule(p: SoftwareProfile) -> Applicability:
        if p.input_modalities & modalities:
            return _applicable(ReasonCode.MODALITY_MATCH,
                               f"the software accepts {label} input")
        return _not_applicable(ReasonCode.MODALITY_ABSENT,
                               f"the software accepts no {label} input")
    return rule


# R13: real-world evasion needs inputs captured from the physical scene.
def _rule_real_world_evasion(p: SoftwareProfile) -> Applicability:
    if p.captures_physical_environment:
        return _applicable(ReasonCode.PHYSICAL_CAPTURE,
                           "inputs are captured from the physical environment")
    return _not_applicable(ReasonCode.NO_PHYSICAL_CAPTURE,
                           "inputs are not captured from the physical environment")


# R14: man-in-the-middle tracks transport trust; a trusted provider is a
# consciously carried risk, not a dismissal.
def _rule_mitm(p: SoftwareProfile) -> Applicability:
    if p.transport_security is TransportSecurity.UNTRUSTED_NETWORK:
        return _applicable(ReasonCode.UNTRUSTED_NETWORK,
                           "inputs and outputs travel over an untrusted network")
    if p.transport_security is TransportSecurity.TRUSTED_PROVIDER:
        return _accepted(ReasonCode.TRUSTED_TRANSPORT,
                         "transport is trusted to the provider; the residual risk is consciously carried")
    return _not_applicable(ReasonCode.LOCAL_ONLY_DEPLOYMENT,
                           "inputs and outputs never leave the local machine")


#: One rule per concrete attack, in canonical catalog order.
RULES: dict[str, Callable[[SoftwareProfile], Applicability]] = {
    "data.exfiltration.property": _rule_private_data_via_queries,            # R1
    "data.exfiltration.dataset_theft": _rule_dataset_theft,                  # R2
    "data.exfiltration.datapoint_verification": _rule_private_data_via_queries,  # R3
    "data.poisoning": _rule_data_poisoning,                                  # R4
    "model.poisoning": _rule_model_poisoning,                                # R5
    "model.policy_exfiltration": _rule_proprietary_model_via_queries,        # R6
    "model.extraction": _rule_proprietary_model_via_queries,                 # R7
    "input.prompt_injection": _rule_prompt_injection,                        # R8
    "input.dos.flooding": _rule_dos,                                         # R9
    "input.dos.manipulated_inputs": _rule_dos,                               # R10
    "input.evasion.natural_language": _rule_modality(
        frozenset({InputModality.NATURAL_LANGUAGE_TEXT}), "natural language text"),  # R11
    "input.evasion.image_video": _rule_modality(
        frozenset({InputModality.IMAGE, InputModality.VIDEO}), "image or video"),    # R12
    "input.evasion.real_world": _rule_real_world_evasion,                    # R13
    "input.mitm": _rule_mitm,                                                # R14
}


def _leaf(attack: str):
    node = lookup(attack)
    if not is_leaf(node):
        raise UnknownAttackError(f"{attack!r} is a grouping, not a concrete attack")
    return node


def applicability(attack: str, profile: SoftwareProfile) -> Applicability:
    """Evaluate one attack's rule against a profile."""
    _leaf(attack)
    return RULES[attack](profile)


def attach(attack: str, graph: ProcessGraph) -> frozenset[str]:
    """Return the attack's attachment points that survive in this graph."""
    node = _leaf(attack)
    return frozenset(node.attachment_selector) & graph.node_ids


def _poisoning_variants(profile: SoftwareProfile) -> tuple[str, ...]:
    # Altering or deleting existing datapoints needs write access to the
    # stored data; adding new ones only needs a seat at the source.
    if profile.repository_integrity_assured:
        return ("addition",)
    return ("addition", "modification", "deletion")


def enumerate_threats(
    graph: ProcessGraph,
    profile: SoftwareProfile,
    *,
    created_at: str | None = None,
) -> ThreatModelResult:
    """Determine every attack's applicability against a customized graph.

    Wildcard edges still present are expanded first.  Findings come in
    canonical catalog order, one per concrete attack; not-applicable
    findings carry no attachments.
    """
    graph = expand_wildcards(graph)
    check = validate(graph)
    if not check.ok:
        first = check.violations[0]
        raise InvalidGraphError(
            f"graph failed validation: {first.message}", violations=check.violations
        )

    findings = []
    for leaf in leaves():
        outcome = applicability(leaf.id, profile)
        attached = (
            frozenset() if outcome.status is Status.NOT_APPLICABLE else attach(leaf.id, graph)
        )
        variants: tuple[str, ...] = ()
        if leaf.id == "data.poisoning" and outcome.status is not Status.NOT_APPLICABLE:
            variants = _poisoning_variants(profile)
        findings.append(
            ThreatFinding(
                attack=leaf.id,
                applicability=outcome,
                stride=stride_for(leaf.id),
                attachments=attached,
                variants=variants,
            )
        )

    return ThreatModelResult(
        profile=profile,
        graph=graph,
        findings=tuple(findings),
        taxonomy_version=TAXONOMY_VERSION,
        tool_version=TOOL_VERSION,
        created_at=created_at,
    )


def threat_model(
    profile: SoftwareProfile,
    overlay_edits: Iterable[GraphEdit] = (),
    *,
    created_at: str | None = None,
) -> ThreatModelResult:
    """Run the whole pipeline from a profile.

    Template graph, then the profile-derived removals, then any overlay
    edits, then wildcard expansion and enumeration.
    """
    graph = default_graph()
    graph = apply_edits(graph, derive_graph_edits(profile))
    graph = apply_edits(graph, tuple(overlay_edits))
    return enumerate_threats(graph, profile, created_at=created_at)
