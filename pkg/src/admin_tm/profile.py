"""Fixed questionnaire describing one AI based software.

The answers drive everything downstream: four structural flags decide
which template processes and artifacts are cut away, and the remaining
fields feed the applicability rules.  Field order here is canonical and
doubles as the document serialization order.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from enum import Enum
from typing import Any, Iterable, Mapping

from .errors import (
    BadEnumValueError,
    InvariantViolationError,
    MissingAnswerError,
    UnknownKeyError,
)
from .process_model import GraphEdit, RemoveMode

DEFAULT_PROFILE_NAME = "unnamed"


class DataVisibility(Enum):
    PUBLIC = "public"
    PRIVATE = "private"


class DataSourceTrust(Enum):
    FULLY_TRUSTED = "fully_trusted"
    PARTIALLY_TRUSTED = "partially_trusted"
    UNTRUSTED = "untrusted"


class ModelOpenness(Enum):
    OPEN_SOURCE = "open_source"
    PROPRIETARY = "proprietary"


class ModelQueryAccess(Enum):
    PUBLIC = "public"
    RESTRICTED = "restricted"
    NONE = "none"


class DeploymentExposure(Enum):
    PUBLIC_INTERNET = "public_internet"
    RESTRICTED_CLIENTS = "restricted_clients"
    OFFLINE = "offline"


class InputModality(Enum):
    IMAGE = "image"
    VIDEO = "video"
    NATURAL_LANGUAGE_TEXT = "natural_language_text"
    PROMPT_INTERFACE = "prompt_interface"
    AUDIO = "audio"
    TIME_SERIES = "time_series"
    TABULAR = "tabular"
    NETWORK_TELEMETRY = "network_telemetry"


class TransportSecurity(Enum):
    UNTRUSTED_NETWORK = "untrusted_network"
    TRUSTED_PROVIDER = "trusted_provider"
    LOCAL_ONLY = "local_only"


@dataclass(frozen=True)
class SoftwareProfile:
    """Answers to the applicability questionnaire, one field per question."""

    name: str
    data_visibility: DataVisibility
    data_source_trust: DataSourceTrust
    repository_integrity_assured: bool
    model_openness: ModelOpenness
    model_query_access: ModelQueryAccess
    deployment_exposure: DeploymentExposure
    input_modalities: frozenset[InputModality]
    captures_physical_environment: bool
    transport_security: TransportSecurity
    dev_pipeline_compromise_conceivable: bool
    uses_feature_engineering: bool
    uses_labelling: bool
    monitors_model_in_deployment: bool
    has_decision_making_stage: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "input_modalities", frozenset(self.input_modalities))
        if not self.input_modalities:
            raise InvariantViolationError("input_modalities must name at least one modality")
        if (
            self.deployment_exposure is DeploymentExposure.OFFLINE
            and self.transport_security is not TransportSecurity.LOCAL_ONLY
        ):
            raise InvariantViolationError(
                "offline deployment implies local-only transport; "
                f"got transport_security={self.transport_security.value!r}"
            )


class AnswerKind(Enum):
    CHOICE = "choice"
    MULTI_CHOICE = "multi_choice"
    FLAG = "flag"


@dataclass(frozen=True)
class ProfileQuestion:
    """One questionnaire entry: profile field, prompt and legal answers."""

    key: str
    prompt: str
    answer_kind: AnswerKind
    options: tuple[str, ...]


_FLAG_OPTIONS = ("yes", "no")


def _choice(key: str, prompt: str, enum: type[Enum]) -> ProfileQuestion:
    return ProfileQuestion(key, prompt, AnswerKind.CHOICE, tuple(e.value for e in enum))


def _multi(key: str, prompt: str, enum: type[Enum]) -> ProfileQuestion:
    return ProfileQuestion(key, prompt, AnswerKind.MULTI_CHOICE, tuple(e.value for e in enum))


def _flag(key: str, prompt: str) -> ProfileQuestion:
    return ProfileQuestion(key, prompt, AnswerKind.FLAG, _FLAG_OPTIONS)


QUESTIONS: tuple[ProfileQuestion, ...] = (
    _choice("data_visibility", "Is the data behind the model public or private?", DataVisibility),
    _choice("data_source_trust", "How much do you trust the sources your data comes from?", DataSourceTrust),
    _flag("repository_integrity_assured", "Is the integrity of the data repositories assured (access control, signing, audits)?"),
    _choice("model_openness", "Is the model open source or proprietary?", ModelOpenness),
    _choice("model_query_access", "Who can send queries to the model?", ModelQueryAccess),
    _choice("deployment_exposure", "How is the deployed software exposed to clients?", DeploymentExposure),
    _multi("input_modalities", "Which input modalities does the software accept?", InputModality),
    _flag("captures_physical_environment", "Does the software capture its input from the physical environment (camera, microphone, sensors)?"),
    _choice("transport_security", "What kind of network does input and output data travel over?", TransportSecurity),
    _flag("dev_pipeline_compromise_conceivable", "Could an adversary conceivably access any part of the development pipeline?"),
    _flag("uses_feature_engineering", "Does the development process include a feature engineering step?"),
    _flag("uses_labelling", "Does the development process include a data labelling step?"),
    _flag("monitors_model_in_deployment", "Is the model's performance monitored while deployed?"),
    _flag("has_decision_making_stage", "Do predictions feed an explicit decision-making stage?"),
)

#: Flags that may be left unanswered, with the value they then take.
FLAG_DEFAULTS: dict[str, bool] = {
    "repository_integrity_assured": False,
    "dev_pipeline_compromise_conceivable": True,
}

_ENUM_FIELDS: dict[str, type[Enum]] = {
    "data_visibility": DataVisibility,
    "data_source_trust": DataSourceTrust,
    "model_openness": ModelOpenness,
    "model_query_access": ModelQueryAccess,
    "deployment_exposure": DeploymentExposure,
    "transport_security": TransportSecurity,
}

PROFILE_FIELD_ORDER: tuple[str, ...] = tuple(f.name for f in fields(SoftwareProfile))


def question_set() -> tuple[ProfileQuestion, ...]:
    """Return the questionnaire: one question per profile field except name."""
    return QUESTIONS


def _coerce_enum(key: str, enum: type[Enum], raw: Any) -> Enum:
    if isinstance(raw, enum):
        return raw
    try:
        return enum(raw)
    except ValueError:
        legal = ", ".join(e.value for e in enum)
        raise BadEnumValueError(f"{key}: {raw!r} is not one of {legal}") from None


def _coerce_flag(key: str, raw: Any) -> bool:
    if isinstance(raw, bool):
        return raw
    if raw == "yes":
        return True
    if raw == "no":
        return False
    raise BadEnumValueError(f"{key}: {raw!r} is not yes/no")


def _coerce_modalities(raw: Any) -> frozenset[InputModality]:
    if isinstance(raw, (str, InputModality)):
        raw = [raw]
    if not isinstance(raw, Iterable):
        raise BadEnumValueError(f"input_modalities: {raw!r} is not a set of modalities")
    return frozenset(_coerce_enum("input_modalities", InputModality, item) for item in raw)


def build_profile(answers: Mapping[str, Any]) -> SoftwareProfile:
    """Build a profile from raw answers (strings, yes/no flags, lists).

    Only the two flags with declared defaults may be left unanswered; a
    missing name falls back to a placeholder so answer transcripts stay
    anonymous-friendly.
    """
    known = set(PROFILE_FIELD_ORDER)
    for key in answers:
        if key not in known:
            raise UnknownKeyError(f"unknown profile field {key!r}")

    values: dict[str, Any] = {}
    for key in PROFILE_FIELD_ORDER:
        if key in answers:
            raw = answers[key]
        elif key == "name":
            values[key] = DEFAULT_PROFILE_NAME
            continue
        elif key in FLAG_DEFAULTS:
            values[key] = FLAG_DEFAULTS[key]
            continue
        else:
            raise MissingAnswerError(f"no answer for required field {key!r}")

        if key == "name":
            values[key] = str(raw)
        elif key == "input_modalities":
            values[key] = _coerce_modalities(raw)
        elif key in _ENUM_FIELDS:
            values[key] = _coerce_enum(key, _ENUM_FIELDS[key], raw)
        else:
            values[key] = _coerce_flag(key, raw)

    return SoftwareProfile(**values)


def derive_graph_edits(profile: SoftwareProfile) -> tuple[GraphEdit, ...]:
    """Translate the four structural flags into template edits, in fixed order.

    Ordering constraints: the decision artifact must go before its producing
    process, because pruning the process would sweep the artifact first and
    the explicit removal would then dangle.
    """
    edits: list[GraphEdit] = []
    if not profile.uses_feature_engineering and not profile.uses_labelling:
        edits.append(GraphEdit.remove_process("feature_engineering_labelling", RemoveMode.SPLICE))
        edits.append(GraphEdit.remove_artifact("a_features"))
        edits.append(GraphEdit.remove_artifact("a_labels"))
    elif not profile.uses_feature_engineering:
        edits.append(GraphEdit.remove_artifact("a_features"))
    elif not profile.uses_labelling:
        edits.append(GraphEdit.remove_artifact("a_labels"))
    if not profile.monitors_model_in_deployment:
        edits.append(GraphEdit.remove_process("model_evaluation_during_deployment", RemoveMode.PRUNE))
    if not profile.has_decision_making_stage:
        edits.append(GraphEdit.remove_artifact("a_decision"))
        edits.append(GraphEdit.remove_process("decision_making", RemoveMode.PRUNE))
    return tuple(edits)
