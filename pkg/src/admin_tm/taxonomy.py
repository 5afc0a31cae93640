"""Catalog of adversarial attacks on AI based software.

Attacks are organised as a three-level tree: the category names what is
targeted (dataset, model, or input), the class names the technique family,
and an optional third level distinguishes variants of one family.  STRIDE
categories are assigned per class; variants inherit them.  Each concrete
attack also carries the graph node ids it attaches to when those nodes
survive customization.

The catalog order below is canonical and load-bearing: enumeration
results, reports and documents all list attacks in exactly this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import UnknownAttackError

TAXONOMY_VERSION = "v1"


class Stride(Enum):
    SPOOFING = "Spoofing"
    TAMPERING = "Tampering"
    REPUDIATION = "Repudiation"
    INFORMATION_DISCLOSURE = "InformationDisclosure"
    DENIAL_OF_SERVICE = "DenialOfService"
    ELEVATION_OF_PRIVILEGE = "ElevationOfPrivilege"


#: Canonical S-T-R-I-D-E ordering used everywhere STRIDE sets are listed.
STRIDE_ORDER = tuple(Stride)


class AttackLevel(Enum):
    CATEGORY = "category"
    CLASS = "class"
    VARIANT = "variant"


@dataclass(frozen=True)
class AttackNode:
    """One node of the attack tree; only classes carry a STRIDE set."""

    id: str
    label: str
    level: AttackLevel
    description: str
    parent: str | None = None
    stride: frozenset[Stride] | None = None
    variants: tuple[str, ...] = ()
    attachment_selector: tuple[str, ...] = ()

    @property
    def category(self) -> str:
        return self.id.split(".", 1)[0]


def _cat(id: str, label: str, description: str) -> AttackNode:
    return AttackNode(id, label, AttackLevel.CATEGORY, description)


def _cls(
    id: str,
    label: str,
    description: str,
    stride: tuple[Stride, ...],
    attaches: tuple[str, ...] = (),
    variants: tuple[str, ...] = (),
) -> AttackNode:
    parent = id.rsplit(".", 1)[0]
    return AttackNode(id, label, AttackLevel.CLASS, description, parent,
                      frozenset(stride), variants, attaches)


def _var(id: str, label: str, description: str, attaches: tuple[str, ...]) -> AttackNode:
    parent = id.rsplit(".", 1)[0]
    return AttackNode(id, label, AttackLevel.VARIANT, description, parent,
                      None, (), attaches)


ATTACKS: tuple[AttackNode, ...] = (
    _cat("data", "Dataset",
         "Attacks that target the datasets the model is built from."),
    _cls("data.exfiltration", "Data Exfiltration",
         "Steals information about or from the data behind the model.",
         (Stride.INFORMATION_DISCLOSURE,)),
    _var("data.exfiltration.property", "Property Inference",
         "Infers aggregate properties of the training data from model behaviour.",
         ("a_training_dataset", "software_deployment")),
    _var("data.exfiltration.dataset_theft", "Dataset Theft",
         "Steals or reconstructs the dataset backing the model.",
         ("a_raw_dataset", "a_training_dataset", "a_validation_dataset", "a_testing_dataset")),
    _var("data.exfiltration.datapoint_verification", "Datapoint Verification",
         "Confirms whether a specific record was part of the training data.",
         ("a_training_dataset", "software_deployment")),
    _cls("data.poisoning", "Data Poisoning",
         "Adds, alters or deletes data so the trained model mislearns.",
         (Stride.SPOOFING, Stride.TAMPERING),
         ("data_preparation", "feature_engineering_labelling", "a_raw_dataset",
          "a_clean_dataset", "a_training_dataset", "a_validation_dataset"),
         ("addition", "modification", "deletion")),
    _cat("model", "Model",
         "Attacks that target the model itself."),
    _cls("model.poisoning", "Model Poisoning",
         "Tampers with the model as it is trained or tuned, typically via a compromised pipeline.",
         (Stride.SPOOFING, Stride.TAMPERING),
         ("model_training", "hyperparameter_tuning", "a_algorithm", "a_trained_model")),
    _cls("model.policy_exfiltration", "Policy Exfiltration",
         "Recovers the decision policy a deployed agent has learned.",
         (Stride.INFORMATION_DISCLOSURE,),
         ("software_deployment",)),
    _cls("model.extraction", "Model Extraction",
         "Rebuilds a functional copy of a proprietary model by querying it.",
         (Stride.INFORMATION_DISCLOSURE,),
         ("software_deployment", "a_trained_model", "a_optimized_model")),
    _cat("input", "Input",
         "Attacks delivered through the inputs of the deployed model."),
    _cls("input.prompt_injection", "Prompt Injection",
         "Smuggles instructions into a prompt so the model acts outside its intended role.",
         (Stride.ELEVATION_OF_PRIVILEGE,),
         ("a_production_data", "software_deployment")),
    _cls("input.dos", "Denial of Service",
         "Starves the service of capacity so legitimate users get no predictions.",
         (Stride.DENIAL_OF_SERVICE,)),
    _var("input.dos.flooding", "Flooding",
         "Overwhelms the service with sheer request volume.",
         ("software_deployment",)),
    _var("input.dos.manipulated_inputs", "Manipulated Inputs",
         "Submits inputs crafted to be pathologically expensive to process.",
         ("software_deployment",)),
    _cls("input.evasion", "Evasion",
         "Perturbs inputs so the model misreads them while a human would not.",
         (Stride.SPOOFING, Stride.REPUDIATION)),
    _var("input.evasion.natural_language", "Natural Language Evasion",
         "Evasion through reworded or obfuscated text.",
         ("a_production_data", "software_deployment")),
    _var("input.evasion.image_video", "Image & Video Evasion",
         "Evasion through pixel-level changes to images or video frames.",
         ("a_production_data", "software_deployment")),
    _var("input.evasion.real_world", "Real-World Evasion",
         "Evasion staged in the physical scene before capture.",
         ("a_production_data", "software_deployment")),
    _cls("input.mitm", "Man-in-the-Middle",
         "Intercepts and alters data moving between user, model and decision maker.",
         (Stride.TAMPERING,),
         ("a_production_data", "a_prediction", "decision_making")),
)

_BY_ID = {node.id: node for node in ATTACKS}
_CHILDREN: dict[str, tuple[AttackNode, ...]] = {
    node.id: tuple(n for n in ATTACKS if n.parent == node.id) for node in ATTACKS
}


def taxonomy() -> tuple[AttackNode, ...]:
    """Return the full attack catalog in canonical order."""
    return ATTACKS


def lookup(attack_id: str) -> AttackNode:
    """Return the catalog node for an attack id."""
    node = _BY_ID.get(attack_id)
    if node is None:
        raise UnknownAttackError(f"no attack {attack_id!r} in the catalog")
    return node


def children(attack_id: str) -> tuple[AttackNode, ...]:
    """Return the direct children of a catalog node, in canonical order."""
    lookup(attack_id)
    return _CHILDREN[attack_id]


def is_leaf(node: AttackNode) -> bool:
    return not _CHILDREN[node.id]


def leaves() -> tuple[AttackNode, ...]:
    """Return the concrete attacks (childless nodes) in canonical order."""
    return tuple(node for node in ATTACKS if is_leaf(node))


def stride_for(attack_id: str) -> frozenset[Stride]:
    """Return the STRIDE categories of an attack.

    Classes carry their own set, variants inherit their class's, and a
    category reports the union over its classes.
    """
    node = lookup(attack_id)
    if node.level is AttackLevel.CLASS:
        assert node.stride is not None
        return node.stride
    if node.level is AttackLevel.VARIANT:
        assert node.parent is not None
        return stride_for(node.parent)
    merged: frozenset[Stride] = frozenset()
    for child in _CHILDREN[node.id]:
        merged |= stride_for(child.id)
    return merged


def sorted_stride(stride: frozenset[Stride]) -> tuple[Stride, ...]:
    """Order a STRIDE set canonically (S, T, R, I, D, E)."""
    return tuple(s for s in STRIDE_ORDER if s in stride)
