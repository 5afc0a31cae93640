"""Exception types shared across the admin-tm package."""

from __future__ import annotations


class AdminTmError(Exception):
    """Base class for every error raised by this package."""


# --- graph editing ---------------------------------------------------------


class GraphEditError(AdminTmError):
    """A graph edit could not be applied."""


class UnknownNodeError(GraphEditError):
    """An edit or lookup referenced a node id that is not in the graph."""


class UnknownEdgeError(GraphEditError):
    """An edit referenced an edge that is not in the graph."""


class DuplicateNodeError(GraphEditError):
    """An add_node edit used an id that already exists in the graph."""


class WouldDisconnectDeploymentError(GraphEditError):
    """Rejected removal of the deployment process every threat presumes."""


class InvalidGraphError(AdminTmError):
    """A graph handed to enumeration failed validation."""

    def __init__(self, message: str, violations: tuple = ()):
        super().__init__(message)
        self.violations = violations


# --- taxonomy ---------------------------------------------------------------


class UnknownAttackError(AdminTmError):
    """An attack id did not resolve in the taxonomy."""


# --- profile ----------------------------------------------------------------


class ProfileError(AdminTmError):
    """A software profile could not be built from the given answers."""


class MissingAnswerError(ProfileError):
    """A required questionnaire field was not answered."""


class UnknownKeyError(ProfileError):
    """An answer used a key that is not a questionnaire field."""


class InvariantViolationError(ProfileError):
    """The answers are individually valid but mutually inconsistent."""


# --- documents ---------------------------------------------------------------


class DocumentError(AdminTmError):
    """A document failed strict parsing."""


class BadEnumValueError(ProfileError, DocumentError):
    """A value is outside the closed set allowed for its field.

    Both a profile error (bad questionnaire answer) and a document error
    (bad value while parsing); the document reading wins for exit codes.
    """


class DocumentSyntaxError(DocumentError):
    """The document text is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownFieldError(DocumentError):
    """The document contains a field the schema does not define."""


class MissingFieldError(DocumentError):
    """The document omits a field the schema requires."""


class InvalidValueError(DocumentError):
    """A document value violates a non-enum constraint (e.g. id format)."""


class VersionMismatchError(DocumentError):
    """The document declares a format_version this tool does not speak."""


class KindMismatchError(DocumentError):
    """The document kind differs from the kind the caller expected."""


# --- reporting ----------------------------------------------------------------


class ReportError(AdminTmError):
    """A report could not be produced from the given results."""


class TaxonomyVersionMismatchError(ReportError):
    """Results built against different taxonomy versions cannot be compared."""


class MinimumTwoError(ReportError):
    """A comparison needs at least two results."""
