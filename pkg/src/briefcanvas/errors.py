"""Exception types shared across the package.

Each error carries enough structure for the HTTP layer to map it onto a
machine code without string matching.
"""

from __future__ import annotations


class BriefcanvasError(Exception):
    """Base class for all package errors."""


class ConstraintsInvalid(BriefcanvasError):
    """A constraint set failed validation. Carries the issue list."""

    def __init__(self, issues):
        self.issues = list(issues)
        summary = "; ".join(f"{i.field}: {i.message}" for i in self.issues)
        super().__init__(f"invalid constraint set: {summary}")


class SettingsParseError(BriefcanvasError):
    """A settings document is not well-formed JSON or not an object.

    ``byte_offset`` points at the first offending byte of the UTF-8 input,
    or -1 when the failure is structural rather than syntactic.
    """

    def __init__(self, message: str, byte_offset: int = -1):
        self.byte_offset = byte_offset
        super().__init__(message)


class CatalogError(BriefcanvasError):
    """Reference-screen catalog loading or ingestion failed."""


class ProviderError(BriefcanvasError):
    """The completion provider failed (network, HTTP status, timeout, config)."""

    def __init__(self, message: str, status: int | None = None, stage: str | None = None):
        self.status = status
        self.stage = stage
        super().__init__(message)


class GenerationMalformed(BriefcanvasError):
    """Model output contained no extractable HTML document."""


class EvaluationError(BriefcanvasError):
    """A document could not be evaluated (distinct from scoring 0%)."""


class NotFoundError(BriefcanvasError):
    """A referenced entity does not exist or is not visible to the caller."""


class ConflictError(BriefcanvasError):
    """A uniqueness rule was violated (duplicate folder name, login, ...)."""


class UnauthorizedError(BriefcanvasError):
    """Missing, expired, or invalid session credentials."""


class AssetError(BriefcanvasError):
    """Asset upload rejected (undecodable or oversize)."""
