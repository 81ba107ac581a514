"""Exception hierarchy shared across the toolkit.

Two broad failure classes map onto the CLI exit codes: configuration or
data-contract violations (exit 1) and file access/decode failures (exit 2).
"""


class FhopError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(FhopError):
    """A config value or input record violates a documented invariant."""


class StorageError(FhopError):
    """A file could not be read, decoded, or written."""
