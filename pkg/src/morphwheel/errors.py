"""Exception types shared across the package."""

from __future__ import annotations


class MorphwheelError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MorphwheelError):
    """Config text could not be turned into design parameters.

    Carries the offending field path and/or source line when known.
    """

    def __init__(self, message: str, *, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        parts = [message]
        if field is not None:
            parts.append(f"(field: {field})")
        if line is not None:
            parts.append(f"(line: {line})")
        super().__init__(" ".join(parts))


class InvalidDesignError(MorphwheelError):
    """A computation refused to run because the design violates invariants."""

    def __init__(self, report):
        self.report = report
        names = ", ".join(v.field for v in report.violations)
        super().__init__(f"design violates invariants: {names}")


class InfeasibleError(MorphwheelError):
    """The requested design target cannot be met by any parameter choice."""
