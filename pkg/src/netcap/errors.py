"""Exception hierarchy shared across the workbench."""

from __future__ import annotations


class NetcapError(Exception):
    """Base class for all workbench errors."""


class ValidationError(NetcapError):
    """A topology, config, dataset, or edit violates its contract."""


class InputShapeError(ValidationError):
    """Input vector dimension does not match the selected features."""


class EmptyDatasetError(ValidationError):
    """An operation that needs data received none."""


class ParseError(ValidationError):
    """CSV ingestion failed; carries the offending file line when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DivergenceError(NetcapError):
    """Training produced a non-finite loss or weight."""

    def __init__(self, step: int, message: str = "training diverged"):
        super().__init__(f"{message} at step {step}")
        self.step = step


class UndefinedCapacityError(NetcapError):
    """Generalization ratio requested for a zero-capacity network."""


class SchemaError(NetcapError):
    """Experiment record has a missing or incompatible schema version."""
