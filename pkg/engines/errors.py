"""Exception hierarchy shared by every engine."""

from typing import Optional


class HydroboostError(Exception):
    """Base class for all engine errors."""


class DomainError(HydroboostError):
    """Input lies outside the validity band of a model."""


class ParameterError(HydroboostError):
    """Physical parameter set is degenerate or inconsistent."""


class SingularityError(HydroboostError):
    """A normalization or kinematic relation is undefined at the given state."""


class IntegrationError(HydroboostError):
    """Propagation aborted because the derivative could not be evaluated."""

    def __init__(self, message: str, time: Optional[float] = None):
        self.time = time
        if time is not None:
            message = f"{message} (t = {time:.4f} s)"
        super().__init__(message)


class AlignmentError(HydroboostError):
    """Result sets that must be paired element-wise do not line up."""


class ScenarioParseError(HydroboostError):
    """Scenario or sweep file could not be turned into a valid spec."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} [{', '.join(location)}]"
        super().__init__(message)


class ExportError(HydroboostError):
    """Result file could not be written."""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        super().__init__(f"{message}: {path}" if path else message)
