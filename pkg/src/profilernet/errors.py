"""Exception hierarchy shared across the package."""


class ProfilerNetError(Exception):
    """Base class for all errors raised by profilernet."""


class CycleError(ProfilerNetError):
    """The directed graph contains a cycle where a DAG is required."""


class InvalidNetworkError(ProfilerNetError):
    """A network failed validation; carries the individual violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(v.message for v in self.violations)
        super().__init__(f"invalid network: {lines}")


class EvidenceError(ProfilerNetError):
    """Evidence references an unknown variable or an out-of-range state.

    ``code`` is one of ``unknown_variable`` / ``bad_state`` and is exposed
    verbatim by the HTTP service.
    """

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


class ImpossibleEvidenceError(ProfilerNetError):
    """The supplied evidence has zero probability under the model."""

    code = "impossible_evidence"


class CaseDataError(ProfilerNetError):
    """A case record is unusable for the requested operation."""


class DataFormatError(ProfilerNetError):
    """A file could not be parsed; anchored to a source line when known."""

    def __init__(self, message: str, source: str | None = None, line: int | None = None):
        self.bare_message = message
        self.source = source
        self.line = line
        if source is None:
            super().__init__(message)
        else:
            where = source if line is None else f"{source}:{line}"
            super().__init__(f"{where}: {message}")
