"""Exception hierarchy shared across the package."""


class WscanError(Exception):
    """Base class for all package-specific errors."""


class ParseError(WscanError):
    """Malformed text input; carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(WscanError):
    """Input violates a dataset invariant (e.g. non-binary phenotype)."""


class FormatError(WscanError):
    """Packed binary file is corrupt, truncated, or not a WPK1 file."""


class DegenerateMarkerError(WscanError):
    """Marker (or pair) has no non-missing observations."""


class UntestableMarkerError(WscanError):
    """Table has a single non-empty category; no odds contrast exists."""


class ConfigurationError(WscanError):
    """An h/f table lacks an entry required by the requested test."""


class EstimationError(WscanError):
    """h/f estimation cannot proceed (e.g. no testable markers)."""


class InsufficientSamplesError(WscanError):
    """Diagnostic report requested on too few null samples."""
