"""Exception hierarchy shared across the pipeline stages."""


class NationMoodError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NationMoodError):
    """A value or record violates a documented invariant."""


class ParseError(NationMoodError):
    """An input file is unreadable or exceeds the bad-line tolerance."""

    def __init__(self, message, bad_lines=None):
        super().__init__(message)
        # line numbers (1-based) of offending lines, capped by the parser
        self.bad_lines = list(bad_lines or [])


class FingerprintError(NationMoodError):
    """A model was applied to data built against a different registry/vocabulary."""


class ConfigError(NationMoodError):
    """A config file or SimConfig is invalid."""
