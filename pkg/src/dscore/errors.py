"""Shared exception types for the scoring pipeline."""


class DScoreError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DScoreError):
    """Source text is not valid input for the mini-C frontend."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = f" at {line}:{col}" if line is not None else ""
        super().__init__(f"{message}{loc}")


class DialectError(ParseError):
    """Construct is outside the supported decompiled-C subset.

    Signals Unscorable downstream, never a penalty.
    """


class EngineFailure(DScoreError):
    """Symbolic or concrete execution could not analyze the function."""

    TIMEOUT = "timeout"
    UNSUPPORTED = "unsupported"
    PATH_EXPLOSION = "path-explosion"

    def __init__(self, kind, message=""):
        self.kind = kind
        super().__init__(f"{kind}: {message}" if message else kind)


class SolverError(DScoreError):
    """SMT solver process failed, timed out, or answered unknown."""


class ToolError(DScoreError):
    """External tool (compiler) could not be spawned or timed out."""


class ConfigError(DScoreError):
    """Invalid configuration, e.g. penalty ordering violation."""


class SchemaError(DScoreError):
    """Malformed corpus record."""
