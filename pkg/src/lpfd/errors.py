"""Exception hierarchy shared by the whole package."""


class LPFDError(Exception):
    """Base class; ``reason`` is a short machine-readable code."""

    reason = "error"


class VocabularyError(LPFDError):
    reason = "vocabulary_error"


class DomainError(LPFDError):
    reason = "domain_error"


class ModelError(LPFDError):
    """A PD model violates one of its structural invariants."""

    reason = "model_error"


class FormatError(LPFDError):
    reason = "format_error"


class ResourceError(LPFDError):
    reason = "resource_error"


class ParseError(LPFDError):
    reason = "parse_error"

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
