"""Exception types shared across the toolkit."""

from __future__ import annotations


class MrmBenchError(Exception):
    """Base class for all toolkit errors."""


class MalformedTermError(MrmBenchError):
    """A term violates its structural invariants (e.g. literal subject)."""


class FrozenGraphError(MrmBenchError):
    """Mutation attempted on a frozen graph."""


class ParseError(MrmBenchError):
    """Syntax error in a parsed document, located by byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class MalformedRowError(MrmBenchError):
    """A dataset row does not match the expected column layout."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class TokenEncodingError(MrmBenchError):
    """A raw term contains the reserved corpus-token separator."""


class UnsupportedShapeError(MrmBenchError):
    """The graph cannot be expressed in the requested format."""


class ExtractionError(MrmBenchError):
    """A graph does not conform to the expected statement shape."""


class ConversionError(MrmBenchError):
    """A statement cannot be converted to the target model."""


class UnresolvedReferenceError(ConversionError):
    """A statement reference (e.g. a `then` target) cannot be resolved."""

    def __init__(self, message: str, identifiers: list[str]):
        super().__init__(f"{message}: {', '.join(identifiers)}")
        self.identifiers = identifiers


class WrongMrmError(MrmBenchError):
    """An operation was applied to a graph of the wrong metadata model."""


class EmptyTaskError(MrmBenchError):
    """No eligible triples remain after filtering."""


class EmptyVocabularyError(MrmBenchError):
    """No tokens survive min-count pruning."""


class UnknownTokenError(MrmBenchError):
    """A token has no embedding table entry."""


class InsufficientDataError(MrmBenchError):
    """Not enough trials/records for the requested analysis."""


class StageError(MrmBenchError):
    """A pipeline stage failed; carries the stage name for exit codes."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
