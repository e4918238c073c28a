"""Exception types shared by the graph-state modules.

Problems with the input itself are ``ValueError`` subclasses so callers that
only care about "bad input" can catch one type. Exceeded limits and failed
self-checks are ``RuntimeError`` subclasses.
"""

from __future__ import annotations


class GraphStateError(Exception):
    """Base class for every error raised by this project."""


class InvalidParam(GraphStateError, ValueError):
    """A parameter is outside its documented range."""


class VertexOutOfRange(GraphStateError, ValueError):
    """A vertex or qubit index does not exist in the graph or matrix."""


class InvalidPartition(GraphStateError, ValueError):
    """A vertex subset is not a valid cut for the requested operation."""


class DisconnectedGraph(GraphStateError, ValueError):
    """The operation is only defined for fully connected states."""


class MalformedCheckMatrix(GraphStateError, ValueError):
    """Generators do not commute, are dependent, or carry non-real signs."""


class ParseError(GraphStateError, ValueError):
    """A graph, stabilizer or parity-check file could not be parsed."""


class ResourceLimit(GraphStateError, RuntimeError):
    """An exhaustive search would exceed a configured limit."""

    def __init__(self, name: str, limit: int, requested: int) -> None:
        self.name = name
        self.limit = limit
        self.requested = requested
        super().__init__(f"{name} exceeded: requested {requested}, limit {limit}")


class FitFailure(GraphStateError, RuntimeError):
    """The stabilizer decomposition could not reproduce the amplitudes."""


class ConsistencyError(GraphStateError, RuntimeError):
    """A result failed its own cross-check (a bug, not bad input)."""
