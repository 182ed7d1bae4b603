class WsatlabError(Exception):
    """Base class for library errors."""


class DomainError(WsatlabError, ValueError):
    """An argument lies outside the operation's domain."""


class ContainmentError(WsatlabError, ValueError):
    """A subgraph is not contained in its host."""


class BudgetExhausted(WsatlabError):
    """A bounded search ran out of budget before reaching a verdict."""


class ConstructionInfeasible(WsatlabError):
    """An explicit construction cannot be carried out on the given graph."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class EdgeListError(WsatlabError, ValueError):
    """Malformed edge-list input; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
