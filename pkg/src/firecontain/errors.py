"""Error types shared across the package.

Every error that names offending vertices keeps them on the exception so
callers (CLI, service) can surface them in structured form.
"""

from __future__ import annotations


class FirecontainError(Exception):
    """Base class for all package errors."""

    code = "error"


class UnknownVertexError(FirecontainError):
    """A vertex id failed to decode for the graph at hand."""

    code = "unknown-vertex"

    def __init__(self, vertex: str, reason: str = ""):
        self.vertex = vertex
        detail = f"unknown vertex id {vertex!r}"
        if reason:
            detail += f": {reason}"
        super().__init__(detail)


class CapExceededError(FirecontainError):
    """A lazy computation hit its vertex or radius cap."""

    code = "cap-exceeded"

    def __init__(self, detail: str, cap: int | None = None):
        self.cap = cap
        super().__init__(detail)


class InvalidGeneratorError(FirecontainError):
    """Generating set rejected (identity member, or not inversion closed)."""

    code = "invalid-generator"


class EmptyFireError(FirecontainError):
    """Initial fire must be a non-empty set of vertices."""

    code = "empty-fire"

    def __init__(self):
        super().__init__("initial fire must be non-empty")


class _VertexListError(FirecontainError):
    def __init__(self, detail: str, offending: list[str]):
        self.offending = sorted(offending)
        super().__init__(f"{detail}: {', '.join(self.offending)}")


class BudgetExceededError(_VertexListError):
    """More protections requested this turn than the schedule allows."""

    code = "budget-exceeded"

    def __init__(self, requested: int, budget: int, offending: list[str]):
        self.requested = requested
        self.budget = budget
        super().__init__(
            f"requested {requested} protections with budget {budget}", offending
        )


class ProtectingBurningVertexError(_VertexListError):
    """Attempted to protect a vertex that is already burning."""

    code = "protecting-burning-vertex"

    def __init__(self, offending: list[str]):
        super().__init__("cannot protect burning vertices", offending)


class DoubleProtectionError(_VertexListError):
    """Attempted to protect a vertex that is already protected."""

    code = "double-protection"

    def __init__(self, offending: list[str]):
        super().__init__("vertices already protected", offending)


class NoFeasibleRadiusError(FirecontainError):
    """No barricade radius is affordable under the given schedule."""

    code = "no-feasible-radius"

    def __init__(self, max_radius: int):
        self.max_radius = max_radius
        super().__init__(
            f"no barricade radius R <= {max_radius} is affordable under the schedule"
        )


class InapplicableProviderError(FirecontainError):
    """Strategy requires structure the graph provider does not expose."""

    code = "inapplicable-provider"


class StrategyFaultError(FirecontainError):
    """A strategy produced an illegal move during play."""

    code = "strategy-fault"

    def __init__(self, turn: int, cause: FirecontainError):
        self.turn = turn
        self.cause = cause
        super().__init__(f"strategy fault at turn {turn}: {cause}")


class SearchBudgetExceededError(FirecontainError):
    """Exhaustive search ran out of nodes before a verdict; inconclusive."""

    code = "search-budget-exceeded"

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search exceeded node limit after {nodes} nodes")


class UnknownSessionError(FirecontainError):
    """Session id not found (never created, or evicted after idling)."""

    code = "unknown-session"

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"unknown session {session_id!r}")


class NotPendingError(_VertexListError):
    """Attempted to withdraw a protection that was never staged."""

    code = "not-pending"

    def __init__(self, offending: list[str]):
        super().__init__("vertices are not pending protection", offending)


class ConfigError(FirecontainError):
    """A config document failed validation; `where` is a JSON-ish path."""

    code = "config-error"

    def __init__(self, where: str, detail: str):
        self.where = where
        super().__init__(f"at {where}: {detail}")
