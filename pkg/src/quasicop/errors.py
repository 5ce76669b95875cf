"""Shared exception types."""


class QuasicopError(Exception):
    """Base class for all package errors."""


class MalformedVertexError(QuasicopError, ValueError):
    """A vertex payload failed validation or canonicalization."""


class MalformedSpecError(QuasicopError, ValueError):
    """A space / agent / game spec string could not be parsed."""


class ExceedsCutoffError(QuasicopError, RuntimeError):
    """An exact answer was requested but lies beyond the given cutoff."""


class ResourceLimitError(QuasicopError, RuntimeError):
    """An enumeration or search exceeded its configured budget."""


class ProtocolError(QuasicopError, RuntimeError):
    """An agent violated the game protocol (illegal move, bad declaration).

    The offending side is recorded so the engine can attribute the forfeit.
    """

    def __init__(self, offender: str, reason: str):
        super().__init__(f"{offender}: {reason}")
        self.offender = offender
        self.reason = reason


class StrategyUnavailableError(QuasicopError, RuntimeError):
    """A strategy's preconditions do not hold on the requested space."""


class OracleCaughtError(QuasicopError, RuntimeError):
    """A stand-in oracle found no safe move and concedes."""


class GameAssertionError(QuasicopError, AssertionError):
    """A runtime game assertion failed while running in fail-fast mode."""

    def __init__(self, stage: int, name: str, detail: str = ""):
        super().__init__(f"stage {stage}: {name}" + (f" ({detail})" if detail else ""))
        self.stage = stage
        self.name = name
        self.detail = detail
