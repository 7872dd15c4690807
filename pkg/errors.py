"""Exception hierarchy shared by the simulator packages."""

from typing import Optional, Sequence


class FdNomaError(Exception):
    """Base class for every error raised by the simulator."""


class ConfigError(FdNomaError):
    """A scenario configuration is invalid or cannot be loaded."""


class TopologyError(FdNomaError):
    """The network geometry cannot be generated for the given scenario."""


class AssignmentError(FdNomaError):
    """A link assignment violates the single-SBS, FD/NOMA exclusion or quota rules."""


class InfeasibleSetError(FdNomaError):
    """A candidate user subset cannot be served jointly by an SBS."""

    def __init__(self, sbs: int, users: Sequence[int], reason: str) -> None:
        self.sbs = sbs
        self.users = tuple(users)
        self.reason = reason
        super().__init__(f"SBS {sbs} cannot serve {list(self.users)}: {reason}")


class InfeasiblePowerError(FdNomaError):
    """No strictly feasible starting point exists for the power optimisation."""


class NewtonStepError(FdNomaError):
    """The Newton system of a centering step could not be solved."""


class BarrierMethodError(FdNomaError):
    """The log-barrier method failed before reaching an acceptable tolerance."""

    def __init__(self, message: str, last_iterate: Optional[object] = None) -> None:
        self.last_iterate = last_iterate
        super().__init__(message)
