"""Exception hierarchy for the fragile CPR tax toolkit."""

from __future__ import annotations


class CPRError(Exception):
    """Base class for all package errors."""


class CurveEvaluationError(CPRError):
    pass


class ConfigError(CPRError, ValueError):
    """Malformed game description; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class AssumptionViolation(CPRError):
    """The game fails the admissibility checks; carries the full report."""

    def __init__(self, report):
        self.report = report
        clauses = ", ".join(sorted({v.prop for v in report.violations}))
        super().__init__(f"game violates: {clauses}")


class EmptyPlayerList(CPRError):
    pass


class OutsideGainBranch(CPRError):
    pass


class EmptyRegion(CPRError):
    pass


class NoPositiveReturn(CPRError):
    pass


class DegenerateDenominator(CPRError):
    pass


class NonpositiveDenominator(CPRError):
    pass


class NoConvergence(CPRError):
    pass


class InvariantViolation(CPRError):
    pass


class HeterogeneousK(CPRError):
    pass


class NotAchievable(CPRError):
    """No tax rate reaches the target; reports the closest attainable point."""

    def __init__(self, target: float, nearest_t: float, nearest_x: float):
        self.target = target
        self.nearest_t = nearest_t
        self.nearest_x = nearest_x
        super().__init__(
            f"utilization {target:.6g} not attainable; nearest is "
            f"x_ne={nearest_x:.6g} at t={nearest_t:.6g}"
        )
