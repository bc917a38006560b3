"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class TutteZerosError(Exception):
    """Base class for every error raised by this package."""


class PoleAt(TutteZerosError, ZeroDivisionError):
    def __init__(self, q, what: str = "denominator"):
        self.q = q
        super().__init__(f"{what} vanishes at q = {q}")


class NoSignChange(TutteZerosError, ValueError):
    pass


class BudgetExceeded(TutteZerosError):
    pass


class NotTwoTerminalGraph(TutteZerosError, ValueError):
    pass


class NotSeriesParallel(TutteZerosError, ValueError):
    pass


class UndefinedAtUnitLine(TutteZerosError, ValueError):
    pass


class DegenerateEffectiveWeight(TutteZerosError, ZeroDivisionError):
    pass


class IdenticallyDegenerate(TutteZerosError, ZeroDivisionError):
    pass


class OutOfDomain(TutteZerosError, ValueError):
    pass


class WrongCase(TutteZerosError, ValueError):
    """The point does not satisfy the hypotheses of the requested construction."""


class SearchExhausted(TutteZerosError):
    """A bounded search ran to its budget without success.

    Reported, not fatal: callers decide whether exhaustion is acceptable.
    """


class ImmediateExhaustion(SearchExhausted):
    pass


class NotInteriorPoint(TutteZerosError, ValueError):
    def __init__(self, q, v, region, detail: str = ""):
        self.q, self.v, self.region = q, v, region
        msg = f"({q}, {v}) is not an interior point of a supported region ({region})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnsupportedRegion(NotInteriorPoint):
    pass


class NotStarredRegion(TutteZerosError, ValueError):
    pass


class NonPlanarPair(TutteZerosError, AssertionError):
    pass


class PreconditionViolated(TutteZerosError, ValueError):
    pass


class DegenerateRatio(TutteZerosError, ValueError):
    pass


class PoleWindowEmpty(TutteZerosError, AssertionError):
    pass
