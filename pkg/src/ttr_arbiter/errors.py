"""Exception hierarchy.

Every error raised on purpose by this package derives from :class:`ArbiterError`,
so the CLI can turn it into a machine-readable error record.
"""


class ArbiterError(Exception):
    """Base class for all scoring errors."""


# configuration ------------------------------------------------------------

class ConfigError(ArbiterError, ValueError):
    """Invalid benchmark configuration. ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DuplicateWorkloadId(ConfigError):
    pass


class DanglingHeldOutBase(ConfigError):
    pass


class DuplicateHeldOutLink(ConfigError):
    pass


class NonPositiveBudget(ConfigError):
    pass


# curves -------------------------------------------------------------------

class EmptySeries(ArbiterError, ValueError):
    pass


class MissingTestMetric(ArbiterError, ValueError):
    pass


# schedules ----------------------------------------------------------------

class OutOfRangeStep(ArbiterError, ValueError):
    pass


# search spaces ------------------------------------------------------------

class EmptySpace(ArbiterError, ValueError):
    pass


class BudgetExceedsList(ArbiterError, ValueError):
    pass


class InsufficientCandidates(ArbiterError, ValueError):
    pass


# targets ------------------------------------------------------------------

class NoCompletedTrials(ArbiterError, ValueError):
    pass


class EmptyReruns(ArbiterError, ValueError):
    pass


class NoQualifyingReruns(ArbiterError, ValueError):
    pass


# rulesets -----------------------------------------------------------------

class MixedStudies(ArbiterError, ValueError):
    pass


class EvenStudyCount(ArbiterError, ValueError):
    pass


# scoring ------------------------------------------------------------------

class EmptyMatrix(ArbiterError, ValueError):
    pass


class InvalidRMax(ArbiterError, ValueError):
    pass


class DanglingLinkage(ArbiterError, ValueError):
    pass


class NonPositiveTime(ArbiterError, ValueError):
    pass


class InfiniteTime(ArbiterError, ValueError):
    pass


# analysis -----------------------------------------------------------------

class EmptyWorkloadColumn(ArbiterError, ValueError):
    pass


class ZeroBestValue(ArbiterError, ValueError):
    pass


class EmptyPool(ArbiterError, ValueError):
    pass


class MismatchedPointSets(ArbiterError, ValueError):
    pass


class UnknownWorkloadInSubset(ArbiterError, ValueError):
    pass


# io -----------------------------------------------------------------------

class MalformedLine(ArbiterError, ValueError):
    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class DuplicateEvent(ArbiterError, ValueError):
    pass


class NonMonotoneRuntime(ArbiterError, ValueError):
    pass


class IoFailure(ArbiterError, OSError):
    pass
