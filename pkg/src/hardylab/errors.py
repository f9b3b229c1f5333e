"""Exception hierarchy shared by all hardylab modules."""


class HardyLabError(Exception):
    """Base class for every error raised by hardylab."""


class InputError(HardyLabError, ValueError):
    """A numeric input is not usable (e.g. NaN or infinite term)."""


class ConfigurationError(HardyLabError):
    """A summation mode or environment setting cannot be honoured."""


class WeightIndexError(HardyLabError, IndexError):
    """A weight or auxiliary sequence was evaluated at an index < 1."""


class ValidationError(HardyLabError, ValueError):
    """A sequence or parameter violates a structural precondition."""


class ResourceError(HardyLabError):
    """A requested object would exceed the configured support cap."""


class FeasibilityError(ResourceError):
    """No witness can be materialised for the requested perturbation.

    ``min_level`` is the smallest cutoff level ``N`` allowed by the
    ``4/log N`` bound and ``log_min_level`` its natural logarithm, which
    stays meaningful when ``min_level`` is astronomically large.
    """

    def __init__(self, msg, min_level=None, log_min_level=None):
        super().__init__(msg)
        self.min_level = min_level
        self.log_min_level = log_min_level


class IdentityViolation(HardyLabError):
    """The remainder identity failed beyond tolerance (a numerics bug)."""

    def __init__(self, msg, report):
        super().__init__(msg)
        self.report = report


class ConsistencyError(HardyLabError):
    """Two independent evaluation routes disagree beyond tolerance."""


class ChainViolation(HardyLabError, AssertionError):
    """A step in a monotone bound chain (or a termwise lemma) failed."""


class ParseError(ValidationError):
    """A sequence file line could not be parsed; ``lineno`` is 1-based."""

    def __init__(self, msg, lineno=None):
        super().__init__(msg if lineno is None else f"line {lineno}: {msg}")
        self.lineno = lineno
