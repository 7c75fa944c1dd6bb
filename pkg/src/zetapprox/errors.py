"""Exception hierarchy shared by all modules.

Every error carries a CLI exit code so the command-line layer can map
failures without inspecting messages.
"""


class ZetapproxError(Exception):
    exit_code = 5


class NumericError(ZetapproxError):
    """Base for evaluation problems (exit code 5)."""


class PoleAt1(NumericError):
    pass


class EnvelopeExceeded(NumericError):
    pass


class DomainError(NumericError):
    pass


class CountMismatch(NumericError):
    pass


class ContourTooClose(NumericError):
    pass


class NoConvergence(NumericError):
    pass


class InsufficientZeroTable(ZetapproxError):
    pass


class GridTooCoarse(ZetapproxError):
    pass


class EmptySet(ZetapproxError):
    pass


class TagMismatch(ZetapproxError):
    pass


class EmptyBulk(ZetapproxError):
    pass


class FitError(ZetapproxError):
    exit_code = 3


class CapExceeded(FitError):
    """The degree/length cap cannot accommodate the problem."""


class IllConditioned(NumericError):
    pass


class SingularGram(NumericError):
    pass
