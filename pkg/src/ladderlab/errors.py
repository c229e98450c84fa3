"""Exception hierarchy shared by every ladderlab module."""


class LadderLabError(Exception):
    """Base class for all ladderlab failures."""


class DomainError(LadderLabError, ValueError):
    """Argument outside the supported range of a function or table."""


class GuardViolation(LadderLabError, ValueError):
    """Upper shift g falls outside the admissible class (g <= fraction * T / ln T)."""


class BracketError(LadderLabError):
    """A monotone root solve could not bracket its target."""


class ConvergenceError(LadderLabError):
    """An iterative numerical method did not meet its tolerance."""


class CacheError(LadderLabError):
    """A ladder cache file is malformed, of the wrong version, or inconsistent."""


class ZeroTableError(LadderLabError, ValueError):
    """Malformed reference-zeros file."""
