"""Exception hierarchy for wittborel."""


class WittError(Exception):
    """Base class for all library errors."""


class NonPrime(WittError, ValueError):
    pass


class CharacteristicTooSmall(WittError, ValueError):
    """p in {2, 3}: W_1 degenerates (solvable for p=2, sl_2 for p=3)."""


class DivisionByZero(WittError, ZeroDivisionError):
    pass


class NonNilpotentSubstituend(WittError, ValueError):
    pass


class NotInvertible(WittError, ValueError):
    pass


class NotADerivation(WittError, RuntimeError):
    """A computed operator failed to be a derivation. Always an internal bug."""


class SingularLinearPart(WittError, ValueError):
    pass


class ZeroLeadingCoefficient(WittError, ValueError):
    pass


class NotNormalizable(WittError, ValueError):
    pass


class BudgetExceeded(WittError, ValueError):
    pass


class NotClosed(WittError, ValueError):
    pass


class NotSolvable(WittError, ValueError):
    pass


class NotBorel(WittError, ValueError):
    pass


class ClassificationFailed(WittError, RuntimeError):
    """No conjugating witness found; reported, never patched over."""


class CertificationFailed(WittError, RuntimeError):
    """A constructed witness failed its post-hoc check. Always an internal bug."""


class UsageError(WittError, ValueError):
    """Bad command-line input; exit status 2."""
