"""Exception hierarchy shared by all modules."""


class CondWorkError(Exception):
    """Base class for every error raised by this package."""


class NonHermitianInput(CondWorkError, ValueError):
    pass


class BadSubsystemIndex(CondWorkError, IndexError):
    pass


class InvalidState(CondWorkError, ValueError):
    pass


class InvalidModel(CondWorkError, ValueError):
    pass


class UnknownOutcome(CondWorkError, KeyError):
    pass


class NotProjective(CondWorkError, ValueError):
    pass


class SpecMismatch(CondWorkError, ValueError):
    pass


class RankBoundViolation(SpecMismatch):
    """Apparatus too small for r * |X| orthogonal pointer states."""


class NotFullRank(CondWorkError, ValueError):
    pass


class DimensionMismatch(CondWorkError, ValueError):
    pass


class ZeroProbability(CondWorkError, ValueError):
    pass


class BadEnsemble(CondWorkError, ValueError):
    pass


class CommutatorViolation(CondWorkError, ValueError):
    """The pointer observable does not commute with the final apparatus Hamiltonian."""


class NonPositiveTemperature(CondWorkError, ValueError):
    pass


class ModelFileError(CondWorkError, ValueError):
    """A model or state file could not be parsed."""
