"""Exception hierarchy shared by the simulator, engine and drivers."""


class QSearchError(Exception):
    """Base class for all library errors."""


class ArgumentError(QSearchError, ValueError):
    """An argument is out of range or has the wrong shape."""


class ValidationError(QSearchError, ValueError):
    """A problem instance violates one of its preconditions."""


class RefusalError(QSearchError):
    """The request is well-formed but deliberately not supported.

    Raised for guarded sizes (dense oracle above its qubit limit) and for
    problem variants with no known algorithm.
    """


class DegenerateSpecError(ValidationError):
    """Source and target sets overlap."""


class NoCouplingError(QSearchError):
    """The target is unreachable through the given unitary."""


class UnsupportedCardinalityError(ValidationError):
    """A uniform source superposition needs a power-of-two number of states."""


class AsymmetricCouplingError(ValidationError):
    """Pairwise source/target couplings disagree, so the symmetric iterate does not apply."""

    def __init__(self, message, couplings=None):
        super().__init__(message)
        self.couplings = couplings


class DestructiveInterferenceError(NoCouplingError):
    """The summed coupling of all sources to the target cancels out."""
