"""Exception types shared across the package."""


class NonlocError(Exception):
    """Base class for every failure mode raised by this package."""


class DimensionMismatch(NonlocError):
    """Party counts of two objects disagree."""


class SignalingDistribution(NonlocError):
    """A joint distribution violates the non-signaling constraints."""


class OptimizerDidNotConverge(NonlocError):
    """An iterative optimization stopped without meeting its stationarity target."""


class DegenerateSettings(NonlocError):
    """Measurement rays are too close to linearly dependent to build the test subspace."""


class NonUniqueSolution(NonlocError):
    """The constraint system admits more than one orthogonal direction."""


class VanishingSuccess(NonlocError):
    """The constructed state is orthogonal to the success direction."""


class IdenticallyZeroPolynomial(NonlocError):
    """The degeneracy polynomial vanishes identically (product state)."""


class IdenticallyZeroF(NonlocError):
    """The success-probability polynomial vanishes identically at the chosen phase."""


class DegenerateX(NonlocError):
    """The requested setting parameter sits on (or too near) an excluded value."""


class SingularDenominator(NonlocError):
    """A closed-form solver formula hit a vanishing denominator."""


class NotEntangled(NonlocError):
    """The state fails the genuine-entanglement requirement."""


class NumericalFailure(NonlocError):
    """A computed result failed its own validation check."""
