"""Exception types raised by the library."""


class BisamplingError(ValueError):
    """Base class for all library errors."""


class OutOfBoundsError(BisamplingError):
    """A value lies outside the declared bounding interval."""


class NonFiniteError(BisamplingError):
    """An observation or support point is NaN (or otherwise unusable)."""


class InvalidProbabilityError(BisamplingError):
    """A probability argument lies outside its admissible range."""


class BadIntervalError(BisamplingError):
    """Interval endpoints are not properly ordered."""


class IndeterminateSumError(BisamplingError):
    """A weighted sum mixes positive mass at both -inf and +inf."""


class AtObservationError(BisamplingError):
    """A query point coincides with an observation where that is disallowed."""


class TooFewSamplesError(BisamplingError):
    """Not enough observations for the requested method."""


class EmptySamplesError(BisamplingError):
    """An operation received an empty sample collection."""
