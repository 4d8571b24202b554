"""Exception hierarchy for the chronos library."""


class ChronosError(Exception):
    """Base class for every error raised by this library."""


class ParseError(ChronosError):
    """A descriptor (time scale, system, control, ...) is malformed."""


class PointNotInScale(ChronosError):
    """A time argument is not a member of the time scale."""


class EmptyWindow(ChronosError):
    """A window [t0, t1) was requested with t0 >= t1."""


class NotSquare(ChronosError):
    """A square matrix was required."""


class NegativeHorizon(ChronosError):
    """A nonnegative integration horizon was required."""


class BackwardWindow(ChronosError):
    """Backward evaluation (t < t0) of the forward exponential was requested."""


class DomainMismatch(ChronosError):
    """Control signal, state, or window dimensions/domains are inconsistent."""


class NonFiniteState(ChronosError):
    """A simulation produced (or was handed) a non-finite state."""


class NotPositiveSystem(ChronosError):
    """An operation defined only for positive systems got a non-positive one."""


class WindowTooSmall(ChronosError):
    """The analysis window does not contain enough time-scale elements."""


class SpecOutsideWindow(ChronosError):
    """A Gram specification references times outside its window."""


class EmptyM(ChronosError):
    """A nonempty column selection was required."""


class NotMonomialGram(ChronosError):
    """Control synthesis requires a monomial Gram matrix."""


class NegativeTarget(ChronosError):
    """Positive-reachability targets must be entrywise nonnegative."""


class WrongScaleTag(ChronosError):
    """The operation applies only to scales with a specific structure tag."""


class DenseWindow(ChronosError):
    """A purely discrete window was required but a right-dense point was found."""


class CertificateCheckFailed(ChronosError):
    """Internal inconsistency between the candidate scan and the verified certificate."""
