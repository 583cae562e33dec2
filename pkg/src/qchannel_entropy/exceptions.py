"""Exception hierarchy.

Every error raised on bad input derives from :class:`QChannelError`, which is
itself a :class:`ValueError` so callers that only know about the standard
library can still catch it.
"""


class QChannelError(ValueError):
    pass


# linear algebra kernel

class NotHermitian(QChannelError):
    pass


class NoConvergence(QChannelError, ArithmeticError):
    pass


class NegativeEigenvalue(QChannelError):
    pass


class DimensionMismatch(QChannelError):
    pass


class SingularForNegativeQ(QChannelError):
    pass


class LengthMismatch(QChannelError):
    pass


class NotDoublyStochastic(QChannelError):
    pass


class NoPerfectMatching(QChannelError):
    pass


# entropies

class NonPositiveArgument(QChannelError):
    pass


class OutOfRange(QChannelError):
    pass


class InvalidDistribution(QChannelError):
    pass


class InvalidState(QChannelError):
    pass


# channels

class EmptyKrausList(QChannelError):
    pass


class NotTracePreserving(QChannelError):
    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class NotPositive(QChannelError):
    pass


class OutOfBall(QChannelError):
    pass


# bounds

class ParameterOutOfDomain(QChannelError):
    pass


# cli / io

class ParseError(QChannelError):
    pass


class ValidationError(QChannelError):
    pass


class UnknownSuite(QChannelError):
    pass
