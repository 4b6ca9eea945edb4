"""Exception hierarchy shared by every solver module."""


class DbMatchError(Exception):
    """Base class for all library errors."""


class InstanceError(DbMatchError, ValueError):
    """Malformed instance data."""


class DuplicateEdge(InstanceError):
    pass


class NegativeWeight(InstanceError):
    pass


class IndexOutOfRange(InstanceError):
    pass


class NonPositiveBound(InstanceError):
    pass


class MalformedNetwork(DbMatchError, ValueError):
    pass


class MalformedHypergraph(DbMatchError, ValueError):
    pass


class InvalidParams(DbMatchError, ValueError):
    pass


class InfeasibleInput(DbMatchError, ValueError):
    pass


class PreconditionError(DbMatchError):
    """A solver was called outside the hypotheses it is proven for."""


class PreconditionViolated(PreconditionError):
    pass


class DivisibilityViolated(PreconditionError):
    pass


class DNotSupported(PreconditionError):
    pass


class InstanceTooLarge(PreconditionError):
    pass


class ParameterMismatch(PreconditionError, ValueError):
    pass


class ParameterOutOfRange(PreconditionError, ValueError):
    pass
