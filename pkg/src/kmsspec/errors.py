"""Exception hierarchy shared by all modules."""


class KmsError(Exception):
    """Base class for every error raised by :mod:`kmsspec`."""


class SingularParameterError(KmsError, ValueError):
    """The requested quantity does not exist for this rho (e.g. the inverse at rho = +-1)."""


class InvalidParameterError(KmsError, ValueError):
    pass


class PoleError(KmsError, ZeroDivisionError):
    """A rational expression was evaluated at (or numerically at) one of its poles."""


class KmsOverflowError(KmsError, OverflowError):
    pass


class BracketError(KmsError, RuntimeError):
    """A root bracket did not straddle a sign change. Indicates a bug, never a normal outcome."""


class ConsistencyError(KmsError, RuntimeError):
    pass


class AmbiguousZeroError(KmsError, RuntimeError):
    pass


class ConvergenceError(KmsError, RuntimeError):
    pass


class SizeLimitError(KmsError, ValueError):
    pass


class VerificationError(KmsError, RuntimeError):
    pass
