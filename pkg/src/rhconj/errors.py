"""Exception hierarchy shared by every module of the package."""


class RhconjError(Exception):
    pass


class UnknownGenerator(RhconjError, ValueError):
    pass


class MalformedExponent(RhconjError, ValueError):
    pass


class ValidationError(RhconjError, ValueError):
    pass


class ParseError(RhconjError, ValueError):
    pass


class RadiusExceeded(RhconjError):
    """A computation needed group elements beyond the buildable ball."""


class BackendFailure(RhconjError):
    pass


class BcpTableExceeded(RhconjError):
    pass


class CensusOverflow(RhconjError):
    """The ball census needed by a bound is beyond the configured budget.

    ``lower_bound`` is a value the true bound is known to exceed.
    """

    def __init__(self, message, lower_bound=None):
        super().__init__(message)
        self.lower_bound = lower_bound
