"""Exception hierarchy shared by the engine, kernels, catalog and oracle."""


class NuSpectraError(Exception):
    """Base class for every error raised by the package."""


# reduction engine
class NoRealK(NuSpectraError):
    pass


class DegenerateK(NuSpectraError):
    pass


class NotPerfectSquare(NuSpectraError):
    pass


class ComplexBranch(NotPerfectSquare):
    """p(x) is a perfect square of a linear polynomial only over the complex numbers."""


class NoPhysicalBranch(NuSpectraError):
    pass


class AmbiguousBranch(NuSpectraError):
    pass


class IntegrationFailure(NuSpectraError):
    pass


class UnsupportedForm(NuSpectraError):
    pass


# special-function kernels
class PoleAtC(NuSpectraError):
    pass


class DivergentIntegral(NuSpectraError):
    pass


class DomainError(NuSpectraError, ValueError):
    pass


# catalog
class InvalidParams(NuSpectraError, ValueError):
    pass


class NoBoundStates(NuSpectraError):
    pass


class LevelNotBound(NuSpectraError):
    pass


class SupercriticalCharge(NuSpectraError):
    pass


class ExtrapolationUnstable(NuSpectraError):
    pass


class NoSolution(NuSpectraError):
    pass


# numerical oracle
class NotConverged(NuSpectraError):
    pass


class ToleranceNotMet(NuSpectraError):
    pass
