"""Exception hierarchy shared by every module."""


class KappaFitError(Exception):
    """Base class for all errors raised by kappafit."""


class DomainError(KappaFitError, ValueError):
    """An argument lies outside the domain of a function or distribution."""


class InputError(KappaFitError, ValueError):
    """Malformed or invalid input data (files, price series, CLI arguments)."""


class DegenerateInputError(InputError):
    """Input is well formed but cannot support the requested computation."""


class NumericalError(KappaFitError, ArithmeticError):
    """A numerical routine (quadrature, root finding) failed to reach tolerance."""


class ConvergenceError(KappaFitError, RuntimeError):
    """Every optimizer start failed to produce a finite optimum."""
