"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid (lambda, nb) or other argument outside its domain."""


class StrictnessError(ParameterError):
    """lambda * nb <= 1 while the strict regime was requested."""


class LevelTooLargeError(ParameterError):
    """Requested level or refinement would exceed the memory/eigensolve budget."""


class BoundaryVertexError(ParameterError):
    """Operation is undefined on a V_0 vertex."""


class ForbiddenValueError(ArithmeticError):
    """A local extension system is singular for the requested eigenvalue."""
