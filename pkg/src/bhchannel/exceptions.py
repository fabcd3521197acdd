"""Exception types raised across the package."""


class ParameterError(ValueError):
    """A physical or numerical parameter is outside its allowed range."""


class DimensionError(ValueError):
    """Matrix dimensions disagree with a declared subsystem shape."""


class ContractViolation(ValueError):
    """An input does not satisfy an operation's precondition (e.g. not Hermitian)."""


class StructureViolation(RuntimeError):
    """A channel failed to decompose into the expected orthogonal blocks."""
