"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the physical or mathematical domain of an operation."""


class PreconditionError(ValueError):
    """A documented precondition of an operation is violated."""


class ConvergenceError(RuntimeError):
    """An iterative solver or adaptive quadrature hit its iteration cap."""


class ResourceLimitError(ValueError):
    """Requested problem size exceeds a resource guard."""


class InvariantError(ValueError):
    """A density matrix, POVM, distribution or unitary fails its invariants."""


class DimensionError(ValueError):
    """Operands have incompatible Hilbert-space dimensions."""
