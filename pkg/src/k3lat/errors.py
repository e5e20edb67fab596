"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`K3LatError`.
The CLI maps :class:`ContractError` subclasses to exit status 3.
"""


class K3LatError(Exception):
    pass


class ContractError(K3LatError, ValueError):
    """A precondition or internal contract was violated."""


class DegenerateLattice(ContractError):
    pass


class AmbientMismatch(ContractError):
    pass


class NotSquareTwo(ContractError):
    pass


class SquareParameter(ContractError):
    """The Pell parameter D is a perfect square."""


class ZeroVector(ContractError):
    pass


class NotIsometry(ContractError):
    pass


class ContractViolation(ContractError):
    """An asserted identity failed to hold (internal consistency check)."""


class Inconclusive(K3LatError):
    """A search ended without a witness and without a closing argument."""
