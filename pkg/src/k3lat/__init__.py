"""Exact lattice, Pell-equation and binary-form computations for
involutions of Hilbert squares of K3 surfaces."""

from .certificates import Certificate, check_certificate
from .errors import ContractError, Inconclusive, K3LatError
from .isometry import Isometry, compose, invariant_sublattice, is_involution, reflection_fix, reflection_neg
from .lattice import (
    DiscriminantGroup,
    Lattice,
    LatticeVector,
    direct_sum,
    discriminant_group,
    make_lattice,
    pairing,
    signature,
    standard,
)
from .pell import cf_sqrt, genpell, pell_min

__all__ = [
    "Certificate",
    "ContractError",
    "DiscriminantGroup",
    "Inconclusive",
    "Isometry",
    "K3LatError",
    "Lattice",
    "LatticeVector",
    "cf_sqrt",
    "check_certificate",
    "compose",
    "direct_sum",
    "discriminant_group",
    "genpell",
    "invariant_sublattice",
    "is_involution",
    "make_lattice",
    "pairing",
    "pell_min",
    "reflection_fix",
    "reflection_neg",
    "signature",
    "standard",
]
