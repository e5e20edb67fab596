"""Representation questions in small lattices.

For a rank 2 lattice with Gram matrix ``[[a, b], [b, c]]`` the form is
``q(x, y) = a x^2 + 2 b x y + c y^2``.  ``represents`` rewrites ``q = N`` as

    X^2 - D Y^2 = c' N,    (X, Y) = T (x, y)

for an integer matrix T with ``c' q = X^2 - D Y^2`` identically:

* ``a == c`` (this covers the lattices ``[[4, 4+2α], [4+2α, 4]]``): with
  ``U = x + y``, ``V = x - y`` one has ``2q = (a+b) U^2 + (a-b) V^2``; when
  ``a ± b`` are even this halves to ``q = P U^2 + R V^2`` and multiplying by R
  gives ``X = R V``, ``Y = U``, ``D = -P R``.
* ``a != 0``: completing the square, ``a q = (a x + b y)^2 - (b^2 - a c) y^2``.
* ``a == 0 != c``: the same with the roles of x and y swapped.

A solution (X, Y) of the reduced equation comes from a lattice vector iff
``adj(T) (X, Y) ≡ 0 (mod det T)``.  When D > 0 is not a square the solutions
are finitely many classes ``±(X0 + Y0 sqrt(D)) ε^k``; multiplication by the
unit ε is invertible modulo ``det T``, so each orbit is purely periodic
modulo ``det T`` and checking one period per class and sign decides whether
any member pulls back.  For D < 0 or D a square the reduced equation has
finitely many solutions and they are all checked.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Sequence

from . import pell
from .certificates import (
    Certificate,
    _orbit_residues,
    enumerate_reduced,
    form_residue_solvable,
    has_integer_root,
    has_nonzero_integer_root,
    pell_residue_solvable,
    pell_residue_solvable_rescan,
    pullback,
)
from .errors import ContractError, ContractViolation, Inconclusive
from .lattice import Lattice, LatticeVector, pairing

def _is_prime(n: int) -> bool:
    return n > 1 and all(n % p for p in range(2, isqrt(n) + 1))


FORM_MODULI = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16)
# primes before prime powers: an odd prime is the generic obstruction for a
# reduced equation, the powers of 2 mostly reflect the substitution itself
REDUCED_MODULI = tuple(sorted(pell.DEFAULT_MODULI, key=lambda m: (not _is_prime(m), m)))


def oracle_bound() -> int:
    return int(os.environ.get("K3LAT_ORACLE_BOUND", "1000"))


@dataclass(frozen=True)
class RepresentationDecision:
    witness: LatticeVector | None = None
    certificate: Certificate | None = None
    query: dict | None = None

    def __post_init__(self):
        if (self.witness is None) == (self.certificate is None):
            raise ContractViolation("a decision carries exactly one of witness / certificate")

    @property
    def kind(self) -> str:
        return "Witness" if self.witness is not None else "Empty"

    @property
    def empty(self) -> bool:
        return self.witness is None


def _gram(lat: Lattice):
    return [list(r) for r in lat.gram]


def _reduction(lat: Lattice) -> dict:
    (a, b), (_, c) = lat.gram
    if a == c and a != b:
        P2, R2 = a + b, a - b
        if P2 % 2 == 0:
            P, R = P2 // 2, R2 // 2
            return {"multiplier": R, "X": [R, -R], "Y": [1, 1], "D": -P * R}
        return {"multiplier": 2 * R2, "X": [R2, -R2], "Y": [1, 1], "D": -P2 * R2}
    if a != 0:
        return {"multiplier": a, "X": [a, b], "Y": [0, 1], "D": b * b - a * c}
    if c != 0:
        return {"multiplier": c, "X": [b, c], "Y": [1, 0], "D": b * b - a * c}
    # q = 2bxy: 2b q = (bx + by)^2 - (bx - by)^2 = X^2 - Y^2
    return {"multiplier": 2 * b, "X": [b, b], "Y": [b, -b], "D": 1}


def _witness(lat: Lattice, coords, N: int, constraints=()) -> RepresentationDecision:
    v = lat.vector(*coords)
    if v.square != N:
        raise ContractViolation(f"witness {coords} has square {v.square}, expected {N}")
    for d, b in constraints:
        if pairing(lat, v, d) != b:
            raise ContractViolation(f"witness {coords} violates <E, d> = {b}")
    return RepresentationDecision(witness=v)


def represents(lat: Lattice, N: int) -> RepresentationDecision:
    """Decide whether some (nonzero, when N = 0) vector of a rank 2 lattice
    has square N."""
    if lat.rank != 2:
        raise ContractError("represents needs a rank 2 lattice")
    if N == 0:
        return isotropic_exists(lat)
    for i in range(2):
        if lat.gram[i][i] == N:
            return _witness(lat, [int(i == j) for j in range(2)], N)
    gram = _gram(lat)
    red = _reduction(lat)
    D, M = red["D"], red["multiplier"] * N
    query = {"gram": gram, "N": N}

    # cheap certificates first: the reduced equation, then the form itself
    if not (D > 1 and pell.is_square(D)) and D != 0:
        for m in REDUCED_MODULI:
            if not pell_residue_solvable(D, M, m):
                eq = {"type": "reduced", "gram": gram, "N": N, **red}
                if pell_residue_solvable_rescan(D, M, m):
                    raise ContractViolation("residue rescan disagrees")
                cert = Certificate("ModularObstruction", {"modulus": m, "equation": eq})
                return RepresentationDecision(certificate=cert, query=query)
    for m in FORM_MODULI:
        if not form_residue_solvable(gram, N, m):
            cert = Certificate("ModularObstruction", {"modulus": m, "equation": {"type": "form", "gram": gram, "N": N}})
            return RepresentationDecision(certificate=cert, query=query)

    if D < 0 or pell.is_square(D):
        for X, Y in sorted(enumerate_reduced(D, M), key=lambda s: (abs(s[1]), abs(s[0]), s)):
            v = pullback(red, X, Y)
            if v is not None:
                return _witness(lat, v, N)
        cert = Certificate("FiniteExhaustion", {"gram": gram, "N": N, "reduction": red})
        return RepresentationDecision(certificate=cert, query=query)

    outcome = pell.genpell(D, M)
    if not outcome.solvable:
        inner = outcome.certificate
        if inner.kind == "ModularObstruction":
            eq = {"type": "reduced", "gram": gram, "N": N, **red}
            cert = Certificate("ModularObstruction", {"modulus": inner.payload["modulus"], "equation": eq})
        else:
            cert = Certificate(
                "CongruenceExhaustion",
                {"gram": gram, "N": N, "reduction": red, "classes": [], "pell": inner.to_json()},
            )
        return RepresentationDecision(certificate=cert, query=query)

    det = abs(red["X"][0] * red["Y"][1] - red["X"][1] * red["Y"][0])
    unit = pell.fundamental_unit(D)
    for rep in outcome.solutions:
        for sign in (1, -1):
            start = (sign * rep[0], sign * rep[1])
            for k, (X, Y) in enumerate(_orbit_residues(D, start, unit, det)):
                if pullback(red, X, Y) is not None:
                    exact = pell.orbit(D, start, k)
                    v = pullback(red, *exact)
                    return _witness(lat, v, N)
    cert = Certificate(
        "CongruenceExhaustion",
        {"gram": gram, "N": N, "reduction": red, "classes": [list(s) for s in outcome.solutions], "unit": list(unit)},
    )
    return RepresentationDecision(certificate=cert, query=query)


def isotropic_exists(lat: Lattice) -> RepresentationDecision:
    """Nonzero v with ``q(v) = 0`` exists iff ``-det`` is a perfect square."""
    if lat.rank != 2:
        raise ContractError("isotropic_exists needs a rank 2 lattice")
    (a, b), (_, c) = lat.gram
    disc = -lat.det
    if not pell.is_square(disc):
        cert = Certificate("NonSquareDiscriminant", {"gram": _gram(lat)})
        return RepresentationDecision(certificate=cert, query={"gram": _gram(lat), "N": 0})
    s = isqrt(disc)
    if a == 0:
        v = (1, 0)
    else:
        # a x^2 + 2 b x y + c y^2 = 0  <=>  x / y = (-b ± s) / a
        x, y = -b + s, a
        g = gcd(x, y)
        v = (x // g, y // g)
    return _witness(lat, v, 0)


def constrained_class(lat: Lattice, d: LatticeVector, a: int, b: int) -> RepresentationDecision:
    """Decide whether some nonzero E has ``q(E) = a`` and ``<E, d> = b``.

    In rank 1 and 2 the affine solution set of ``<E, d> = b`` is a point or a
    line ``base + s * direction``; substituting into q leaves a quadratic in
    one integer variable.  Higher ranks fall back to the pairing-parity
    obstruction and then to the bounded oracle; with neither a certificate
    nor a witness :class:`Inconclusive` is raised.
    """
    if d.is_zero():
        raise ContractError("constraint vector must be nonzero")
    gram = _gram(lat)
    func = [sum(gram[i][j] * d[j] for j in range(lat.rank)) for i in range(lat.rank)]
    g = 0
    for f in func:
        g = gcd(g, f)
    query = {"gram": gram, "d": list(d.coords), "a": a, "b": b}
    if b % g:
        # smallest divisor of g that does not divide b
        m = next(p for p in range(2, g + 1) if g % p == 0 and b % p)
        cert = Certificate("ModularObstruction", {"modulus": m, "equation": {"type": "linear", "gram": gram, "d": list(d.coords), "b": b}})
        return RepresentationDecision(certificate=cert, query=query)

    if lat.rank == 1:
        base = [b // func[0]]
        direction = [0]
    elif lat.rank == 2:
        if a == 0 and isotropic_exists(lat).empty:
            cert = Certificate("NonSquareDiscriminant", {"gram": gram})
            return RepresentationDecision(certificate=cert, query=query)
        f1, f2 = func
        g0, s, t = _xgcd(f1, f2)
        k = b // g0
        base = [s * k, t * k]
        direction = [f2 // g0, -f1 // g0]
    else:
        hit = brute_oracle(lat, a, [(d, b)], _high_rank_bound())
        if hit is not None:
            return RepresentationDecision(witness=hit)
        raise Inconclusive(f"no witness for E^2 = {a}, E.d = {b} in rank {lat.rank}; no certificate available")

    A = lat.form(direction, direction)
    B = 2 * lat.form(base, direction)
    C = lat.form(base, base) - a
    if a == 0 and b == 0:
        # E must be nonzero; the base point is then 0 and s = 0 is excluded
        if any(direction) and has_nonzero_integer_root(A, B):
            s_val = 1 if A == 0 else -B // A
            return _witness(lat, [s_val * y for y in direction], a, [(d, b)])
        cert = Certificate(
            "ExactContradiction",
            {**query, "base": base, "direction": direction, "poly": [A, B, C], "nonzero": True},
        )
        return RepresentationDecision(certificate=cert, query=query)
    if not has_integer_root(A, B, C):
        cert = Certificate(
            "ExactContradiction",
            {**query, "base": base, "direction": direction, "poly": [A, B, C]},
        )
        return RepresentationDecision(certificate=cert, query=query)
    s_val = _integer_root(A, B, C)
    coords = [x + s_val * y for x, y in zip(base, direction)]
    return _witness(lat, coords, a, [(d, b)])


def _high_rank_bound() -> int:
    return min(oracle_bound(), 20)


def _integer_root(A: int, B: int, C: int) -> int:
    if A == 0:
        return 0 if B == 0 else -C // B
    r = isqrt(B * B - 4 * A * C)
    for e in (r, -r):
        if (-B + e) % (2 * A) == 0:
            return (-B + e) // (2 * A)
    raise ContractViolation("no integer root")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``g = gcd(a, b) > 0`` and ``s a + t b = g``."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _scan_order(bound: int):
    yield 0
    for k in range(1, bound + 1):
        yield k
        yield -k


def brute_oracle(
    lat: Lattice,
    N: int,
    constraints: Sequence[tuple[LatticeVector, int]] | None = None,
    bound: int | None = None,
) -> LatticeVector | None:
    """Exhaustive search of the box ``|x_i| <= bound`` for ``q(v) = N``.

    Coordinates are scanned in the order 0, 1, -1, 2, -2, ...; for each
    prefix the last coordinate is solved from the quadratic it satisfies.
    Returns the first witness or None.  None is not a certificate.
    """
    if bound is None:
        bound = oracle_bound()
    constraints = list(constraints or [])
    n = lat.rank
    g = lat.gram
    cfun = [[sum(g[i][j] * d[j] for j in range(n)) for i in range(n)] for d, _ in constraints]
    rhs = [b for _, b in constraints]
    if n == 2:
        return _brute_rank2(lat, N, cfun, rhs, bound)
    last = n - 1
    glast = g[last][last]
    for prefix in itertools.product(list(_scan_order(bound)), repeat=n - 1):
        # q(prefix, y) = glast y^2 + 2 lin y + q0
        lin = sum(prefix[i] * g[i][last] for i in range(n - 1))
        q0 = sum(prefix[i] * g[i][j] * prefix[j] for i in range(n - 1) for j in range(n - 1))
        for y in _last_coordinate(glast, 2 * lin, q0 - N, bound):
            v = (*prefix, y)
            if N == 0 and not any(v):
                continue
            if all(sum(f[i] * v[i] for i in range(n)) == r for f, r in zip(cfun, rhs)):
                return lat.vector(*v)
    return None


def _brute_rank2(lat: Lattice, N: int, cfun, rhs, bound: int) -> LatticeVector | None:
    (a, b), (_, c) = lat.gram
    for x in _scan_order(bound):
        for y in _last_coordinate(c, 2 * b * x, a * x * x - N, bound):
            if N == 0 and x == 0 and y == 0:
                continue
            if all(f[0] * x + f[1] * y == r for f, r in zip(cfun, rhs)):
                return lat.vector(x, y)
    return None


def _last_coordinate(A: int, B: int, C: int, bound: int):
    """Integer roots of ``A y^2 + B y + C`` inside ``[-bound, bound]`` in scan order."""
    if A == 0:
        if B == 0:
            if C == 0:
                yield from _scan_order(bound)
            return
        if C % B == 0 and abs(C // B) <= bound:
            yield -C // B
        return
    disc = B * B - 4 * A * C
    if disc < 0:
        return
    r = isqrt(disc)
    if r * r != disc:
        return
    roots = {(-B + e) // (2 * A) for e in (r, -r) if (-B + e) % (2 * A) == 0}
    order = sorted(roots, key=lambda y: (abs(y), y < 0))
    yield from (y for y in order if abs(y) <= bound)


def even_pairing_lattice(lat: Lattice) -> bool:
    return all(x % 2 == 0 for row in lat.gram for x in row)
