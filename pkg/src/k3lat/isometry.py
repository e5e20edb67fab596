"""Isometries of integral lattices.

Convention: vectors are columns.  An isometry's ``matrix`` M sends the
coordinate column v to ``M @ v``; the isometry condition is
``M.T @ G @ M == G``.  Composition ``compose(g, h)`` is ``g ∘ h``, i.e. the
matrix product ``g.matrix @ h.matrix`` (apply ``h`` first).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import smith
from .errors import AmbientMismatch, ContractError, NotIsometry, NotSquareTwo
from .lattice import Lattice, LatticeVector, make_lattice, pairing, signature


@dataclass(frozen=True)
class Isometry:
    matrix: tuple[tuple[int, ...], ...]
    ambient: Lattice = field(compare=False)

    def __post_init__(self):
        n = self.ambient.rank
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise AmbientMismatch("matrix size does not match the ambient rank")
        m = self.matrix
        g = self.ambient.gram
        if smith.matmul(smith.transpose(m), smith.matmul(g, m)) != [list(r) for r in g]:
            raise NotIsometry("matrix does not preserve the Gram form")
        if smith.determinant(m) not in (1, -1):
            raise NotIsometry("isometry determinant is not ±1")

    def __call__(self, v: LatticeVector) -> LatticeVector:
        if v.ambient.gram != self.ambient.gram:
            raise AmbientMismatch("vector not in the ambient lattice")
        return LatticeVector(tuple(smith.matvec(self.matrix, v.coords)), self.ambient)

    @property
    def det(self) -> int:
        return smith.determinant(self.matrix)

    def is_identity(self) -> bool:
        return [list(r) for r in self.matrix] == smith.identity(self.ambient.rank)

    def inverse(self) -> Isometry:
        # M^-1 = G^-1 M^T G; computed exactly, must come back integral
        n = self.ambient.rank
        g = [[Fraction(x) for x in row] for row in self.ambient.gram]
        rhs = smith.matmul(smith.transpose(self.matrix), self.ambient.gram)
        sol = _solve(g, [[Fraction(x) for x in row] for row in rhs])
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                if sol[i][j].denominator != 1:
                    raise NotIsometry("inverse is not integral")
                row.append(int(sol[i][j]))
            out.append(tuple(row))
        return Isometry(tuple(out), self.ambient)


def _solve(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    """Solve ``a @ x = b`` for square invertible ``a`` by Gauss-Jordan."""
    n = len(a)
    m = [a[i][:] + b[i][:] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def make_isometry(lat: Lattice, matrix: Sequence[Sequence[int]]) -> Isometry:
    return Isometry(tuple(tuple(int(x) for x in row) for row in matrix), lat)


def identity(lat: Lattice) -> Isometry:
    return make_isometry(lat, smith.identity(lat.rank))


def reflection_fix(lat: Lattice, d: LatticeVector) -> Isometry:
    """The involution ``v -> <v, d> d - v`` for a class ``d`` of square 2.

    It fixes ``d`` and acts as ``-1`` on the orthogonal complement of ``d``.
    """
    sq = pairing(lat, d, d)
    if sq != 2:
        raise NotSquareTwo(f"reflection_fix needs d^2 = 2, got {sq}")
    row = smith.matvec(lat.gram, d.coords)  # functional v -> <v, d>
    n = lat.rank
    m = [[d[i] * row[j] - (i == j) for j in range(n)] for i in range(n)]
    return make_isometry(lat, m)


def reflection_neg(lat: Lattice, d: LatticeVector) -> Isometry:
    """The hyperplane reflection ``v -> v - 2<v,d>/<d,d> d`` for ``d^2 = -2``,
    i.e. ``v -> v + <v, d> d``.  Negates ``d`` and fixes ``d^⊥``."""
    sq = pairing(lat, d, d)
    if sq != -2:
        raise ContractError(f"reflection_neg needs d^2 = -2, got {sq}")
    row = smith.matvec(lat.gram, d.coords)
    n = lat.rank
    m = [[(i == j) + d[i] * row[j] for j in range(n)] for i in range(n)]
    return make_isometry(lat, m)


def compose(g: Isometry, h: Isometry) -> Isometry:
    if g.ambient.gram != h.ambient.gram:
        raise AmbientMismatch("cannot compose isometries of different lattices")
    return make_isometry(g.ambient, smith.matmul(g.matrix, h.matrix))


def is_involution(g: Isometry) -> bool:
    return smith.matmul(g.matrix, g.matrix) == smith.identity(g.ambient.rank)


def invariant_sublattice(g: Isometry) -> list[LatticeVector]:
    """Basis of the saturated fixed sublattice ``ker(M - I)``."""
    n = g.ambient.rank
    a = [[g.matrix[i][j] - (i == j) for j in range(n)] for i in range(n)]
    basis = []
    for v in smith.integer_kernel(a):
        lead = next(x for x in v if x)
        basis.append(g.ambient.vector(*(v if lead > 0 else [-x for x in v])))
    return basis


def orientation_positive(g: Isometry, frame: Sequence[LatticeVector]) -> int:
    """Sign of ``det(P ∘ g)`` restricted to the positive 3-space spanned by
    ``frame``, where P is the orthogonal projection onto that span.

    With ``B`` the frame matrix and ``Q = B^T G B`` its (positive definite)
    Gram matrix, the restricted map has matrix ``Q^-1 B^T G M B``; its
    determinant has the sign of ``det(B^T G M B)`` because ``det Q > 0``.
    """
    lat = g.ambient
    if len(frame) != 3:
        raise ContractError("orientation needs exactly three frame vectors")
    p, _ = signature(lat)
    if p < 3:
        raise ContractError("ambient lattice has fewer than three positive directions")
    q = [[pairing(lat, a, b) for b in frame] for a in frame]
    try:
        sub = make_lattice(q)
    except ContractError:
        raise ContractError("frame vectors are linearly dependent") from None
    if signature(sub) != (3, 0):
        raise ContractError("frame does not span a positive definite 3-space")
    images = [g(v) for v in frame]
    m = [[pairing(lat, a, b) for b in images] for a in frame]
    d = smith.determinant(m)
    if d == 0:
        return 0
    return 1 if d > 0 else -1
