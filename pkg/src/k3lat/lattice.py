"""Integral lattices given by a symmetric integer Gram matrix.

Everything here is exact: Python integers and :class:`fractions.Fraction`.
Vectors are coordinate tuples in the lattice's fixed basis.

The E8 Gram matrix uses the simple roots in Bourbaki order (node 2 attached
to node 4, chain 1-3-4-5-6-7-8)::

    [ 2  0 -1  0  0  0  0  0]
    [ 0  2  0 -1  0  0  0  0]
    [-1  0  2 -1  0  0  0  0]
    [ 0 -1 -1  2 -1  0  0  0]
    [ 0  0  0 -1  2 -1  0  0]
    [ 0  0  0  0 -1  2 -1  0]
    [ 0  0  0  0  0 -1  2 -1]
    [ 0  0  0  0  0  0 -1  2]

``E8(-1)`` is its negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Iterable, Sequence

from . import smith
from .errors import AmbientMismatch, ContractError, DegenerateLattice, ZeroVector

E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


@dataclass(frozen=True)
class Lattice:
    gram: tuple[tuple[int, ...], ...]
    label: str = ""

    def __post_init__(self):
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise DegenerateLattice("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise DegenerateLattice(f"Gram matrix not symmetric at ({i}, {j})")
        if self.det == 0:
            raise DegenerateLattice(f"degenerate Gram matrix {self.label or self.gram}")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return smith.determinant(self.gram)

    @cached_property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def vector(self, *coords: int) -> LatticeVector:
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return LatticeVector(tuple(int(c) for c in coords), self)

    def basis(self) -> list[LatticeVector]:
        return [self.vector(*row) for row in smith.identity(self.rank)]

    def zero(self) -> LatticeVector:
        return self.vector(*([0] * self.rank))

    def form(self, v: Sequence[int], w: Sequence[int]) -> int:
        """Bilinear form on raw coordinate sequences."""
        g = self.gram
        return sum(v[i] * sum(g[i][j] * w[j] for j in range(len(w)) if w[j]) for i in range(len(v)) if v[i])

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return f"<Lattice{name} rank={self.rank} det={self.det}>"


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple[int, ...]
    ambient: Lattice = field(repr=False, compare=False)

    def __post_init__(self):
        if len(self.coords) != self.ambient.rank:
            raise AmbientMismatch(
                f"vector of length {len(self.coords)} in a rank {self.ambient.rank} lattice"
            )

    def _check(self, other: LatticeVector):
        if other.ambient.gram != self.ambient.gram:
            raise AmbientMismatch("vectors live in different lattices")

    def __add__(self, other: LatticeVector) -> LatticeVector:
        self._check(other)
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.ambient)

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        self._check(other)
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.ambient)

    def __neg__(self) -> LatticeVector:
        return LatticeVector(tuple(-a for a in self.coords), self.ambient)

    def __mul__(self, k: int) -> LatticeVector:
        return LatticeVector(tuple(k * a for a in self.coords), self.ambient)

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    @property
    def square(self) -> int:
        return self.ambient.form(self.coords, self.coords)

    def dot(self, other: LatticeVector) -> int:
        return pairing(self.ambient, self, other)

    def is_zero(self) -> bool:
        return not any(self.coords)


def make_lattice(gram: Iterable[Iterable[int]], label: str = "") -> Lattice:
    """Build a lattice from a symmetric, nondegenerate integer matrix."""
    return Lattice(tuple(tuple(int(x) for x in row) for row in gram), label)


def diagonal(*entries: int, label: str = "") -> Lattice:
    n = len(entries)
    return make_lattice([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], label)


def e8_gram() -> list[list[int]]:
    g = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for a, b in E8_EDGES:
        g[a - 1][b - 1] = g[b - 1][a - 1] = -1
    return g


def direct_sum(*lattices: Lattice, label: str = "") -> Lattice:
    n = sum(lat.rank for lat in lattices)
    g = [[0] * n for _ in range(n)]
    off = 0
    for lat in lattices:
        for i, row in enumerate(lat.gram):
            g[off + i][off : off + lat.rank] = row
        off += lat.rank
    if not label:
        label = " ⊕ ".join(lat.label for lat in lattices if lat.label and lat.rank)
    return make_lattice(g, label)


def standard(name: str, t: int | None = None) -> Lattice:
    """Named lattices: ``U``, ``E8_MINUS``, ``TWO_T`` (needs ``t``),
    ``MINUS_TWO``, ``K3`` and ``K3_SQ``."""
    name = name.upper()
    if name == "U":
        return make_lattice([[0, 1], [1, 0]], "U")
    if name == "E8_MINUS":
        return make_lattice([[-x for x in row] for row in e8_gram()], "E8(-1)")
    if name == "TWO_T":
        if t is None or t < 1:
            raise ContractError("TWO_T needs t >= 1")
        return make_lattice([[2 * t]], f"<{2 * t}>")
    if name == "MINUS_TWO":
        return make_lattice([[-2]], "<-2>")
    if name == "K3":
        u, e = standard("U"), standard("E8_MINUS")
        return direct_sum(u, u, u, e, e, label="U^3 ⊕ E8(-1)^2")
    if name == "K3_SQ":
        return direct_sum(standard("K3"), standard("MINUS_TWO"), label="U^3 ⊕ E8(-1)^2 ⊕ <-2>")
    raise ContractError(f"unknown standard lattice {name!r}")


def pairing(lat: Lattice, v: LatticeVector, w: LatticeVector) -> int:
    for x in (v, w):
        if x.ambient.gram != lat.gram:
            raise AmbientMismatch("vector does not belong to this lattice")
    return lat.form(v.coords, w.coords)


def signature(lat: Lattice) -> tuple[int, int]:
    """Sylvester signature by exact congruent diagonalization over Q.

    A zero pivot with a nonzero off-diagonal partner ``a[k][j]`` is handled
    by replacing ``e_k`` with ``e_k + e_j`` (or ``e_k - e_j``), which makes the
    pivot ``2*a[k][j] + a[j][j]`` (resp. ``-2*a[k][j] + a[j][j]``) nonzero.
    """
    a = [[Fraction(x) for x in row] for row in lat.gram]
    n = len(a)
    pos = neg = 0
    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[k], a[j] = a[j], a[k]
                for row in a:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    raise DegenerateLattice("zero row during diagonalization")
                # all remaining diagonal entries vanish, so e_k + e_j has square 2*a[k][j]
                for i in range(n):
                    a[k][i] += a[j][i]
                for i in range(n):
                    a[i][k] += a[i][j]
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] / p
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
        for i in range(k + 1, n):
            a[k][i] = Fraction(0)
    return pos, neg


@dataclass(frozen=True)
class DiscriminantGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        f = self.invariant_factors
        if any(x <= 1 for x in f) or any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ContractError(f"bad invariant factors {f}")

    @property
    def length(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        out = 1
        for x in self.invariant_factors:
            out *= x
        return out


def discriminant_group(lat: Lattice) -> DiscriminantGroup:
    factors = tuple(d for d in smith.invariant_factors(lat.gram) if d != 1)
    return DiscriminantGroup(factors)


def is_primitive_vector(lat: Lattice, v: LatticeVector) -> bool:
    if v.ambient.gram != lat.gram:
        raise AmbientMismatch("vector does not belong to this lattice")
    g = smith.vector_gcd(v.coords)
    if g == 0:
        raise ZeroVector("primitivity of the zero vector is undefined")
    return g == 1


def is_hyperbolic(lat: Lattice) -> bool:
    return lat.rank >= 1 and signature(lat) == (1, lat.rank - 1)


@dataclass(frozen=True)
class ObstructionVerdict:
    consistent: bool
    reason: str
    ns_length: int
    transcendental_rank: int

    @property
    def verdict(self) -> str:
        return "consistent" if self.consistent else "impossible"


def transcendental_obstruction(lat: Lattice) -> ObstructionVerdict:
    """Length test for ``lat`` as the Neron-Severi lattice of a K3 surface.

    The transcendental lattice T has rank ``22 - rank`` and a discriminant
    group isomorphic to that of ``lat``, so its length cannot exceed rank(T).
    """
    if not is_hyperbolic(lat):
        raise ContractError(f"{lat!r} is not hyperbolic")
    if not lat.is_even:
        raise ContractError(f"{lat!r} is not even")
    if lat.rank > 21:
        raise ContractError("rank must be at most 21")
    length = discriminant_group(lat).length
    t_rank = 22 - lat.rank
    if length > t_rank:
        reason = f"discriminant length {length} exceeds transcendental rank {t_rank}"
        return ObstructionVerdict(False, reason, length, t_rank)
    return ObstructionVerdict(True, f"length {length} <= transcendental rank {t_rank}", length, t_rank)


def morrison_embeddable(lat: Lattice) -> bool:
    """Sufficient criterion for a primitive embedding into the K3 lattice:
    even, hyperbolic, rank at most 10."""
    return lat.is_even and lat.rank <= 10 and is_hyperbolic(lat)


# -- JSON fixtures -----------------------------------------------------------


def gram_to_json(lat: Lattice) -> list[list[str]]:
    return [[str(x) for x in row] for row in lat.gram]


def gram_from_json(data) -> list[list[int]]:
    return [[int(x) for x in row] for row in data]


def load_fixture(name: str) -> Lattice:
    """Load one of the bundled fixtures (``U``, ``E8_MINUS``, ``K3``, ``K3_SQ``)."""
    text = resources.files("k3lat.fixtures").joinpath(f"{name}.json").read_text()
    doc = json.loads(text)
    return make_lattice(gram_from_json(doc["gram"]), doc.get("label", name))


def write_fixtures(directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in ("U", "E8_MINUS", "K3", "K3_SQ"):
        lat = standard(name)
        doc = {"label": lat.label, "gram": gram_to_json(lat)}
        (directory / f"{name}.json").write_text(json.dumps(doc) + "\n")


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g else tuple(v)
