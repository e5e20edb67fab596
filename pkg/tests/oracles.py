"""Independent brute-force oracles and values frozen from them.

Nothing here imports the package under test.  The frozen tables were
produced by running these functions once; the tests re-run the cheap ones
and compare the library against the frozen values.
"""

from __future__ import annotations

import itertools
from math import isqrt

import numpy as np
import sympy
from sympy.matrices.normalforms import smith_normal_form


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def min_pell(D: int, N: int, ymax: int, ymin: int = 0):
    """Smallest y in ymin..ymax with N + D y^2 a square, plain loop."""
    for y in range(ymin, ymax + 1):
        r = N + D * y * y
        if is_square(r):
            return isqrt(r), y
    return None


def admissible_by_search(t: int, ymax: int = 2000) -> bool:
    """t nonsquare, x^2 - t y^2 = -1 found by search, x^2 - 4t y^2 = 5 not found."""
    if is_square(t):
        return False
    if min_pell(t, -1, ymax) is None:
        return False
    return min_pell(4 * t, 5, ymax) is None


def smith_diagonal(gram) -> list[int]:
    """Nonzero invariant factors via sympy."""
    m = sympy.Matrix(gram)
    s = smith_normal_form(m, domain=sympy.ZZ)
    return sorted(abs(int(s[i, i])) for i in range(min(s.shape)) if s[i, i] != 0)


def float_signature(gram) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(np.array(gram, dtype=float))
    return int((ev > 1e-9).sum()), int((ev < -1e-9).sum())


def residue_solvable(D: int, N: int, m: int) -> bool:
    return any((x * x - D * y * y - N) % m == 0 for x in range(m) for y in range(m))


def box_search(gram, N: int, bound: int, extra=lambda v: True):
    n = len(gram)
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        q = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))
        if q == N and (N != 0 or any(v)) and extra(v):
            return v
    return None


# admissible t in 2..60, from admissible_by_search (y <= 2000)
ADMISSIBLE_UP_TO_60 = (2, 10, 13, 17, 26, 37, 50, 53, 58)

# minimal solutions of x^2 - t y^2 = -1, from min_pell
NEG_PELL = {2: (1, 1), 10: (3, 1), 13: (18, 5), 26: (5, 1), 50: (7, 1), 29: (70, 13), 61: (29718, 3805)}

# t = 5 witness for x^2 - 20 y^2 = 5
T5_WITNESS = (5, 1)

# invariant factors of <4+2k> ⊕ <-2>^k for k = 2
R2_FACTORS = (2, 2, 8)
