"""Continued fractions of quadratic irrationals and Pell-type equations.

``genpell(D, N)`` decides ``x^2 - D y^2 = N`` completely:

* ``N^2 < D``: every primitive solution with ``x, y > 0`` has ``x/y`` among the
  convergents of ``sqrt(D)``.  The values ``p_k^2 - D q_k^2`` repeat with the
  period of the expansion (up to sign for odd periods), so scanning the first
  ``2 * period`` convergents for each ``N / f^2`` (``f^2 | N``) is exhaustive.
* otherwise, with ``(u, v)`` the fundamental solution of ``x^2 - D y^2 = 1``,
  every solution class has a member with ``0 <= y <= sqrt(|N| (u + 1) / (2 D))``.
  (Write a class member as ``x + y sqrt(D)`` with ``x > 0`` minimal; comparing
  it with its images under the unit and its conjugate bounds ``y^2`` by
  ``|N| (u -+ 1) / (2D)`` for ``N >< 0``; the ``u + 1`` form covers both.)
  The window is scanned directly when it is small.  When it is not, the
  Lagrange-Matthews-Mollin reduction is used instead: for each ``f^2 | N``
  and each square root ``z`` of ``D`` modulo ``|N/f^2|`` the expansion of
  ``(z + sqrt(D)) / |N/f^2|`` is followed until its state repeats; a primitive
  solution exists in that class iff some ``Q_i = ±1`` appears.

Solutions are reported one per class, a class being the orbit of a solution
under multiplication by ``±(u + v sqrt(D))^k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np

from .certificates import Certificate, pell_residue_solvable, pell_residue_solvable_rescan
from .errors import ContractError, ContractViolation, SquareParameter

WINDOW_LIMIT = 5_000


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def _primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(limit + 1) if sieve[p]]


DEFAULT_MODULI = tuple(sorted({4, 8, 16} | set(_primes(100)) | {p * p for p in _primes(100)}))


@dataclass(frozen=True)
class CFExpansion:
    D: int
    a0: int
    period: tuple[int, ...]

    def partial_quotients(self):
        """a_0, a_1, a_2, ... (infinite)."""
        yield self.a0
        while True:
            yield from self.period


@dataclass(frozen=True)
class PellOutcome:
    D: int
    N: int
    solutions: tuple[tuple[int, int], ...] = ()
    certificate: Certificate | None = None
    method: str = ""

    def __post_init__(self):
        for x, y in self.solutions:
            if x * x - self.D * y * y != self.N:
                raise ContractViolation(f"({x}, {y}) does not solve x^2 - {self.D} y^2 = {self.N}")
        if not self.solutions and self.certificate is None:
            raise ContractViolation("unsolvable outcome without certificate")

    @property
    def solvable(self) -> bool:
        return bool(self.solutions)

    @property
    def kind(self) -> str:
        return "Solutions" if self.solvable else "Unsolvable"


def _check_param(D: int) -> None:
    if D < 2:
        raise ContractError(f"D must be at least 2, got {D}")
    if is_square(D):
        raise SquareParameter(f"D = {D} is a perfect square")


def cf_sqrt(D: int) -> CFExpansion:
    """Periodic continued fraction of sqrt(D) by the (P, Q) recurrence."""
    _check_param(D)
    a0 = isqrt(D)
    p, q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        p = a * q - p
        q = (D - p * p) // q
        a = (a0 + p) // q
        period.append(a)
    return CFExpansion(D, a0, tuple(period))


def convergents(cf: CFExpansion, count: int):
    """First ``count`` convergents ``(p_k, q_k)``."""
    p0, p1 = 1, 0
    q0, q1 = 0, 1
    for k, a in enumerate(cf.partial_quotients()):
        if k >= count:
            return
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0


def pell_min(D: int, N: int) -> tuple[int, int] | None:
    """Minimal positive solution of ``x^2 - D y^2 = N`` for ``N = ±1``.

    For ``N = -1`` a solution exists iff the period of sqrt(D) is odd.
    """
    if N not in (1, -1):
        raise ContractError("pell_min handles N = ±1 only")
    cf = cf_sqrt(D)
    n = len(cf.period)
    if N == -1 and n % 2 == 0:
        return None
    idx = n - 1 if (N == -1 or n % 2 == 0) else 2 * n - 1
    *_, (x, y) = convergents(cf, idx + 1)
    if x * x - D * y * y != N:
        raise ContractViolation(f"convergent ({x}, {y}) fails x^2 - {D} y^2 = {N}")
    return x, y


@lru_cache(maxsize=4096)
def fundamental_unit(D: int) -> tuple[int, int]:
    return pell_min(D, 1)


def square_divisors(n: int) -> list[int]:
    """All f >= 1 with f^2 | n."""
    n = abs(n)
    return [f for f in range(1, isqrt(n) + 1) if n % (f * f) == 0]


def same_class(D: int, N: int, s1: tuple[int, int], s2: tuple[int, int]) -> bool:
    (x1, y1), (x2, y2) = s1, s2
    n = abs(N)
    return (x1 * x2 - D * y1 * y2) % n == 0 and (x1 * y2 - x2 * y1) % n == 0


def class_representatives(D: int, N: int, sols) -> tuple[tuple[int, int], ...]:
    reps: list[tuple[int, int]] = []
    for s in sols:
        if not any(same_class(D, N, s, r) for r in reps):
            reps.append(s)
    return tuple(reps)


def mod_obstruction(D: int, N: int, moduli=DEFAULT_MODULI) -> int | None:
    """First modulus m for which ``x^2 - D y^2 ≡ N (mod m)`` has no solution."""
    for m in moduli:
        if not pell_residue_solvable(D, N, m):
            return m
    return None


def modular_certificate(D: int, N: int, m: int) -> Certificate:
    # independent rescan before the certificate leaves this module
    if pell_residue_solvable_rescan(D, N, m):
        raise ContractViolation(f"residue rescan found a solution mod {m}")
    return Certificate("ModularObstruction", {"modulus": m, "equation": {"type": "pell", "D": D, "N": N}})


def _convergent_solutions(D: int, N: int) -> list[tuple[int, int]]:
    cf = cf_sqrt(D)
    count = 2 * len(cf.period)
    found = []
    for f in square_divisors(N):
        n = N // (f * f)
        if n == 1:
            found.append((f, 0))
            continue
        for p, q in convergents(cf, count):
            if p * p - D * q * q == n:
                found.append((f * p, f * q))
    return found


def class_window(D: int, N: int) -> int:
    u, _ = fundamental_unit(D)
    return isqrt(abs(N) * (u + 1) // (2 * D))


def _window_solutions(D: int, N: int, bound: int) -> list[tuple[int, int]]:
    found = []
    for y in range(bound + 1):
        r = N + D * y * y
        if r >= 0:
            x = isqrt(r)
            if x * x == r:
                found.append((x, y))
                if x:
                    found.append((-x, y))
    return found


def _pqa_floor(p: int, q: int, s: int) -> int:
    # floor((p + sqrt(D)) / q) with s = isqrt(D), D nonsquare
    if q > 0:
        return (p + s) // q
    return -((p + s) // -q) - 1


def _lmm_solutions(D: int, N: int) -> list[tuple[int, int]]:
    s = isqrt(D)
    neg = None
    found = []
    for f in square_divisors(N):
        m = N // (f * f)
        am = abs(m)
        if am == 1:
            if m == 1:
                found.append((f, 0))
            else:
                sol = pell_min(D, -1)
                if sol:
                    found.append((f * sol[0], f * sol[1]))
            continue
        for z in range(-((am - 1) // 2), am // 2 + 1):
            if (z * z - D) % am:
                continue
            p, q = z, am
            g_prev2, g_prev = -z, am
            b_prev2, b_prev = 1, 0
            seen = set()
            i = 0
            while (p, q) not in seen:
                seen.add((p, q))
                if i >= 1 and abs(q) == 1:
                    g, b = g_prev, b_prev
                    val = g * g - D * b * b
                    if val == m:
                        found.append((f * g, f * b))
                    elif val == -m:
                        if neg is None:
                            neg = pell_min(D, -1) or ()
                        if neg:
                            r, t = neg
                            found.append((f * (g * r + b * t * D), f * (g * t + b * r)))
                    break
                a = _pqa_floor(p, q, s)
                g_prev2, g_prev = g_prev, a * g_prev + g_prev2
                b_prev2, b_prev = b_prev, a * b_prev + b_prev2
                p = a * q - p
                q = (D - p * p) // q
                i += 1
    return found


def _decide(D: int, N: int) -> tuple[list[tuple[int, int]], str, dict]:
    if N * N < D:
        cf = cf_sqrt(D)
        return _convergent_solutions(D, N), "convergents", {"period_length": len(cf.period)}
    u, v = fundamental_unit(D)
    bound = class_window(D, N)
    data = {"unit": [u, v], "bound": bound}
    if bound <= WINDOW_LIMIT:
        return _window_solutions(D, N, bound), "class-window", data
    return _lmm_solutions(D, N), "class-lmm", data


def genpell(D: int, N: int) -> PellOutcome:
    """Decide ``x^2 - D y^2 = N``; solutions are class representatives."""
    _check_param(D)
    if N == 0:
        raise ContractError("genpell needs N != 0")
    sols, method, data = _decide(D, N)
    sols = [(x, y) for x, y in sols if x * x - D * y * y == N]
    if sols:
        # prefer representatives with x, y >= 0
        sols.sort(key=lambda s: (s[0] < 0, abs(s[1]), abs(s[0])))
        return PellOutcome(D, N, class_representatives(D, N, sols), None, method)
    m = mod_obstruction(D, N)
    if m is not None:
        return PellOutcome(D, N, (), modular_certificate(D, N, m), method)
    if method == "convergents":
        cert = Certificate("ConvergentExhaustion", {"D": D, "N": N, **data})
    else:
        cert = Certificate("ClassExhaustion", {"D": D, "N": N, "method": method[6:], **data})
    return PellOutcome(D, N, (), cert, method)


def orbit(D: int, sol: tuple[int, int], k: int) -> tuple[int, int]:
    """``sol * (u + v sqrt(D))^k`` for any integer k."""
    u, v = fundamental_unit(D)
    if k < 0:
        v, k = -v, -k
    x, y = sol
    for _ in range(k):
        x, y = x * u + D * y * v, x * v + y * u
    return x, y


def pell_brute(D: int, N: int, ymax: int, ymin: int = 0) -> tuple[int, int] | None:
    """Smallest ``y`` in ``ymin..ymax`` with ``N + D y^2`` a perfect square.

    Vectorised scan used as an independent oracle.  Values are kept below
    2^53 so float square roots are corrected exactly.
    """
    if D * ymax * ymax + abs(N) >= 1 << 52:
        for y in range(ymin, ymax + 1):
            r = N + D * y * y
            if r >= 0 and isqrt(r) ** 2 == r:
                return isqrt(r), y
        return None
    y = np.arange(ymin, ymax + 1, dtype=np.int64)
    r = N + D * y * y
    ok = r >= 0
    root = np.floor(np.sqrt(np.where(ok, r, 0).astype(np.float64))).astype(np.int64)
    hit = np.zeros_like(ok)
    for adj in (-1, 0, 1):
        cand = root + adj
        hit |= ok & (cand >= 0) & (cand * cand == r)
    idx = np.flatnonzero(hit)
    if not idx.size:
        return None
    yy = int(idx[0]) + ymin
    return isqrt(N + D * yy * yy), yy
