"""Non-existence certificates and their independent re-checks.

A :class:`Certificate` is a ``kind`` plus a JSON-friendly ``payload``.  The
payload carries everything needed to re-check the claim without trusting the
code path that produced it; :func:`check_certificate` does that re-check.

Kinds
-----
ModularObstruction
    ``payload = {"modulus": m, "equation": {...}}`` where the equation is one of

    * ``{"type": "pell", "D", "N"}``: ``x^2 - D y^2 ≡ N (mod m)`` is insoluble;
    * ``{"type": "reduced", "gram", "N", "multiplier", "X", "Y", "D"}``: the
      identity ``c * q(x, y) = X(x, y)^2 - D * Y(x, y)^2`` holds for the linear
      forms X, Y and ``X^2 - D Y^2 ≡ c N (mod m)`` is insoluble;
    * ``{"type": "form", "gram", "N"}``: ``q(v) ≡ N (mod m)`` is insoluble;
    * ``{"type": "linear", "gram", "d", "b"}``: every coefficient of
      ``v -> <v, d>`` is divisible by m but ``b`` is not.
SquareParameter
    ``{"D"}`` with D a perfect square.
ConvergentExhaustion
    ``{"D", "N", "period_length"}``; ``N^2 < D`` and no convergent in two
    periods hits ``N / f^2``.
ClassExhaustion
    ``{"D", "N", "method", "unit", "bound"}``; no class representative in
    the window (``method == "window"``) or from the LMM reduction.
ExactContradiction
    ``{"gram", "d", "a", "b", "base", "direction", "poly"}``: solutions of
    ``<E, d> = b`` are ``base + s * direction``; substituting gives
    ``A s^2 + B s + C = 0`` with no integer root.
NonSquareDiscriminant
    ``{"gram"}``: a rank 2 form whose ``-det`` is not a square has no nonzero
    isotropic vector.
FiniteExhaustion / CongruenceExhaustion
    ``{"gram", "N", "reduction", ...}``: all solutions of the reduced equation
    were enumerated (finitely many, or finitely many classes with their unit
    orbits checked modulo ``det T``) and none pulls back to an integral vector.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt


@dataclass(frozen=True)
class Certificate:
    kind: str
    payload: dict = field(default_factory=dict, hash=False)

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": encode(self.payload)}

    @classmethod
    def from_json(cls, doc: dict) -> Certificate:
        return cls(doc["kind"], decode(doc.get("payload", {})))


def encode(obj):
    """Integers become decimal strings (arbitrary precision safe)."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, float):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, Certificate):
        return obj.to_json()
    return obj


def decode(obj):
    """Inverse of :func:`encode`: numeric strings become ints."""
    if isinstance(obj, str):
        try:
            return int(obj)
        except ValueError:
            return obj
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    return obj


# -- residue scans -------------------------------------------------------------


@lru_cache(maxsize=512)
def _squares(m: int) -> frozenset[int]:
    return frozenset(x * x % m for x in range(m))


def pell_residue_solvable(D: int, N: int, m: int) -> bool:
    """Does ``x^2 - D y^2 ≡ N (mod m)`` have a solution?  Scans y^2 residues."""
    sq = _squares(m)
    D %= m
    N %= m
    return any((N + D * s) % m in sq for s in sq)


def pell_residue_solvable_rescan(D: int, N: int, m: int) -> bool:
    """Same question, scanned from the other side: compare the sets
    ``{x^2 - N}`` and ``{D y^2}`` over all residues x, y."""
    left = {(x * x - N) % m for x in range(m)}
    right = {D * y * y % m for y in range(m)}
    return not left.isdisjoint(right)


def form_residue_solvable(gram, N: int, m: int) -> bool:
    n = len(gram)
    for v in itertools.product(range(m), repeat=n):
        q = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))
        if (q - N) % m == 0:
            return True
    return False


# -- helpers -------------------------------------------------------------------


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def has_integer_root(a: int, b: int, c: int) -> bool:
    """Does ``a s^2 + b s + c = 0`` have an integer solution s?"""
    if a == 0:
        if b == 0:
            return c == 0
        return c % b == 0
    disc = b * b - 4 * a * c
    if not _is_square(disc):
        return False
    r = isqrt(disc)
    return any((-b + e) % (2 * a) == 0 for e in (r, -r))


def has_nonzero_integer_root(a: int, b: int) -> bool:
    """Does ``a s^2 + b s = 0`` have an integer solution s != 0?"""
    if a == 0:
        return b == 0
    return b != 0 and b % a == 0


def _qform(gram, v) -> int:
    n = len(v)
    return sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))


def _bform(gram, v, w) -> int:
    n = len(v)
    return sum(v[i] * gram[i][j] * w[j] for i in range(n) for j in range(n))


def reduction_identity_holds(gram, red: dict) -> bool:
    c = red["multiplier"]
    (x1, x2), (y1, y2) = red["X"], red["Y"]
    D = red["D"]
    a, b, cc = gram[0][0], gram[0][1], gram[1][1]
    return (
        c != 0
        and x1 * y2 - x2 * y1 != 0
        and c * a == x1 * x1 - D * y1 * y1
        and c * 2 * b == 2 * (x1 * x2 - D * y1 * y2)
        and c * cc == x2 * x2 - D * y2 * y2
    )


def pullback(red: dict, X: int, Y: int) -> tuple[int, int] | None:
    """Integral (x, y) with ``X(x, y) = X`` and ``Y(x, y) = Y``, if any."""
    (x1, x2), (y1, y2) = red["X"], red["Y"]
    det = x1 * y2 - x2 * y1
    nx = y2 * X - x2 * Y
    ny = -y1 * X + x1 * Y
    if nx % det or ny % det:
        return None
    return nx // det, ny // det


def enumerate_reduced(D: int, M: int):
    """All (X, Y) with ``X^2 - D Y^2 = M`` when D < 0 or D is a positive
    square and M != 0 (a finite set)."""
    out = []
    if D < 0:
        if M < 0:
            return out
        for Y in range(-isqrt(M // -D), isqrt(M // -D) + 1):
            r = M + D * Y * Y
            if _is_square(r):
                X = isqrt(r)
                out.extend({(X, Y), (-X, Y)})
        return out
    s = isqrt(D)
    if s * s != D:
        raise ValueError("D must be negative or a square")
    if M == 0:
        raise ValueError("M must be nonzero")
    # (X - sY)(X + sY) = M
    am = abs(M)
    for d in range(1, am + 1):
        if am % d:
            continue
        for p in (d, -d):
            q = M // p
            if (p + q) % 2 == 0 and (q - p) % (2 * s) == 0:
                out.append(((p + q) // 2, (q - p) // (2 * s)))
    return out


# -- checking ------------------------------------------------------------------


class CertificateError(ValueError):
    pass


def check_certificate(cert: Certificate | dict) -> bool:
    """Re-verify a certificate from its payload alone.  Returns True when the
    certificate is valid, False otherwise."""
    if isinstance(cert, dict):
        cert = Certificate.from_json(cert) if "kind" in cert else None
    if cert is None:
        return False
    fn = _CHECKERS.get(cert.kind)
    if fn is None:
        return False
    try:
        return bool(fn(decode(encode(cert.payload))))
    except (KeyError, TypeError, ValueError, ZeroDivisionError, IndexError):
        return False


def _check_modular(p: dict) -> bool:
    m = p["modulus"]
    eq = p["equation"]
    if m < 2:
        return False
    kind = eq["type"]
    if kind == "pell":
        return not pell_residue_solvable_rescan(eq["D"], eq["N"], m)
    if kind == "reduced":
        if not reduction_identity_holds(eq["gram"], eq):
            return False
        return not pell_residue_solvable_rescan(eq["D"], eq["multiplier"] * eq["N"], m)
    if kind == "form":
        if m ** len(eq["gram"]) > 2_000_000:
            return False
        return not form_residue_solvable(eq["gram"], eq["N"], m)
    if kind == "linear":
        gram, d = eq["gram"], eq["d"]
        func = [sum(gram[i][j] * d[j] for j in range(len(d))) for i in range(len(d))]
        return all(f % m == 0 for f in func) and eq["b"] % m != 0
    return False


def _check_square(p: dict) -> bool:
    return _is_square(p["D"])


def _check_convergent(p: dict) -> bool:
    from . import pell

    D, N = p["D"], p["N"]
    if _is_square(D) or N == 0 or N * N >= D:
        return False
    cf = pell.cf_sqrt(D)
    if len(cf.period) != p["period_length"]:
        return False
    return not pell._convergent_solutions(D, N)


def _check_class(p: dict) -> bool:
    from . import pell

    D, N = p["D"], p["N"]
    if _is_square(D) or N == 0:
        return False
    u, v = p["unit"]
    if u * u - D * v * v != 1 or (u, v) != pell.fundamental_unit(D):
        return False
    if p["bound"] != isqrt(abs(N) * (u + 1) // (2 * D)):
        return False
    if p["method"] == "window":
        for y in range(p["bound"] + 1):
            if _is_square(N + D * y * y):
                return False
        return True
    if p["method"] == "lmm":
        return not [s for s in pell._lmm_solutions(D, N) if s[0] ** 2 - D * s[1] ** 2 == N]
    return False


def _check_exact(p: dict) -> bool:
    gram, d = p["gram"], p["d"]
    base, direction = p["base"], p["direction"]
    n = len(gram)
    if n not in (1, 2) or len(d) != n or not any(d):
        return False
    if _bform(gram, base, d) != p["b"]:
        return False
    if n == 2:
        if _bform(gram, direction, d) != 0 or gcd(direction[0], direction[1]) != 1:
            return False
    elif any(direction):
        return False
    A = _qform(gram, direction)
    B = 2 * _bform(gram, base, direction)
    C = _qform(gram, base) - p["a"]
    if [A, B, C] != list(p["poly"]):
        return False
    if p.get("nonzero"):
        # E = 0 is excluded; it sits at s = 0 because the base point is 0
        if any(base) or C != 0:
            return False
        return not any(direction) or not has_nonzero_integer_root(A, B)
    return not has_integer_root(A, B, C)


def _check_nonsquare_disc(p: dict) -> bool:
    g = p["gram"]
    if len(g) != 2 or g[0][1] != g[1][0]:
        return False
    det = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    return det != 0 and not _is_square(-det)


def _check_finite(p: dict) -> bool:
    gram, N, red = p["gram"], p["N"], p["reduction"]
    if not reduction_identity_holds(gram, red):
        return False
    D, M = red["D"], red["multiplier"] * N
    if not (D < 0 or _is_square(D)) or M == 0:
        return False
    for X, Y in enumerate_reduced(D, M):
        v = pullback(red, X, Y)
        if v is not None and any(v):
            return False
    return True


def _check_congruence(p: dict) -> bool:
    from . import pell

    gram, N, red = p["gram"], p["N"], p["reduction"]
    if not reduction_identity_holds(gram, red):
        return False
    D, M = red["D"], red["multiplier"] * N
    if D < 2 or _is_square(D) or M == 0:
        return False
    outcome = pell.genpell(D, M)
    reps = [tuple(r) for r in p["classes"]]
    if len(reps) != len(outcome.solutions):
        return False
    for s in outcome.solutions:
        if not any(pell.same_class(D, M, s, r) for r in reps):
            return False
    det = abs(red["X"][0] * red["Y"][1] - red["X"][1] * red["Y"][0])
    u, v = pell.fundamental_unit(D)
    for X0, Y0 in reps:
        for sign in (1, -1):
            for X, Y in _orbit_residues(D, (sign * X0, sign * Y0), (u, v), det):
                if pullback(red, X, Y) is not None:
                    return False
    return True


def _orbit_residues(D: int, start, unit, m: int):
    """Residues mod m of ``start * unit^k`` over one full period in k."""
    u, v = unit[0] % m, unit[1] % m
    x0, y0 = start[0] % m, start[1] % m
    x, y = x0, y0
    out = []
    while True:
        out.append((x, y))
        x, y = (x * u + D * y * v) % m, (x * v + y * u) % m
        if (x, y) == (x0, y0):
            return out


_CHECKERS = {
    "ModularObstruction": _check_modular,
    "SquareParameter": _check_square,
    "ConvergentExhaustion": _check_convergent,
    "ClassExhaustion": _check_class,
    "ExactContradiction": _check_exact,
    "NonSquareDiscriminant": _check_nonsquare_disc,
    "FiniteExhaustion": _check_finite,
    "CongruenceExhaustion": _check_congruence,
}
