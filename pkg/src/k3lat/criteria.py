"""Lattice-side checks for involutions of Hilbert squares of K3 surfaces.

Basis conventions (the δ coordinate is always last):

* ``NS(S) ⊕ Zδ`` for Picard rank one: ``(h, δ)`` with Gram ``diag(2t, -2)``;
* ``L_α ⊕ Zδ``: ``(h1, h2, δ)`` with ``L_α = [[4, 4+2α], [4+2α, 4]]``;
* one node: ``(H, ε)`` with Gram ``diag(6, -2)``;
* ``R_k = <4+2k> ⊕ <-2>^k``: ``(H, ε1, ..., εk)``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import binform, pell
from .binform import RepresentationDecision, constrained_class, even_pairing_lattice, represents
from .errors import ContractError, ContractViolation, Inconclusive
from .isometry import Isometry, compose, invariant_sublattice, is_involution, reflection_fix
from .lattice import (
    Lattice,
    LatticeVector,
    ObstructionVerdict,
    diagonal,
    direct_sum,
    discriminant_group,
    make_lattice,
    morrison_embeddable,
    pairing,
    signature,
    transcendental_obstruction,
)


def l_alpha(alpha: int) -> Lattice:
    if alpha < 1:
        raise ContractError("alpha must be at least 1")
    b = 4 + 2 * alpha
    return make_lattice([[4, b], [b, 4]], f"L_{alpha}")


def r_lattice(k: int) -> Lattice:
    if k < 1:
        raise ContractError("k must be at least 1")
    return diagonal(4 + 2 * k, *([-2] * k), label=f"R_{k}")


def hilbert_square_ns(ns: Lattice) -> tuple[Lattice, LatticeVector]:
    """``NS(S) ⊕ Zδ`` with ``δ^2 = -2`` as the last basis vector."""
    label = f"{ns.label} ⊕ <-2>" if ns.label else "<-2>"
    lat = direct_sum(ns, make_lattice([[-2]]), label=label)
    delta = lat.vector(*([0] * ns.rank + [1]))
    return lat, delta


def lift(v: LatticeVector, target: Lattice, extra: int = 0) -> LatticeVector:
    """Embed a class of NS(S) into NS(S) ⊕ Zδ, with δ-coefficient ``extra``."""
    return target.vector(*v.coords, extra)


# -- formatting ---------------------------------------------------------------


def basis_names(lat: Lattice) -> list[str]:
    label, tail = lat.label, []
    if label.endswith(" ⊕ <-2>"):
        label, tail = label[: -len(" ⊕ <-2>")], ["δ"]
    n = lat.rank - len(tail)
    if label.startswith("L_"):
        head = ["h1", "h2"]
    elif label.startswith("R_"):
        head = ["H"] + [f"ε{i}" for i in range(1, n)]
    elif label == "one-node":
        head = ["H", "ε"]
    elif label.startswith("<"):
        head = ["h"]
    else:
        head = []
    if len(head) != n:
        head = [f"e{i + 1}" for i in range(n)]
    return head + tail


def format_class(v: LatticeVector | tuple, names: list[str]) -> str:
    terms = []
    for c, name in zip(v, names):
        if c == 0:
            continue
        mag = abs(c)
        body = name if mag == 1 else f"{mag}·{name}"
        if not terms:
            terms.append(body if c > 0 else f"−{body}")
        else:
            terms.append(f"+ {body}" if c > 0 else f"− {body}")
    return " ".join(terms) if terms else "0"


# -- admissibility of t ----------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    t: int
    is_square: bool
    neg_pell: tuple[int, int] | None
    p4t5: pell.PellOutcome | None
    admissible: bool
    involution_class: LatticeVector | None = None
    class_square: int | None = None


def bcns_admissible(t: int) -> AdmissibilityReport:
    """Arithmetic test for a nontrivial automorphism of S^[2] when
    Pic(S) = ZH with H^2 = 2t: t not a square, ``x^2 - t y^2 = -1`` solvable,
    ``x^2 - 4t y^2 = 5`` not solvable.  When admissible, (a, b) is the
    minimal solution of the first equation and D = b h - a δ."""
    if t < 2:
        raise ContractError("t must be at least 2")
    if pell.is_square(t):
        return AdmissibilityReport(t, True, None, None, False)
    neg = pell.pell_min(t, -1)
    p4t5 = pell.genpell(4 * t, 5)
    admissible = neg is not None and not p4t5.solvable
    if not admissible:
        return AdmissibilityReport(t, False, neg, p4t5, False)
    a, b = neg
    lat, _ = hilbert_square_ns(make_lattice([[2 * t]], f"<{2 * t}>"))
    d = lat.vector(b, -a)
    sq = d.square
    if sq != 2:
        raise ContractViolation(f"t={t}: q(D) = {sq}, expected 2")
    return AdmissibilityReport(t, False, neg, p4t5, True, d, sq)


def bcns_scan(lo: int, hi: int, jobs: int | None = 1) -> list[AdmissibilityReport]:
    if not 2 <= lo <= hi:
        raise ContractError("need 2 <= lo <= hi")
    ts = range(lo, hi + 1)
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs <= 1 or len(ts) < 64:
        return [bcns_admissible(t) for t in ts]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(bcns_admissible, ts, chunksize=64))


# -- Saint-Donat battery -----------------------------------------------------------


BATTERY = {
    "hyperelliptic": (0, 2),
    "free_pencil": (0, 1),
    "contracted": (-2, 0),
    "line": (-2, 1),
}


@dataclass
class SaintDonatBattery:
    lattice: Lattice
    d: LatticeVector
    hyperelliptic: RepresentationDecision | None = None
    free_pencil: RepresentationDecision | None = None
    contracted: RepresentationDecision | None = None
    line: RepresentationDecision | None = None
    minus_two_classes: RepresentationDecision | None = None
    inconclusive: list[str] = field(default_factory=list)
    # the geometric conclusion (very ample, no line) is inferred from the checks, never decided here
    paper_inference: bool = True

    def decisions(self) -> dict[str, RepresentationDecision | None]:
        return {name: getattr(self, name) for name in (*BATTERY, "minus_two_classes")}

    @property
    def arithmetic_checks_pass(self) -> bool:
        """No isotropic E with E.d in {1, 2} and no (-2)-class with C.d in {0, 1}."""
        return all(getattr(self, name) is not None and getattr(self, name).empty for name in BATTERY)


def _unconstrained(lat: Lattice, N: int) -> RepresentationDecision:
    if lat.rank == 2:
        return represents(lat, N)
    for m in binform.FORM_MODULI:
        if not binform.form_residue_solvable([list(r) for r in lat.gram], N, m):
            eq = {"type": "form", "gram": [list(r) for r in lat.gram], "N": N}
            return RepresentationDecision(certificate=binform.Certificate("ModularObstruction", {"modulus": m, "equation": eq}))
    hit = binform.brute_oracle(lat, N, bound=min(binform.oracle_bound(), 20 if lat.rank > 2 else 10**6))
    if hit is not None:
        return RepresentationDecision(witness=hit)
    raise Inconclusive(f"no witness and no certificate for q = {N} in rank {lat.rank}")


def saint_donat_battery(lat: Lattice, d: LatticeVector) -> SaintDonatBattery:
    bat = SaintDonatBattery(lat, d)
    for name, (a, b) in BATTERY.items():
        try:
            setattr(bat, name, constrained_class(lat, d, a, b))
        except Inconclusive:
            bat.inconclusive.append(name)
    try:
        bat.minus_two_classes = _unconstrained(lat, -2)
    except Inconclusive:
        bat.inconclusive.append("minus_two_classes")
    return bat


def beauville_involution(ns: Lattice, h: LatticeVector) -> tuple[Isometry, SaintDonatBattery]:
    """Reflection in ``H - δ`` on ``NS(S) ⊕ Zδ`` together with the arithmetic
    battery for H on NS(S).  Battery failures are reported, not raised."""
    if h.square != 4:
        raise ContractError(f"H must have square 4, got {h.square}")
    battery = saint_donat_battery(ns, h)
    lat, _ = hilbert_square_ns(ns)
    d = lift(h, lat, -1)
    return reflection_fix(lat, d), battery


# -- double Beauville involutions --------------------------------------------------


@dataclass(frozen=True)
class DoubleBeauvilleReport:
    alpha: int
    lattice: Lattice
    sigma1: Isometry
    sigma2: Isometry
    kappa: Isometry
    fixed_class: LatticeVector
    fixed_square: int
    invariant_basis: tuple[LatticeVector, ...]
    is_beauville_form: bool


def d_alpha(alpha: int, lat: Lattice) -> LatticeVector:
    return lat.vector(2 + 2 * alpha, -1, -(2 * alpha + 1))


def double_beauville(alpha: int) -> DoubleBeauvilleReport:
    """κ_α = σ1 σ2 σ1 with σi the reflection in ``hi - δ`` on ``L_α ⊕ Zδ``.

    Asserts that κ_α is the reflection in
    ``D_α = (2+2α) h1 - h2 - (2α+1) δ``, that ``D_α^2 = 2`` and that the
    invariant lattice is ``Z D_α``.
    """
    ns = l_alpha(alpha)
    lat, delta = hilbert_square_ns(ns)
    h1, h2 = lat.vector(1, 0, 0), lat.vector(0, 1, 0)
    s1 = reflection_fix(lat, h1 - delta)
    s2 = reflection_fix(lat, h2 - delta)
    kappa = compose(s1, compose(s2, s1))
    dv = d_alpha(alpha, lat)
    sq = dv.square
    if sq != 2:
        raise ContractViolation(f"alpha={alpha}: D_alpha^2 = {sq}, expected 2")
    expected = reflection_fix(lat, dv)
    if kappa.matrix != expected.matrix:
        raise ContractViolation(f"alpha={alpha}: kappa differs from the reflection in D_alpha")
    if not is_involution(kappa):
        raise ContractViolation(f"alpha={alpha}: kappa is not an involution")
    inv = invariant_sublattice(kappa)
    if len(inv) != 1 or inv[0].coords not in (dv.coords, (-dv).coords):
        raise ContractViolation(f"alpha={alpha}: invariant lattice {[v.coords for v in inv]} is not Z D_alpha")
    return DoubleBeauvilleReport(
        alpha, lat, s1, s2, kappa, dv, sq, tuple(inv), is_beauville_form=abs(dv[-1]) == 1
    )


# -- positive cone ------------------------------------------------------------------


def positive_cone_member(lat: Lattice, d: LatticeVector, ref: LatticeVector) -> bool:
    """``d`` lies in the component of ``{x^2 > 0}`` containing ``ref``."""
    if pairing(lat, ref, ref) <= 0:
        raise ContractError("reference class must have positive square")
    if lat.rank != 2 or signature(lat) != (1, 1):
        raise ContractError("positive_cone_member needs a hyperbolic rank 2 lattice")
    return pairing(lat, d, d) > 0 and pairing(lat, d, ref) > 0


def _sign_minus_sqrt(s: Fraction, t: Fraction, r: Fraction) -> int:
    """Sign of ``s - t * sqrt(r)`` for rational s, t and r >= 0."""
    if t == 0 or r == 0:
        return (s > 0) - (s < 0)
    if s >= 0 and t < 0:
        return 1
    if s <= 0 and t > 0:
        return -1
    diff = s * s - t * t * r
    sign = (diff > 0) - (diff < 0)
    return sign if s > 0 else -sign


def slope_formula_member(alpha: int, x, y) -> bool:
    """Membership of ``x h1 + y h2`` via the boundary slopes
    ``y > (1 + εβ) / (εβ - 1) x`` for ``ε = ±1``, ``β = sqrt(α / (4 + α))``.

    Since ``εβ - 1 < 0`` each inequality is ``x + y - ε (y - x) β > 0``,
    whose sign is decided exactly by comparing squares.
    """
    x, y = Fraction(x), Fraction(y)
    r = Fraction(alpha, 4 + alpha)
    return all(_sign_minus_sqrt(x + y, eps * (y - x), r) > 0 for eps in (1, -1))


def very_ample_classes(alpha: int, lat: Lattice) -> dict[str, LatticeVector]:
    return {
        "h1": lat.vector(1, 0),
        "h2": lat.vector(0, 1),
        "(2+2a)h1-h2": lat.vector(2 + 2 * alpha, -1),
        "(2+2a)h2-h1": lat.vector(-1, 2 + 2 * alpha),
    }


# -- nodal K3 surfaces ----------------------------------------------------------------


@dataclass(frozen=True)
class NodalReport:
    k: int
    lattice: Lattice
    square_class: LatticeVector
    square: int
    even_pairings: bool
    line: RepresentationDecision
    disc_length: int
    morrison: bool
    obstruction: ObstructionVerdict


def nodal_verify(k: int) -> NodalReport:
    if not 1 <= k <= 16:
        raise ContractError("k must lie in 1..16")
    lat = r_lattice(k)
    d = lat.vector(1, *([-1] * k))
    return NodalReport(
        k,
        lat,
        d,
        d.square,
        even_pairing_lattice(lat),
        constrained_class(lat, d, -2, 1),
        discriminant_group(lat).length,
        morrison_embeddable(lat),
        transcendental_obstruction(lat),
    )


@dataclass(frozen=True)
class OneNodeReport:
    lattice: Lattice
    d: LatticeVector
    square: int
    battery: SaintDonatBattery
    involution: Isometry
    invariant_class: LatticeVector


def one_node() -> OneNodeReport:
    """``NS(S) = <6> ⊕ <-2>`` with ``d = H - ε`` of square 4."""
    ns = diagonal(6, -2, label="one-node")
    d = ns.vector(1, -1)
    inv, battery = beauville_involution(ns, d)
    fixed = invariant_sublattice(inv)
    if len(fixed) != 1:
        raise ContractViolation("Beauville involution must have rank 1 invariant lattice")
    return OneNodeReport(ns, d, d.square, battery, inv, fixed[0])
