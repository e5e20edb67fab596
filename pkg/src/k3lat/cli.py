"""``k3lat`` command-line front end.

Every verb produces a list of claim records.  ``--json`` prints them in a
versioned report document; otherwise a short human rendering is printed
with lattice classes written in a named basis.  Exit status: 0 when every
record passes, 1 on a failed or inconclusive record, 2 on usage errors,
3 when a precondition of the requested operation is violated.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import binform, criteria, pell
from .certificates import Certificate, check_certificate, encode
from .errors import ContractError
from .isometry import Isometry, compose, invariant_sublattice, is_involution, reflection_fix, reflection_neg
from .lattice import Lattice, discriminant_group, gram_from_json, gram_to_json, make_lattice
from .verify import FAIL, INCONCLUSIVE, PASS, ClaimRecord, verify_paper

SCHEMA_VERSION = 1


# -- input helpers --------------------------------------------------------------


def _load_json_arg(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ContractError(f"invalid JSON: {exc}") from None


def _lattice_arg(text: str, label: str = "") -> Lattice:
    doc = _load_json_arg(text)
    if isinstance(doc, dict):
        label = doc.get("label", label)
        doc = doc["gram"]
    try:
        gram = gram_from_json(doc)
    except (TypeError, ValueError):
        raise ContractError("Gram matrix must be a list of integer rows") from None
    return make_lattice(gram, label)


def _vector_arg(text: str) -> list[int]:
    doc = _load_json_arg(text) if text.lstrip().startswith(("[", "@")) else text.split(",")
    try:
        return [int(x) for x in doc]
    except (TypeError, ValueError):
        raise ContractError(f"cannot read vector {text!r}") from None


def isometry_to_json(g: Isometry) -> dict:
    return {
        "ambient": {"label": g.ambient.label, "gram": gram_to_json(g.ambient)},
        "matrix": [[str(x) for x in row] for row in g.matrix],
    }


def isometry_from_json(doc: dict) -> Isometry:
    amb = doc["ambient"]
    lat = make_lattice(gram_from_json(amb["gram"]), amb.get("label", ""))
    return Isometry(tuple(tuple(int(x) for x in row) for row in doc["matrix"]), lat)


def _names(lat: Lattice) -> list[str]:
    return criteria.basis_names(lat)


def _legend(lat: Lattice) -> str:
    head = f"basis of {lat.label or 'lattice'}: " + ", ".join(_names(lat))
    return head + (f"  (Gram {[list(r) for r in lat.gram]})" if lat.rank <= 4 else "")


def _fmt(v, lat: Lattice) -> str:
    return criteria.format_class(v, _names(lat))


def _decision_record(claim_id: str, dec: binform.RepresentationDecision) -> ClaimRecord:
    if dec.empty:
        return ClaimRecord(claim_id, PASS, "Empty", certificate=dec.certificate)
    return ClaimRecord(claim_id, PASS, "Witness", witness=dec.witness)


# -- verbs ------------------------------------------------------------------------
# each returns (records, human lines)


def cmd_pell(args):
    cf = pell.cf_sqrt(args.D)
    sol = pell.pell_min(args.D, args.N)
    rec = ClaimRecord("pell_min", PASS, "solvable" if sol else "unsolvable (even period)", witness=sol)
    lines = [
        f"sqrt({args.D}) = [{cf.a0}; {', '.join(map(str, cf.period))}]  period {len(cf.period)}",
        f"x^2 - {args.D} y^2 = {args.N}: " + (f"minimal solution {sol}" if sol else "no solution"),
    ]
    return [rec], lines


def cmd_genpell(args):
    out = pell.genpell(args.D, args.N)
    if out.solvable:
        rec = ClaimRecord("genpell", PASS, f"Solutions via {out.method}", witness=list(out.solutions))
        lines = [f"x^2 - {args.D} y^2 = {args.N}: class representatives {list(out.solutions)} ({out.method})"]
    else:
        rec = ClaimRecord("genpell", PASS, f"Unsolvable via {out.method}", certificate=out.certificate)
        lines = [f"x^2 - {args.D} y^2 = {args.N}: no solution", _cert_line(out.certificate)]
    return [rec], lines


def _via(cert: Certificate) -> str:
    p = cert.payload
    return cert.kind + (f" modulo {p['modulus']}" if "modulus" in p else "")


def _cert_line(cert: Certificate) -> str:
    return f"  certificate: {_via(cert)}"


def cmd_represent(args):
    lat = _lattice_arg(args.gram)
    if args.N == 0:
        dec = binform.isotropic_exists(lat)
    else:
        dec = binform.represents(lat, args.N)
    rec = _decision_record("represents", dec)
    lines = [_legend(lat)]
    if dec.empty:
        lines += [f"q(v) = {args.N}: Empty", _cert_line(dec.certificate)]
    else:
        lines.append(f"q(v) = {args.N}: Witness {_fmt(dec.witness, lat)}")
    return [rec], lines


def cmd_reflect(args):
    lat = _lattice_arg(args.gram)
    d = lat.vector(*_vector_arg(args.vector))
    g = reflection_neg(lat, d) if args.minus_two else reflection_fix(lat, d)
    inv = invariant_sublattice(g)
    rec = ClaimRecord("reflection", PASS, f"involution={is_involution(g)}", witness={"isometry": isometry_to_json(g), "invariant_basis": [list(v) for v in inv]})
    lines = [_legend(lat), f"reflection in {_fmt(d, lat)}:"]
    lines += ["  " + " ".join(f"{x:>4}" for x in row) for row in g.matrix]
    lines.append("invariant lattice: " + ", ".join(_fmt(v, lat) for v in inv) if inv else "invariant lattice: 0")
    return [rec], lines


def cmd_compose(args):
    try:
        g = isometry_from_json(_load_json_arg(args.first))
        h = isometry_from_json(_load_json_arg(args.second))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ContractError):
            raise
        raise ContractError(f"malformed isometry document: {exc}") from None
    c = compose(g, h)
    rec = ClaimRecord("compose", PASS, f"involution={is_involution(c)}", witness={"isometry": isometry_to_json(c)})
    lines = [_legend(c.ambient), "g ∘ h:"] + ["  " + " ".join(f"{x:>4}" for x in row) for row in c.matrix]
    return [rec], lines


def _admissibility_record(rep: criteria.AdmissibilityReport) -> ClaimRecord:
    wit = {"t": rep.t, "admissible": rep.admissible, "is_square": rep.is_square}
    if rep.neg_pell:
        wit["neg_pell"] = list(rep.neg_pell)
    cert = None
    if rep.p4t5 is not None:
        if rep.p4t5.solvable:
            wit["P_4t(5)"] = [list(s) for s in rep.p4t5.solutions]
        else:
            cert = rep.p4t5.certificate
    if rep.involution_class is not None:
        wit["D"] = list(rep.involution_class)
        wit["q(D)"] = rep.class_square
    return ClaimRecord(f"bcns[t={rep.t}]", PASS, "admissible" if rep.admissible else "not admissible", witness=wit, certificate=cert)


def cmd_bcns(args):
    rep = criteria.bcns_admissible(args.t)
    lat, _ = criteria.hilbert_square_ns(make_lattice([[2 * args.t]], f"<{2 * args.t}>"))
    lines = [_legend(lat), f"t = {args.t}: {'admissible' if rep.admissible else 'not admissible'}"]
    if rep.is_square:
        lines.append("  t is a perfect square")
    else:
        lines.append(f"  x^2 - {args.t} y^2 = -1: " + (f"minimal solution {rep.neg_pell}" if rep.neg_pell else "no solution"))
        if rep.p4t5.solvable:
            lines.append(f"  x^2 - {4 * args.t} y^2 = 5: solutions {list(rep.p4t5.solutions)}")
        else:
            lines.append(f"  x^2 - {4 * args.t} y^2 = 5: no solution ({_via(rep.p4t5.certificate)})")
    if rep.admissible:
        lines.append(f"  D = {_fmt(rep.involution_class, lat)}, q(D) = {rep.class_square}")
    return [_admissibility_record(rep)], lines


def cmd_bcns_scan(args):
    reports = criteria.bcns_scan(args.lo, args.hi, jobs=args.jobs)
    recs = [_admissibility_record(r) for r in reports]
    good = [r.t for r in reports if r.admissible]
    lines = [f"admissible t in {args.lo}..{args.hi} ({len(good)}):", "  " + " ".join(map(str, good))]
    return recs, lines


def cmd_double_beauville(args):
    rep = criteria.double_beauville(args.alpha)
    rec = ClaimRecord(
        f"double_beauville[alpha={args.alpha}]",
        PASS,
        "kappa is the reflection in D_alpha",
        witness={
            "D_alpha": list(rep.fixed_class),
            "q(D_alpha)": rep.fixed_square,
            "invariant_basis": [list(v) for v in rep.invariant_basis],
            "is_beauville_form": rep.is_beauville_form,
            "kappa": isometry_to_json(rep.kappa),
        },
    )
    lat = rep.lattice
    lines = [
        _legend(lat),
        f"κ = σ1 σ2 σ1 is the reflection in D = {_fmt(rep.fixed_class, lat)}",
        f"  q(D) = {rep.fixed_square}; invariant lattice Z·({_fmt(rep.invariant_basis[0], lat)})",
        f"  of the form H' − δ: {'yes' if rep.is_beauville_form else 'no'}",
    ]
    return [rec], lines


def cmd_nodal(args):
    rep = criteria.nodal_verify(args.k)
    ob = rep.obstruction
    wit = {
        "square": rep.square,
        "even_pairings": rep.even_pairings,
        "disc_length": rep.disc_length,
        "morrison": rep.morrison,
        "verdict": ob.verdict,
    }
    line_cert = rep.line.certificate
    detail = f"transcendental_obstruction: {ob.verdict}"
    rec = ClaimRecord(f"nodal[k={args.k}]", PASS, detail, witness=wit, certificate=line_cert)
    lat = rep.lattice
    lines = [
        _legend(lat),
        f"d = {_fmt(rep.square_class, lat)}, q(d) = {rep.square}",
        f"  even pairings: {rep.even_pairings}; discriminant length {rep.disc_length}",
        f"  line check: {rep.line.kind}" + (f" via {_via(line_cert)}" if line_cert else ""),
        f"  morrison embeddable: {rep.morrison}",
        f"  {detail} ({ob.reason})",
    ]
    return [rec], lines


def cmd_one_node(args):
    rep = criteria.one_node()
    lat = rep.lattice
    recs = [ClaimRecord("one_node.square", PASS if rep.square == 4 else FAIL, f"q(d) = {rep.square}", witness=list(rep.d))]
    lines = [_legend(lat), f"d = {_fmt(rep.d, lat)}, q(d) = {rep.square}"]
    for name, dec in rep.battery.decisions().items():
        if dec is None:
            recs.append(ClaimRecord(f"one_node.{name}", INCONCLUSIVE, "no witness and no certificate"))
            lines.append(f"  {name}: inconclusive")
            continue
        recs.append(_decision_record(f"one_node.{name}", dec))
        if dec.empty:
            lines.append(f"  {name}: Empty via {_via(dec.certificate)}")
        else:
            lines.append(f"  {name}: Witness {_fmt(dec.witness, lat)}")
    arith = rep.battery.arithmetic_checks_pass
    recs.append(ClaimRecord("one_node.battery", PASS if arith else FAIL, "arithmetic checks pass" if arith else "a battery check found a witness", witness={"paper_inference": rep.battery.paper_inference}))
    lines.append(f"  invariant class of the involution on NS ⊕ Zδ: {list(rep.invariant_class)}")
    return recs, lines


def cmd_verify_paper(args):
    only = None
    if args.only:
        only = [int(x) for x in args.only.split(",")]
    results = verify_paper(only)
    recs, lines = [], []
    for res in results:
        recs.extend(res.records)
        counts = {s: sum(r.status == s for r in res.records) for s in (PASS, FAIL, INCONCLUSIVE)}
        lines.append(f"[{res.status.upper():>4}] criterion {res.number:>2}: {res.title} ({counts[PASS]}/{len(res.records)} claims, {res.elapsed_ms} ms)")
        for r in res.records:
            if r.status != PASS:
                w = f"; counterexample {encode(r.to_json().get('witness'))}" if r.witness is not None else ""
                lines.append(f"       {r.status}: {r.claim_id}: {r.detail}{w}")
    return recs, lines


def _collect_certificates(doc) -> list[dict]:
    if isinstance(doc, list):
        return [c for item in doc for c in _collect_certificates(item)]
    if not isinstance(doc, dict):
        return []
    if "kind" in doc and "payload" in doc:
        return [doc]
    out = []
    for key in ("results", "certificate", "certificates"):
        if key in doc:
            out.extend(_collect_certificates(doc[key]))
    return out


def cmd_check_cert(args):
    doc = _load_json_arg(args.certificate)
    certs = _collect_certificates(doc)
    if not certs:
        raise ContractError("no certificate found in the input")
    recs = []
    for i, c in enumerate(certs):
        ok = check_certificate(c)
        recs.append(ClaimRecord(f"certificate[{i}]", PASS if ok else FAIL, f"{c.get('kind')}: {'valid' if ok else 'invalid'}"))
    bad = sum(r.status == FAIL for r in recs)
    return recs, [f"{len(certs) - bad}/{len(certs)} certificates re-verify"]


def cmd_disc_group(args):
    lat = _lattice_arg(args.gram)
    g = discriminant_group(lat)
    rec = ClaimRecord("discriminant_group", PASS, f"length {g.length}", witness={"invariant_factors": list(g.invariant_factors), "order": g.order, "length": g.length})
    factors = " ⊕ ".join(f"Z/{n}" for n in g.invariant_factors) or "0"
    return [rec], [f"A_L = {factors}  (order {g.order}, length {g.length})"]


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report document")

    parser = argparse.ArgumentParser(prog="k3lat", description="Exact lattice and Pell checks for involutions of Hilbert squares of K3 surfaces.")
    sub = parser.add_subparsers(dest="command", metavar="VERB")

    def add(name, fn, help):
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=fn)
        return p

    p = add("pell", cmd_pell, "minimal solution of x^2 - D y^2 = ±1")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-N", type=int, choices=(1, -1), required=True)

    p = add("genpell", cmd_genpell, "decide x^2 - D y^2 = N")
    p.add_argument("-D", type=int, required=True)
    p.add_argument("-N", type=int, required=True)

    p = add("represent", cmd_represent, "decide whether a rank 2 lattice represents N")
    p.add_argument("--gram", required=True, help="inline JSON or @file.json")
    p.add_argument("-N", type=int, required=True)

    p = add("reflect", cmd_reflect, "reflection in a vector of square 2 (or -2)")
    p.add_argument("--gram", required=True)
    p.add_argument("--vector", required=True, help="comma separated or JSON list")
    p.add_argument("--minus-two", action="store_true", help="hyperplane reflection in a (-2)-vector")

    p = add("compose", cmd_compose, "compose two isometries (apply the second first)")
    p.add_argument("first", help="isometry JSON, inline or @file")
    p.add_argument("second")

    p = add("bcns", cmd_bcns, "admissibility of t")
    p.add_argument("-t", type=int, required=True)

    p = add("bcns-scan", cmd_bcns_scan, "admissibility of every t in lo..hi")
    p.add_argument("lo", type=int)
    p.add_argument("hi", type=int)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all processors)")

    p = add("double-beauville", cmd_double_beauville, "the composite involution on L_alpha ⊕ <-2>")
    p.add_argument("--alpha", type=int, required=True)

    p = add("nodal", cmd_nodal, "lattice checks for the nodal family R_k")
    p.add_argument("-k", type=int, required=True)

    add("one-node", cmd_one_node, "checks for <6> ⊕ <-2>")

    p = add("verify-paper", cmd_verify_paper, "run the full claim battery")
    p.add_argument("--only", help="comma separated criterion numbers")

    p = add("check-cert", cmd_check_cert, "re-verify certificates (a certificate, a list, or a report)")
    p.add_argument("certificate", help="inline JSON or @file")

    p = add("disc-group", cmd_disc_group, "discriminant group of a lattice")
    p.add_argument("--gram", required=True)
    return parser


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "json", "command")}


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        records, lines = args.handler(args)
    except ContractError as exc:
        if args.json:
            print(render_json({"schema_version": SCHEMA_VERSION, "command": args.command, "inputs": encode(_inputs(args)), "error": {"type": type(exc).__name__, "message": str(exc)}}))
        else:
            print(f"k3lat {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    elapsed = round((time.perf_counter() - start) * 1000)
    failed = any(r.status in (FAIL, INCONCLUSIVE) for r in records)
    if args.json:
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "inputs": encode(_inputs(args)),
            "results": [r.to_json() for r in records],
            "timing_ms": elapsed,
        }
        print(render_json(doc))
    else:
        print("\n".join(lines))
        if args.command == "verify-paper":
            print(f"{'FAILED' if failed else 'all claims pass'} in {elapsed} ms")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
