import copy
import json

import pytest

from k3lat import binform, pell
from k3lat.certificates import Certificate, check_certificate, decode, encode
from k3lat.lattice import make_lattice


def pell_cert(D, N):
    out = pell.genpell(D, N)
    assert not out.solvable
    return out.certificate


def form_cert(gram, N):
    dec = binform.represents(make_lattice(gram), N)
    assert dec.empty
    return dec.certificate


# one instance of every certificate kind, found by scanning small cases
CASES = {
    "pell-modular": lambda: pell_cert(2, -30),
    "pell-convergent": lambda: pell_cert(34, -4),
    "pell-class-window": lambda: pell_cert(34, -16),
    "pell-class-lmm": lambda: pell_cert(149, -27),
    "form-modular": lambda: form_cert([[-20, -12], [-12, -20]], -10),
    "form-finite": lambda: form_cert([[-20, -12], [-12, -20]], -4),
    "form-nonsquare-disc": lambda: form_cert([[-20, -12], [-12, -20]], 0),
    "form-congruence": lambda: form_cert([[-20, -11], [-11, 10]], -6),
    "exact": lambda: binform.constrained_class(make_lattice([[6, 0], [0, -2]]), make_lattice([[6, 0], [0, -2]]).vector(1, -1), -2, 0).certificate,
}

EXPECTED_KIND = {
    "pell-modular": "ModularObstruction",
    "pell-convergent": "ConvergentExhaustion",
    "pell-class-window": "ClassExhaustion",
    "pell-class-lmm": "ClassExhaustion",
    "form-modular": "ModularObstruction",
    "form-finite": "FiniteExhaustion",
    "form-nonsquare-disc": "NonSquareDiscriminant",
    "form-congruence": "CongruenceExhaustion",
    "exact": "ExactContradiction",
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_kind_and_recheck(name):
    cert = CASES[name]()
    assert cert.kind == EXPECTED_KIND[name]
    assert check_certificate(cert)
    doc = json.loads(json.dumps(cert.to_json()))
    assert check_certificate(doc)
    assert Certificate.from_json(doc) == cert


def _targets(payload):
    """Paths to integer-valued fields that define the claimed equation."""
    for key in ("N", "D", "a", "b"):
        if key in payload:
            yield (key,)
    if "equation" in payload:
        for key in ("N", "D", "b"):
            if key in payload["equation"]:
                yield ("equation", key)
    if "gram" in payload:
        yield ("gram", 0, 0)


def _bump(payload, path):
    node = payload
    for p in path[:-1]:
        node = node[p]
    node[path[-1]] = int(node[path[-1]]) + 2


@pytest.mark.parametrize("name", sorted(CASES))
def test_tampered_fields_rejected_or_still_true(name):
    """A changed payload either fails to re-verify or still describes an
    unsolvable problem; the latter is checked by brute force."""
    cert = CASES[name]()
    for path in _targets(cert.payload):
        payload = copy.deepcopy(cert.payload)
        _bump(payload, path)
        if not check_certificate(Certificate(cert.kind, payload)):
            continue
        # accepted: the altered statement must be genuinely unsolvable
        if "equation" in payload and payload["equation"].get("type") == "pell":
            eq = payload["equation"]
            assert pell.pell_brute(eq["D"], eq["N"], 2000) is None
        elif cert.kind in ("ConvergentExhaustion", "ClassExhaustion"):
            assert pell.pell_brute(payload["D"], payload["N"], 2000) is None
        elif "gram" in payload and "N" in payload:
            lat = make_lattice(payload["gram"])
            assert binform.brute_oracle(lat, payload["N"], bound=300) is None


def test_unknown_kind_and_garbage():
    assert not check_certificate({"kind": "Nonsense", "payload": {}})
    assert not check_certificate({"payload": {}})
    assert not check_certificate({"kind": "ModularObstruction", "payload": {"modulus": "x"}})


def test_encode_decode_round_trip():
    obj = {"a": [1, -2, 10**30], "b": {"c": 3}, "flag": True, "s": "text"}
    assert decode(encode(obj)) == obj
    assert encode(10**30) == str(10**30)
