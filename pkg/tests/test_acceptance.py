"""Acceptance gate: the ten criteria of the verification battery.

Each criterion is one test; a summary line per criterion is printed at the
end of the pytest run (and by ``python tests/test_acceptance.py``).
"""

import time

import pytest

from k3lat.certificates import check_certificate
from k3lat.verify import CRITERIA, PASS, verify_paper

TIME_LIMIT_S = 60


@pytest.fixture(scope="module")
def battery():
    start = time.perf_counter()
    results = {r.number: r for r in verify_paper()}
    return results, time.perf_counter() - start


def line(result) -> str:
    bad = [r for r in result.records if r.status != PASS]
    head = f"criterion {result.number:>2} [{result.status.upper()}] {result.title}: {len(result.records) - len(bad)}/{len(result.records)} claims"
    if bad:
        head += f"; first failure {bad[0].claim_id}: {bad[0].detail}"
    return head


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, battery, acceptance_log):
    results, _ = battery
    result = results[number]
    acceptance_log[number] = line(result)
    failures = [(r.claim_id, r.detail) for r in result.records if r.status != PASS]
    assert not failures


def test_runtime_under_limit(battery):
    _, elapsed = battery
    assert elapsed < TIME_LIMIT_S


def test_every_emitted_certificate_rechecks(battery):
    results, _ = battery
    certs = [c.to_json() for res in results.values() for r in res.records for c in r.all_certificates()]
    assert len(certs) > 1000
    assert all(check_certificate(c) for c in certs)


if __name__ == "__main__":
    for res in verify_paper():
        print(line(res))
