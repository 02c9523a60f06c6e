"""Acceptance criteria 1-11, one test each.

Every test prints a single ``criterion N [PASS/FAIL] ...`` line (shown even
under output capture) and then asserts the verdict.  Where a cheap
independent check exists it is asserted as well, so a test does not only
trust the suite module that also backs ``blochlab suite``.
"""

import json
import subprocess
import sys

import pytest

from blochlab import suite
from blochlab.bloch import context, special_chain
from blochlab.suite import DEFAULT_CORPUS, Verdict, ring_checks

from conftest import ring


def report(capsys, v: Verdict) -> None:
    with capsys.disabled():
        print("\n" + v.line())
    assert v.passed, json.dumps(v.detail, sort_keys=True, default=str)


@pytest.fixture(scope="module")
def per_ring():
    return {spec: ring_checks(spec) for spec in DEFAULT_CORPUS}


def corpus_verdict(number, title, per_ring, ok_fn) -> Verdict:
    return Verdict(number, title, all(ok_fn(r) for r in per_ring.values()),
                   {s: r for s, r in per_ring.items()})


def test_criterion_1(capsys):
    R = ring("GF(2)")
    ctx = context(R)
    w = special_chain(R, "W", (R.one, R.zero, "inf")).chain
    # independent: 0, W, 2W are pairwise distinct and 3W = 0, so W generates a group of order 3
    g = ctx.rp.group
    multiples = [g.canonical(ctx.rp.element({k: n * x for k, x in w.items()})) for n in range(4)]
    assert len(set(multiples[:3])) == 3 and multiples[3] == multiples[0]
    assert g.order() == 3
    report(capsys, suite.criterion_1())


def test_criterion_2(capsys):
    report(capsys, suite.criterion_2())


def test_criterion_3(capsys):
    report(capsys, suite.criterion_3())


def test_criterion_4(capsys):
    # Sym^2 of a cyclic group of order 26 is cyclic of order 26; -1 = g^13, so (-1)o(-1) = 169 (gog)
    assert (13 * 13) % 26 == 13 and (2 * 169) % 26 == 0
    report(capsys, suite.criterion_4())


def test_criterion_5(capsys, per_ring):
    v = corpus_verdict(5, "identity battery passes on the corpus", per_ring,
                       lambda r: r["battery_total"] > 0 and not r["battery_failures"])
    report(capsys, v)


def test_criterion_6(capsys):
    report(capsys, suite.criterion_6())


def test_criterion_7(capsys):
    report(capsys, suite.criterion_7())


def test_criterion_8(capsys, per_ring):
    v = corpus_verdict(8, "K_i structure and the qRP short exact sequence", per_ring, suite._k_ok)
    report(capsys, v)


def test_criterion_9(capsys):
    report(capsys, suite.criterion_9())


def test_criterion_10(capsys):
    report(capsys, suite.criterion_10())


def test_criterion_11(capsys):
    def run(threads):
        cmd = [sys.executable, "-m", "blochlab", "suite", "--threads", str(threads)]
        return subprocess.run(cmd, capture_output=True, timeout=900).stdout

    one, four = run(1), run(4)
    body = json.loads(one)
    in_process = suite.criterion_11(DEFAULT_CORPUS, 4)
    v = Verdict(11, "two suite runs with different thread counts give byte-identical JSON",
                one == four and body["ok"] and in_process.passed,
                {"bytes": len(one), "in_process": in_process.detail})
    report(capsys, v)
