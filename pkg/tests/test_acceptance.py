"""Acceptance criteria, one test each, at their stated scales.

Every test prints a single "criterion N ...: PASS|FAIL" line (shown even
under output capture).  Run directly with `python3 tests/test_acceptance.py`
for just the summary lines.
"""

import time

import pytest

from qradial.report import VerificationReport
from qradial.suites import (
    _closed_form,
    _eigen,
    run_suite,
)


def _merge(name, *reports):
    rep = VerificationReport(name)
    for r in reports:
        rep.extend(r, prefix=f"[{r.suite}] ")
    return rep.finish()


def _criterion_1():
    return run_suite("daha-relations"), 60


def _criterion_2():
    return _merge("macdonald-eigen", _eigen(2, 5), _eigen(3, 3)), 300


def _criterion_3():
    return _merge("closed-form", _closed_form(2, 4), _closed_form(3, 4)), None


def _criterion_4():
    return run_suite("yang-baxter"), 60


def _criterion_5():
    return _merge("weyl-moment", run_suite("weyl"), run_suite("moment")), 300


def _criterion_6():
    return run_suite("pbw", n=2, max_total_deg=4), 600


def _criterion_7():
    return _merge("traces", run_suite("traces"), run_suite("degeneration")), None


def _criterion_8():
    return run_suite("ek-ratio"), 900


def _criterion_9():
    return run_suite("radial-dictionary"), None


def _criterion_10():
    return run_suite("appendix"), None


CRITERIA = [
    (1, "DAHA relations n=2,3", _criterion_1),
    (2, "Macdonald eigen-suite", _criterion_2),
    (3, "closed-form vs composed operators", _criterion_3),
    (4, "R-matrix suite", _criterion_4),
    (5, "Weyl/moment suite", _criterion_5),
    (6, "PBW counts", _criterion_6),
    (7, "quantum-trace suite", _criterion_7),
    (8, "intertwiner trace ratio", _criterion_8),
    (9, "radial dictionary", _criterion_9),
    (10, "appendix suite", _criterion_10),
]


def evaluate(number, label, fn):
    start = time.perf_counter()
    rep, limit = fn()
    elapsed = time.perf_counter() - start
    ok = rep.passed and (limit is None or elapsed < limit)
    budget = f" / {limit}s" if limit else ""
    line = (f"criterion {number} {label}: {'PASS' if ok else 'FAIL'} "
            f"({len(rep.checks)} checks, {len(rep.failures)} failed, {elapsed:.1f}s{budget})")
    return ok, line, rep


@pytest.mark.parametrize("number,label,fn", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(number, label, fn, capsys):
    ok, line, rep = evaluate(number, label, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, rep.summary()


if __name__ == "__main__":
    for number, label, fn in CRITERIA:
        print(evaluate(number, label, fn)[1])
