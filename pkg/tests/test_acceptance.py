"""Acceptance criteria 1-10 at reference-grade settings.

Each test prints one ``[PASS]``/``[FAIL]`` line for its criterion (collected
again in the pytest terminal summary). Running this file directly prints the
same lines without pytest::

    python tests/test_acceptance.py
"""

import functools
import sys

import pytest

from spps_ist.validation import (validate_example_1, validate_example_2, validate_example_3,
                                 validate_example_4, validate_properties)

REPORT = []


@functools.lru_cache(maxsize=None)
def results(source):
    runners = {1: validate_example_1, 2: validate_example_2, 3: validate_example_3,
               4: validate_example_4, "properties": validate_properties}
    return tuple(runners[source]())


def criterion_line(number, checks):
    ok = bool(checks) and all(c.passed for c in checks)
    parts = "; ".join(f"{c.name} {c.measured:.3g} (bound {c.tolerance:.3g})"
                      + ("" if c.passed else " FAILED") for c in checks)
    return ok, f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {parts}"


def check(number, *sources):
    checks = [c for s in sources for c in results(s) if c.criterion == number]
    ok, line = criterion_line(number, checks)
    REPORT.append(line)
    print(line)
    return ok, line


def test_criterion_1_direct_accuracy_example_1():
    ok, line = check(1, 1)
    assert ok, line


def test_criterion_2_eigenvalue_and_norming_constant_example_1():
    ok, line = check(2, 1)
    assert ok, line


def test_criterion_3_soliton_eigenvalue():
    ok, line = check(3, 2)
    assert ok, line


def test_criterion_4_example_3_eigenvalues():
    ok, line = check(4, 3)
    assert ok, line


@pytest.mark.slow
def test_criterion_5_unitarity():
    ok, line = check(5, 1, 2, 3, 4)
    assert ok, line


def test_criterion_6_soliton_round_trip():
    ok, line = check(6, 2)
    assert ok, line


def test_criterion_7_recovery_examples_1_and_3():
    ok, line = check(7, 1, 3)
    assert ok, line


@pytest.mark.slow
def test_criterion_8_wronskian_indicator_example_4():
    ok, line = check(8, 4)
    assert ok, line


def test_criterion_9_property_suite():
    ok, line = check(9, "properties")
    assert ok, line


def test_criterion_10_jost_oracle_equivalence():
    ok, line = check(10, 2)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for n, sources in [(1, (1,)), (2, (1,)), (3, (2,)), (4, (3,)), (5, (1, 2, 3, 4)),
                       (6, (2,)), (7, (1, 3)), (8, (4,)), (9, ("properties",)), (10, (2,))]:
        failed += not check(n, *sources)[0]
    sys.exit(1 if failed else 0)
