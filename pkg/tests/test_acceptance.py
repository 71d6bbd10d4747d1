"""Acceptance criteria 1-12 at full scale, one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v -s`` (about a minute).
"""
import subprocess
import sys

import pytest

from holoset.acceptance import CRITERIA, run_criterion


@pytest.fixture(scope="module")
def report():
    lines = []
    yield lines
    print("\n" + "\n".join(lines))


def _reproduce_quick():
    cmd = [sys.executable, "-m", "holoset.cli", "reproduce", "--quick", "--seed", "0"]
    return subprocess.run(cmd, capture_output=True, check=False).stdout


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, report, capsys):
    res = run_criterion(number, seed=0, scale=1.0)
    if number == 12:
        # byte-identical reports from two separate `reproduce` processes
        a, b = _reproduce_quick(), _reproduce_quick()
        res.details["reproduce_bytes"] = len(a)
        res.details["reproduce_identical"] = bool(a) and a == b
        res.passed = res.passed and res.details["reproduce_identical"]
    with capsys.disabled():
        print("\n" + res.line(), flush=True)
    report.append(res.line())
    assert res.passed, res.details
