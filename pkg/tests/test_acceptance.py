"""Runs each acceptance criterion and prints one PASS/FAIL line per criterion."""

import pytest

from ordercraft.acceptance import CHECKS, run


@pytest.mark.parametrize("ident", [c[0] for c in CHECKS], ids=[f"criterion_{c[0]:02d}" for c in CHECKS])
def test_criterion(ident, capsys):
    outcome = run(ident)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail
