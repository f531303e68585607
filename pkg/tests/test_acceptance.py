"""The acceptance gate: every criterion at its stated parameters, full level.

Each test prints one pass/fail line; run with -s to see them inline.
"""

import pytest

from pregeom.acceptance import CRITERIA


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[name for name, _ in CRITERIA])
def test_criterion(name, fn):
    ok, detail = fn("full")
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"
