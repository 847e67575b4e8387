"""Acceptance suite: one PASS/FAIL line per criterion at the pinned tolerances."""
import pytest

from qtruth import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: f"{c.__name__}")
def test_acceptance_criterion(criterion):
    res = criterion(acceptance.DEFAULT_SEED)
    print(res.line())
    assert res.passed, res.line()


def test_acceptance_summary(capsys):
    results = acceptance.run_all()
    with capsys.disabled():
        print()
        for r in results:
            print(r.line())
    assert [r.number for r in results] == list(range(1, 11))
