"""One test per acceptance criterion, each driving the matching repro suite.

Every check the suite records must hold, including its wall-clock budget.
A PASS/FAIL line per criterion goes straight to the terminal.
"""

import pytest

from dimkit.repro import LIMITS, run_suite

CRITERIA = [
    (1, "thresholds", "threshold class: Edim = n, Sdim = 2, Tdim = n for n in 2..12"),
    (2, "parity", "parities: Edim = Tdim = d, Forster = 2^(d/2) for d in 1..4"),
    (3, "relu", "ReLU: dimension-3 certificate and star witness of length >= 10"),
    (4, "linear-lb", "linear lower-bound witnesses verify exactly"),
    (5, "bounds", "upper-bound formulas and the ratio lemma: zero violations"),
    (6, "equivalence", "sandwich and Ramsey extraction on 1000 tables plus fixtures"),
    (7, "counterexample", "scale counterexample gives (N, 2, 1)"),
    (8, "thm53", "N = 16 separation certified, expectation bound over 200 seeds"),
    (9, "thm55", "N = 64 repair pipeline: Edim_1 <= 4, fewer flips than +1 entries"),
    (10, "oracles", "pruned searches and power iteration match their oracles"),
]


@pytest.fixture
def report_line(capsys):
    def emit(number, name, description, rep):
        status = "PASS" if rep.ok else "FAIL"
        line = f"{status} criterion {number} ({name}, {rep.wall_time:.1f} s / {LIMITS[name]} s): {description}"
        if not rep.ok:
            label, detail = rep.first_failure
            line += f" -- first failure: {label} [{detail}]"
        with capsys.disabled():
            print("\n" + line)
    return emit


@pytest.mark.parametrize(
    "number,name,description",
    [pytest.param(*c, id=f"criterion{c[0]}-{c[1]}",
                  marks=[pytest.mark.slow] if c[1] == "oracles" else [])
     for c in CRITERIA])
def test_criterion(number, name, description, report_line):
    rep = run_suite(name, seed=0)
    report_line(number, name, description, rep)
    failed = [(label, detail) for label, ok, detail in rep.checks if not ok]
    assert not failed, f"criterion {number}: {failed}"


def test_random_table_sandwich_suite():
    rep = run_suite("prop23", seed=0)
    assert rep.ok, rep.first_failure
