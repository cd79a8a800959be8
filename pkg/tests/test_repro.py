import pytest

from entgauge import repro
from entgauge.repro import ReproCase, format_table


def test_case_modes():
    assert ReproCase("a", "", 1.0, 1.0 + 1e-10, 1e-9, "reported").passed
    assert not ReproCase("a", "", 1.0, 1.1, 1e-9, "reported").passed
    assert ReproCase("b", "", 2.0, (1.9, 2.1), 0.0, "reported", "bracket").passed
    assert not ReproCase("b", "", 2.0, (2.1, 2.2), 0.0, "reported", "bracket").passed
    assert ReproCase("c", "", 0.0, 1e-12, 1e-9, "derived", "max").passed
    assert not ReproCase("d", "", 2.0, 1.5, 1e-6, "reported", "min").passed
    assert ReproCase("e", "", "entangled", "entangled", 0, "reported").passed


def test_table_lists_every_row():
    rows = [ReproCase("x.one", "d", 1.0, 1.0, 1e-9, "reported"),
            ReproCase("x.two", "d", 2.0, (1.5, 2.5), 0.0, "derived", "bracket")]
    table = format_table(rows)
    lines = table.splitlines()
    assert lines[0].split()[:2] == ["case", "expected"]
    assert len(lines) == 4
    assert "x.two" in lines[3] and "[1.5, 2.5]" in lines[3]


@pytest.mark.parametrize("case", ["singlet", "c3_wedge", "tracial", "wedge_bound", "mu"])
def test_cheap_cases_pass(case):
    rows = repro.run(case, seed=0)
    assert rows
    assert all(r.passed for r in rows), format_table(rows)
    assert all(r.source in ("reported", "derived") for r in rows)


def test_rank_l_small():
    rows = repro.run("rank_l", seed=0, l=2, samples=500)
    assert all(r.passed for r in rows), format_table(rows)


def test_runs_are_deterministic():
    a = [r.observed for r in repro.run("c3_wedge", seed=3)]
    b = [r.observed for r in repro.run("c3_wedge", seed=3)]
    assert a == b


def test_unknown_case():
    with pytest.raises(KeyError):
        repro.run("nonexistent")
