import itertools

import numpy as np
import pytest

from surfcol.catalog import CatalogEntry, bundled_tribrackets, load_catalog, run_table, table_entries
from surfcol.systems import EquationSystem, count_colorings, reverse_orientation
from surfcol.tribracket import Tribracket

ENTRIES = {e.name: e for e in load_catalog()}


def test_catalog_contents():
    names = [e.name for e in table_entries()]
    assert names == ["0_1", "8_1", "-8_1", "9_1", "-9_1", "10_1", "-10_1", "10_2", "-10_2", "10_3", "-10_3"]
    assert {"8^{1,1}_1", "10^{1,1}_1"} <= set(ENTRIES)
    assert set(bundled_tribrackets()) == {"X3", "X4", "Dehn(Z2)", "Dehn(Z3)", "Dehn(Z4)", "Dehn(Z5)"}


def test_entry_8_1():
    e = ENTRIES["8_1"]
    s = e.system
    idx = {v: i for i, v in enumerate(s.names())}
    want = {tuple(idx[c] for c in w) for w in ("abce", "acde", "adbe")}
    assert s.var_count == 5 and set(s.tri_eqs) == want
    assert e.expected == {"X3": 15}


def test_entry_10_2():
    s = ENTRIES["10_2"].system
    assert s.var_count == 10 and len(s.tri_eqs) == 11
    assert ENTRIES["10_2"].expected["X3"] == ENTRIES["-10_2"].expected["X3"] == 37


def test_entry_9_1_uses_eight_variables():
    assert ENTRIES["9_1"].system.names() == tuple("abcdefgh")


@pytest.mark.parametrize("name", [n for n, e in ENTRIES.items() if e.reverse_of])
def test_reversed_rows_are_reverse_orientation(name):
    e = ENTRIES[name]
    fwd = ENTRIES[e.reverse_of].system
    assert reverse_orientation(fwd).constraint_multiset() == e.system.constraint_multiset()


def _bc_fixed(t):
    return sum(t.eval(a, b, c) == t.eval(a, c, b) for a, b, c in itertools.product(range(t.size), repeat=3))


def test_torus_links_count_symmetric_triples(x3, valid3, valid4):
    for t in [x3] + valid3 + valid4[::5]:
        n = _bc_fixed(t)
        assert count_colorings(ENTRIES["8^{1,1}_1"].system, t)[0] == n
        assert count_colorings(ENTRIES["10^{1,1}_1"].system, t)[0] == n


def test_torus_link_x3_value(x3):
    # 27-triple brute force is the oracle
    assert _bc_fixed(x3) == 21
    assert count_colorings(ENTRIES["8^{1,1}_1"].system, x3)[0] == 21


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dehn_table(n, dehn_cyclic):
    report = run_table(dehn_cyclic[n])
    assert report.ok, report.to_text()
    for row, e in zip(report.rows, load_catalog()):
        assert row.count == n ** (e.components + 1)


def test_size_one_table(dehn_cyclic):
    report = run_table(dehn_cyclic[1])
    assert all(r.count == 1 for r in report.rows)


def test_x3_table_rows(x3):
    report = run_table(x3, "X3")
    assert report.ok, report.to_text()
    assert [r.count for r in report.rows[:11]] == [9, 15, 15, 25, 21, 13, 13, 37, 37, 14, 10]
    assert all(r.reverse_matches is not False for r in report.rows)


def test_shifted_reading_disagrees(x3_shift):
    # reading the listed values as v-1 instead of v mod 3 changes four rows
    report = run_table(x3_shift, "X3")
    assert set(report.mismatches()) == {"10_1", "-10_1", "10_3", "-10_3"}


def test_report_rendering(dehn_cyclic):
    report = run_table(dehn_cyclic[3])
    d = report.as_dict()
    assert d["ok"] and d["mismatches"] == [] and len(d["rows"]) == 13
    text = report.to_text()
    assert text.splitlines()[0] == "tribracket Dehn(Z3)"
    assert "MISMATCH" not in text


def test_mismatch_is_reported(x3):
    corrupt = Tribracket(np.roll(x3.tensor, 1, axis=0), name="X3")
    report = run_table(corrupt, "X3")
    assert not report.ok and report.mismatches()


def test_custom_entries(x4):
    e = CatalogEntry("pt", EquationSystem(1), 0, expected={"X4": 5})
    report = run_table(x4, "X4", [e])
    assert report.rows[0].count == 4 and not report.ok
