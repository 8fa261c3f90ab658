from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mstable.chambers import chamber_rows, chamber_table, is_big, model_at
from mstable.errors import MStableError, NotBig

F = Fraction


def expected_table(n):
    """Hand-written case table: (lo, hi, lo_closed, hi_closed, label)."""
    rows = [(F(11), None, False, False, f"M1,{n}"), (F(10), F(11), False, True, f"M1,{n}(1)")]
    for m in range(2, n - 1):
        rows.append((F(12 - m), F(12 - m), True, True, f"SmallContraction(s={12 - m})"))
        rows.append((F(11 - m), F(12 - m), False, False, f"M1,{n}({m})*"))
    rows.append((F(12 - n), F(13 - n), False, True, f"M1,{n}({n - 1})*"))
    return rows


@pytest.mark.parametrize("n", [3, 4, 5, 7, 12])
def test_table_matches_case_list(n):
    got = [(c.lower, c.upper, c.lower_closed, c.upper_closed, c.model.label()) for c in chamber_table(n)]
    assert got == expected_table(n)


def test_n7_has_seven_chambers_and_four_walls():
    table = chamber_table(7)
    assert sum(not c.degenerate for c in table) == 7
    assert [c.lower for c in table if c.degenerate] == [10, 9, 8, 7]
    assert [c.interval() for c in table] == [
        "(11,inf)", "(10,11]", "{10}", "(9,10)", "{9}", "(8,9)", "{8}", "(7,8)", "{7}", "(6,7)", "(5,6]"]


def test_alpha_endpoints():
    for n in (5, 7, 12):
        table = [c for c in chamber_table(n) if not c.degenerate]
        assert table[0].alpha_bounds() == (F(5, 6), None)
        assert table[1].alpha_bounds() == (F(3, 4), F(5, 6))
        for c in table[2:-1]:
            m = c.model.m
            assert c.alpha_bounds() == (F(10 - m, 12), F(11 - m, 12))
        assert table[-1].alpha_bounds() == (F(11 - n, 12), F(12 - n, 12))
    assert chamber_table(5)[-1].alpha_interval() == "(1/2,7/12]"
    assert chamber_table(12)[-1].alpha_interval() == "(-1/12,0]"


def test_n3_last_chamber_and_n2():
    assert [c.interval() for c in chamber_table(3)] == ["(11,inf)", "(10,11]", "(9,10]"]
    t2 = chamber_table(2)
    assert [c.interval() for c in t2] == ["(11,inf)", "(10,11]"]
    assert t2[1].model.label() == "M1,2(1)"


def test_model_at_examples():
    assert model_at(7, 12).model.kind == "MBar"
    assert model_at(7, 11).model.label() == "M1,7(1)"
    assert model_at(7, F(19, 2)).model.label() == "M1,7(2)*"
    assert model_at(7, 9).model.label() == "SmallContraction(s=9)"
    assert model_at(7, 6).model.label() == "M1,7(6)*"
    assert model_at(7, F(11, 2)).model.label() == "M1,7(6)*"
    assert model_at(4, 9).model.label() == "M1,4(3)*"
    with pytest.raises(NotBig):
        model_at(7, 5)
    with pytest.raises(MStableError):
        chamber_table(1)
    assert is_big(7, F(51, 10)) and not is_big(7, 5)


@given(st.integers(2, 14), st.fractions(min_value=-2, max_value=14, max_denominator=6))
def test_model_at_agrees_with_table(n, s):
    if s <= 12 - n:
        with pytest.raises(NotBig):
            model_at(n, s)
        return
    found = [c for c in chamber_table(n) if c.contains(s)]
    assert len(found) == 1
    assert model_at(n, s) == found[0]


@given(st.integers(2, 14))
def test_chambers_tile_the_big_range(n):
    table = chamber_table(n)
    for upper, lower in zip(table, table[1:]):
        assert lower.upper == upper.lower
        assert lower.upper_closed != upper.lower_closed
    assert table[-1].lower == 12 - n and not table[-1].lower_closed


def test_csv_rows():
    rows = chamber_rows(7)
    assert len(rows) == 11
    assert rows[1] == {"s_lo": "10", "s_lo_closed": "false", "s_hi": "11", "s_hi_closed": "true",
                       "alpha_lo": "3/4", "alpha_hi": "5/6", "model": "M1,7(1)"}
