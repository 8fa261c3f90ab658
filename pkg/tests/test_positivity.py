from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mstable.contraction import ContractionMap, pushforward
from mstable.errors import InvalidSpace, SpaceMismatch
from mstable.picard import Ds, Lambda, Space, expand
from mstable.positivity import (
    Verdict,
    contraction_certificate,
    evaluate,
    intersect,
    psi_minus_delta0,
    verify_ample_range,
    verify_chamber_ampleness,
)
from mstable.strata import bt_curve, curve_library, esigma_fiber_curve, Partition

from .test_picard import classes


@st.composite
def n_m(draw, lo=2, hi=8):
    n = draw(st.integers(lo, hi))
    return n, draw(st.integers(1, n - 1))


def open_interval_rationals(m):
    return st.integers(1, 999).map(lambda k: m + Fraction(k, 1000))


def test_intersect_examples():
    b = esigma_fiber_curve(3, 2, Partition.of([1, 2], [3]), formal=True)
    assert intersect(psi_minus_delta0(Space(3), Fraction(5, 2)), b) == Fraction(1, 2)
    assert intersect(expand(Space(5), Lambda), bt_curve(5, [1, 2])) == 1
    with pytest.raises(SpaceMismatch):
        intersect(expand(Space(5, 1), Lambda), bt_curve(5, [1, 2]))


@given(st.data())
def test_intersect_is_bilinear(data):
    n, m = data.draw(n_m(hi=6))
    sp = Space(n, m)
    a, c = data.draw(classes(sp)), data.draw(classes(sp))
    q = data.draw(st.fractions(min_value=-9, max_value=9, max_denominator=9))
    for b in curve_library(n, m):
        assert intersect(a + c.scale(q), b) == intersect(a, b) + q * intersect(c, b)


def test_boundary_divisor_vanishes_at_the_end():
    for n in range(3, 9):
        phi = ContractionMap.between(n, 0, n - 1)
        pushed = pushforward(phi, expand(phi.source, Ds(12 - n)))
        assert pushed.is_zero()
        assert all(v == 0 for _, v in evaluate(pushed, curve_library(n, n - 1)).evaluations)


def test_range_examples():
    mid = verify_ample_range(5, 3, Fraction(7, 2))
    assert mid.verdict is Verdict.ALL_POSITIVE and mid.min_degree == Fraction(1, 2)
    assert any(name.startswith("E[") and name.count("|") == 2 for name in mid.attaining())
    low = verify_ample_range(5, 3, 3)
    assert low.min_degree == 0 and low.verdict is Verdict.ALL_NONNEGATIVE
    assert low.witness.count("|") == 2
    high = verify_ample_range(5, 3, Fraction(9, 2))
    assert high.verdict is Verdict.FAILS and high.min_degree == Fraction(-1, 2)
    assert high.witness.startswith("ET[")
    with pytest.raises(InvalidSpace):
        verify_ample_range(5, 5, 3)


@given(st.data())
def test_open_interval_is_positive(data):
    n, m = data.draw(n_m())
    s = data.draw(open_interval_rationals(m))
    rep = verify_ample_range(n, m, s)
    assert rep.verdict is Verdict.ALL_POSITIVE


@pytest.mark.parametrize("n", range(2, 9))
def test_endpoints(n):
    for m in range(1, n):
        top = verify_ample_range(n, m, m + 1)
        assert top.min_degree == 0 and top.verdict is Verdict.ALL_NONNEGATIVE
        bottom = verify_ample_range(n, m, m)
        if 2 <= m <= n - 2:
            assert bottom.min_degree == 0
            assert bottom.witness.startswith("E[") and bottom.witness.count("|") == m - 1
        else:
            # m = 1: the pushforward of D(11) stays ample on the 1-stable space;
            # m = n - 1: only lambda survives and the class is lambda itself
            assert bottom.min_degree == 1 and bottom.verdict is Verdict.ALL_POSITIVE


def test_chamber_ampleness_examples():
    summary = verify_chamber_ampleness(7)
    by_m = {c.m: c for c in summary.checks}
    for m, s, t in ((2, Fraction(19, 2), Fraction(5, 2)), (6, Fraction(11, 2), Fraction(13, 2)),
                    (1, Fraction(21, 2), Fraction(3, 2))):
        c = by_m[m]
        assert (c.s, c.parameter) == (s, t)
        assert c.identity_holds and c.midpoint.verdict is Verdict.ALL_POSITIVE
        assert c.upper_endpoint.min_degree == 0
    assert summary.ok and len(summary.lines()) == 6
    with pytest.raises(InvalidSpace):
        verify_chamber_ampleness(1)


@pytest.mark.parametrize("n", range(3, 8))
def test_contraction_certificate(n):
    for m in range(1, n):
        cert = contraction_certificate(n, m)
        assert set(len(T) for T in cert) == set(range(n - m + 1, n + 1))
        assert all(v == 0 for vs in cert.values() for v in vs)


def test_report_json():
    rep = verify_ample_range(4, 2, 3)
    data = rep.to_json()
    assert data["verdict"] == "ALL_NONNEGATIVE" and data["min_degree"] == "0"
    assert [tuple(x) for x in data["evaluations"]][-1][0] == "pencil"
    assert Verdict.FAILS.exit_code == 2 and Verdict.ALL_POSITIVE.exit_code == 0
