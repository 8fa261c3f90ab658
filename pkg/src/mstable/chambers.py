"""Mori chambers of the slice spanned by lambda and psi - Delta.

For ``D(s) = s lambda + psi - Delta`` on M_{1,n}, ``s`` ranges over
``(12 - n, infinity)`` (the big range) and the model ``Proj R(D(s))`` is

    (11, oo)          M_{1,n}
    (10, 11]          M_{1,n}(1)
    (11-m, 12-m)      M_{1,n}(m)^*,   2 <= m <= n-2
    (12-n, 13-n]      M_{1,n}(n-1)^*

with the integers ``10, 9, ..., 14-n`` left over as zero-width chambers
(the small contractions of the flips).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .contraction import alpha_of_s
from .errors import MStableError, NotBig
from .picard import as_rational, format_rational


@dataclass(frozen=True)
class Model:
    kind: str  # MBar | MStable | MStableNormalized | SmallContraction
    n: int
    m: int | None = None
    s: Fraction | None = None

    def label(self) -> str:
        if self.kind == "MBar":
            return f"M1,{self.n}"
        if self.kind == "MStable":
            return f"M1,{self.n}({self.m})"
        if self.kind == "MStableNormalized":
            return f"M1,{self.n}({self.m})*"
        return f"SmallContraction(s={format_rational(self.s)})"

    def short(self) -> str:
        if self.kind == "MBar":
            return "MBar"
        if self.kind == "SmallContraction":
            return "small"
        return f"m={self.m}"


@dataclass(frozen=True)
class Chamber:
    lower: Fraction | None  # None = -infinity
    upper: Fraction | None  # None = +infinity
    lower_closed: bool
    upper_closed: bool
    model: Model

    @property
    def degenerate(self) -> bool:
        return self.lower is not None and self.lower == self.upper

    def contains(self, s) -> bool:
        s = as_rational(s)
        if self.lower is not None:
            if s < self.lower or (s == self.lower and not self.lower_closed):
                return False
        if self.upper is not None:
            if s > self.upper or (s == self.upper and not self.upper_closed):
                return False
        return True

    def alpha_bounds(self) -> tuple[Fraction | None, Fraction | None]:
        lo = None if self.lower is None else alpha_of_s(self.lower)
        hi = None if self.upper is None else alpha_of_s(self.upper)
        return lo, hi

    def interval(self) -> str:
        return _bracket(self.lower, self.upper, self.lower_closed, self.upper_closed)

    def alpha_interval(self) -> str:
        lo, hi = self.alpha_bounds()
        return _bracket(lo, hi, self.lower_closed, self.upper_closed)

    def midpoint(self) -> Fraction:
        if self.upper is None:
            return self.lower + 1
        if self.degenerate:
            return self.lower
        return (self.lower + self.upper) / 2


def _fmt(x: Fraction | None, sign: str) -> str:
    return f"{sign}inf" if x is None else format_rational(x)


def _bracket(lo, hi, lo_closed, hi_closed) -> str:
    if lo is not None and lo == hi:
        return "{" + format_rational(lo) + "}"
    left = "[" if lo_closed else "("
    right = "]" if hi_closed else ")"
    return f"{left}{_fmt(lo, '-')},{_fmt(hi, '')}{right}"


def is_big(n: int, s) -> bool:
    if n < 2:
        raise MStableError("need n >= 2", code="INVALID_SPACE")
    return as_rational(s) > 12 - n


def model_at(n: int, s) -> Chamber:
    """The chamber containing ``s``, computed directly from the case table."""
    s = as_rational(s)
    if not is_big(n, s):
        raise NotBig(f"D({format_rational(s)}) is not big on M1,{n} (need s > {12 - n})")
    F = Fraction
    if s > 11:
        return Chamber(F(11), None, False, False, Model("MBar", n))
    if s > 10:
        return Chamber(F(10), F(11), False, True, Model("MStable", n, 1))
    if s <= 13 - n:
        return _last_chamber(n)
    if s.denominator == 1:
        return Chamber(s, s, True, True, Model("SmallContraction", n, s=s))
    m = 11 - math.floor(s)
    return Chamber(F(11 - m), F(12 - m), False, False, Model("MStableNormalized", n, m))


def _last_chamber(n: int) -> Chamber:
    m = n - 1
    kind = "MStable" if m == 1 else "MStableNormalized"
    return Chamber(Fraction(12 - n), Fraction(13 - n), False, True, Model(kind, n, m))


def chamber_table(n: int) -> list[Chamber]:
    """All chambers of the big range, ordered by descending ``s``."""
    if n < 2:
        raise MStableError("need n >= 2", code="INVALID_SPACE")
    F = Fraction
    table = [Chamber(F(11), None, False, False, Model("MBar", n))]
    if n == 2:
        table.append(_last_chamber(n))
        return table
    table.append(Chamber(F(10), F(11), False, True, Model("MStable", n, 1)))
    for m in range(2, n - 1):
        wall = F(12 - m)
        table.append(Chamber(wall, wall, True, True, Model("SmallContraction", n, s=wall)))
        table.append(Chamber(F(11 - m), wall, False, False, Model("MStableNormalized", n, m)))
    table.append(_last_chamber(n))
    return table


CSV_COLUMNS = ("s_lo", "s_lo_closed", "s_hi", "s_hi_closed", "alpha_lo", "alpha_hi", "model")


def chamber_rows(n: int) -> list[dict]:
    rows = []
    for ch in chamber_table(n):
        a_lo, a_hi = ch.alpha_bounds()
        rows.append({
            "s_lo": _fmt(ch.lower, "-"),
            "s_lo_closed": str(ch.lower_closed).lower(),
            "s_hi": _fmt(ch.upper, ""),
            "s_hi_closed": str(ch.upper_closed).lower(),
            "alpha_lo": _fmt(a_lo, "-"),
            "alpha_hi": _fmt(a_hi, ""),
            "model": ch.model.label(),
        })
    return rows
