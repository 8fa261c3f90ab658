"""Divisor classes on M_{1,n} and its normalized m-stable models.

Pic_Q of M_{1,n}(m)^* is freely generated by ``lambda`` and the boundary
divisors ``delta_{0,S}`` with ``2 <= |S| <= n - m``; ``m = 0`` is the
Deligne-Mumford space itself.  Everything here is exact: coefficients are
:class:`fractions.Fraction` and classes are kept in canonical sparse form so
that ``==`` is structural equality.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import (
    EnumerationCapExceeded,
    InvalidIndex,
    InvalidMarkSet,
    InvalidSpace,
    MStableError,
    SpaceMismatch,
)

MAX_N = 62
DEFAULT_ENUM_CAP = 16


def enum_cap() -> int:
    """Largest ``n`` for which subset enumeration is allowed."""
    raw = os.environ.get("MSTABLE_ENUM_CAP")
    if raw is None:
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        raise MStableError("MSTABLE_ENUM_CAP must be >= 1", code="USAGE")
    return cap


# -- rationals -------------------------------------------------------------

def as_rational(x) -> Fraction:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions and strings such as ``"13/2"``, ``"-4"`` or
    ``"6.5"`` (decimal strings are read exactly).  Floats are refused.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise MStableError(f"cannot parse rational {x!r}", code="BAD_RATIONAL") from exc
    raise TypeError(f"refusing inexact or unknown numeric type {type(x).__name__}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- mark sets -------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class MarkSet:
    """A subset of ``{1, ..., n}`` stored as a bitmask (bit ``i-1`` <-> ``i``)."""

    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >= (1 << MAX_N):
            raise InvalidMarkSet(f"mask {self.mask} out of range")

    @classmethod
    def of(cls, members: Iterable[int]) -> "MarkSet":
        mask = 0
        for i in members:
            if not 1 <= i <= MAX_N:
                raise InvalidMarkSet(f"mark {i} outside 1..{MAX_N}")
            mask |= 1 << (i - 1)
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "MarkSet":
        return cls((1 << n) - 1)

    @classmethod
    def parse(cls, text: str) -> "MarkSet":
        text = text.strip()
        if not text:
            return cls(0)
        return cls.of(int(t) for t in text.split(","))

    @property
    def members(self) -> tuple[int, ...]:
        out = []
        mask, i = self.mask, 1
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return tuple(out)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, i) -> bool:
        return isinstance(i, int) and i >= 1 and bool(self.mask >> (i - 1) & 1)

    def __lt__(self, other: "MarkSet") -> bool:
        return self.mask < other.mask

    def __or__(self, other: "MarkSet") -> "MarkSet":
        return MarkSet(self.mask | other.mask)

    def __and__(self, other: "MarkSet") -> "MarkSet":
        return MarkSet(self.mask & other.mask)

    def complement(self, n: int) -> "MarkSet":
        return MarkSet(((1 << n) - 1) & ~self.mask)

    def issubset(self, other: "MarkSet") -> bool:
        return self.mask & ~other.mask == 0

    def key(self) -> str:
        return ",".join(map(str, self.members))

    def __repr__(self) -> str:
        return "{" + self.key() + "}"


def basis_key(s: MarkSet) -> tuple[int, int]:
    return (len(s), s.mask)


# -- spaces ----------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Space:
    """``(n, m)``: M_{1,n} when ``m == 0``, else the normalized model M_{1,n}(m)^*."""

    n: int
    m: int = 0

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise InvalidSpace("n and m must be integers")
        if not 1 <= self.n <= MAX_N:
            raise InvalidSpace(f"n={self.n} outside 1..{MAX_N}")
        if not 0 <= self.m < self.n:
            raise InvalidSpace(f"need 0 <= m < n, got n={self.n}, m={self.m}")

    @property
    def max_boundary(self) -> int:
        """Largest |S| whose boundary divisor survives on this model."""
        return self.n - self.m

    def admits(self, s: MarkSet) -> bool:
        return 2 <= len(s) <= self.n - self.m and s.issubset(MarkSet.full(self.n))

    def check_markset(self, s: MarkSet) -> MarkSet:
        if not self.admits(s):
            raise InvalidMarkSet(f"{s!r} is not a boundary index on {self}")
        return s

    def boundary_sets(self, lo: int = 2, hi: int | None = None) -> list[MarkSet]:
        """All S with ``max(lo, 2) <= |S| <= min(hi, n - m)`` in basis order."""
        hi = self.max_boundary if hi is None else min(hi, self.max_boundary)
        return _sets_by_size(self.n, max(lo, 2), hi)

    def basis_size(self) -> int:
        from math import comb

        return 1 + sum(comb(self.n, k) for k in range(2, self.max_boundary + 1))

    def __str__(self) -> str:
        return f"M1,{self.n}" if self.m == 0 else f"M1,{self.n}({self.m})*"


def _sets_by_size(n: int, lo: int, hi: int) -> list[MarkSet]:
    if lo > hi:
        return []
    cap = enum_cap()
    if n > cap:
        raise EnumerationCapExceeded(f"subset enumeration for n={n} exceeds cap {cap}")
    out = []
    for k in range(lo, hi + 1):
        sets = [MarkSet.of(c) for c in combinations(range(1, n + 1), k)]
        sets.sort(key=lambda s: s.mask)
        out.extend(sets)
    return out


def enumerate_basis(space: Space) -> list[str]:
    """Basis labels: ``lambda`` first, then ``delta0_{S}`` by (|S|, bitmask)."""
    return ["lambda"] + [f"delta0_{s!r}" for s in space.boundary_sets()]


# -- divisor classes -------------------------------------------------------

@dataclass(frozen=True)
class DivisorClass:
    space: Space
    lambda_coeff: Fraction = Fraction(0)
    boundary: tuple[tuple[MarkSet, Fraction], ...] = field(default=())
    _lookup: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "lambda_coeff", as_rational(self.lambda_coeff))
        items = {}
        for s, c in self.boundary:
            self.space.check_markset(s)
            c = as_rational(c)
            items[s] = items.get(s, Fraction(0)) + c
        canon = tuple(sorted(((s, c) for s, c in items.items() if c != 0),
                             key=lambda sc: basis_key(sc[0])))
        object.__setattr__(self, "boundary", canon)
        object.__setattr__(self, "_lookup", dict(canon))

    @classmethod
    def make(cls, space: Space, lam=0, boundary: Mapping[MarkSet, object] | None = None):
        return cls(space, as_rational(lam), tuple((boundary or {}).items()))

    @classmethod
    def zero(cls, space: Space) -> "DivisorClass":
        return cls(space)

    @property
    def coeffs(self) -> dict[MarkSet, Fraction]:
        return dict(self.boundary)

    def coeff(self, s: MarkSet) -> Fraction:
        return self._lookup.get(s, Fraction(0))

    def is_zero(self) -> bool:
        return self.lambda_coeff == 0 and not self.boundary

    def _check(self, other: "DivisorClass"):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if other.space != self.space:
            raise SpaceMismatch(f"{self.space} vs {other.space}")
        return None

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(self.space, self.lambda_coeff + other.lambda_coeff,
                            self.boundary + other.boundary)

    def __neg__(self) -> "DivisorClass":
        return self.scale(-1)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "DivisorClass":
        c = as_rational(c)
        return DivisorClass(self.space, c * self.lambda_coeff,
                            tuple((s, c * v) for s, v in self.boundary))

    def __mul__(self, c) -> "DivisorClass":
        return self.scale(c)

    __rmul__ = __mul__

    def restrict_to(self, target: Space) -> "DivisorClass":
        """Drop boundary terms that do not exist on ``target`` (same n)."""
        if target.n != self.space.n:
            raise SpaceMismatch(f"{self.space} vs {target}")
        return DivisorClass(target, self.lambda_coeff,
                            tuple((s, c) for s, c in self.boundary if target.admits(s)))

    def to_json(self) -> dict:
        return {
            "n": self.space.n,
            "m": self.space.m,
            "lambda": format_rational(self.lambda_coeff),
            "boundary": {s.key(): format_rational(c) for s, c in self.boundary},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)

    @classmethod
    def from_json(cls, data: Mapping) -> "DivisorClass":
        space = Space(int(data["n"]), int(data.get("m", 0)))
        boundary = {MarkSet.parse(k): as_rational(v)
                    for k, v in data.get("boundary", {}).items()}
        return cls.make(space, as_rational(data.get("lambda", "0")), boundary)

    @classmethod
    def loads(cls, text: str) -> "DivisorClass":
        return cls.from_json(json.loads(text))

    def __str__(self) -> str:
        terms = []
        if self.lambda_coeff:
            terms.append(f"{format_rational(self.lambda_coeff)}*lambda")
        terms += [f"{format_rational(c)}*d0{s!r}" for s, c in self.boundary]
        return " + ".join(terms) if terms else "0"


# -- tautological symbols ----------------------------------------------------

TAGS = ("Lambda", "DeltaIrr", "Delta0S", "Delta0", "Delta", "PsiI", "Psi", "K", "Ds")


@dataclass(frozen=True)
class TautClass:
    tag: str
    arg: object = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise MStableError(f"unknown tautological class {self.tag!r}", code="BAD_CLASS")

    def __str__(self):
        if self.arg is None:
            return self.tag
        if isinstance(self.arg, MarkSet):
            return f"{self.tag}({self.arg!r})"
        if isinstance(self.arg, Fraction):
            return f"{self.tag}({format_rational(self.arg)})"
        return f"{self.tag}({self.arg})"


Lambda = TautClass("Lambda")
DeltaIrr = TautClass("DeltaIrr")
Delta0 = TautClass("Delta0")
Delta = TautClass("Delta")
Psi = TautClass("Psi")
K = TautClass("K")


def Delta0S(s) -> TautClass:
    return TautClass("Delta0S", s if isinstance(s, MarkSet) else MarkSet.of(s))


def PsiI(i: int) -> TautClass:
    return TautClass("PsiI", int(i))


def Ds(s) -> TautClass:
    return TautClass("Ds", as_rational(s))


def parse_taut(text: str) -> TautClass:
    """Parse command-line names: ``lambda``, ``psi_3``, ``delta0_1,2``, ``Ds:13/2``..."""
    t = text.strip()
    low = t.lower()
    simple = {"lambda": Lambda, "deltairr": DeltaIrr, "delta_irr": DeltaIrr,
              "delta0": Delta0, "delta": Delta, "psi": Psi, "k": K}
    if low in simple:
        return simple[low]
    for prefix in ("psi_", "psii:", "psi:"):
        if low.startswith(prefix):
            try:
                return PsiI(int(t[len(prefix):]))
            except ValueError as exc:
                raise MStableError(f"cannot parse class {text!r}", code="BAD_CLASS") from exc
    for prefix in ("delta0_", "delta0s:", "delta0:"):
        if low.startswith(prefix):
            return Delta0S(MarkSet.parse(t[len(prefix):]))
    for prefix in ("ds:", "d:", "ds_"):
        if low.startswith(prefix):
            return Ds(t[len(prefix):])
    raise MStableError(f"cannot parse class {text!r}", code="BAD_CLASS")


def _on_dm(space: Space) -> Space:
    return Space(space.n, 0)


def expand(space: Space, cls: TautClass, *, stack: bool = False) -> DivisorClass:
    """Write a tautological class in the basis ``{lambda, delta_{0,S}}`` of ``space``.

    Classes are expanded on M_{1,n} and then pushed forward, i.e. every
    boundary term with ``|S| > n - m`` is dropped.  ``K`` is the canonical
    class of the coarse space (``13 lambda - 2 delta + psi - delta_{0,[n]}``)
    unless ``stack=True``.
    """
    n = space.n
    dm = _on_dm(space)
    tag = cls.tag
    if tag == "Lambda":
        out = DivisorClass(dm, 1)
    elif tag == "DeltaIrr":
        out = DivisorClass(dm, 12)
    elif tag == "Delta0S":
        s = cls.arg
        if not isinstance(s, MarkSet):
            raise InvalidMarkSet(f"bad index {s!r}")
        space.check_markset(s)
        out = DivisorClass(dm, 0, ((s, 1),))
    elif tag == "Delta0":
        out = DivisorClass(dm, 0, tuple((s, 1) for s in space.boundary_sets()))
    elif tag == "Delta":
        out = expand(dm, DeltaIrr) + expand(space, Delta0).restrict_to(dm)
    elif tag == "PsiI":
        i = cls.arg
        if not isinstance(i, int) or not 1 <= i <= n:
            raise InvalidIndex(f"psi index {i!r} outside 1..{n}")
        out = DivisorClass(dm, 1, tuple((s, 1) for s in space.boundary_sets() if i in s))
    elif tag == "Psi":
        out = DivisorClass(dm, n, tuple((s, len(s)) for s in space.boundary_sets()))
    elif tag == "K":
        # 13 lambda - 2 delta + psi = (n - 11) lambda + sum (|S| - 2) delta_{0,S}
        out = DivisorClass(dm, n - 11, tuple((s, len(s) - 2) for s in dm.boundary_sets()))
        if not stack and n >= 2:
            out = out - DivisorClass(dm, 0, ((MarkSet.full(n), 1),))
    elif tag == "Ds":
        s = as_rational(cls.arg)
        out = DivisorClass(dm, s + n - 12,
                           tuple((t, len(t) - 1) for t in space.boundary_sets()))
    else:  # pragma: no cover - guarded by TautClass
        raise MStableError(f"unhandled tag {tag}")
    return out.restrict_to(space)


def lam(space: Space) -> DivisorClass:
    return DivisorClass(space, 1)


def delta0S(space: Space, s) -> DivisorClass:
    return expand(space, Delta0S(s))
