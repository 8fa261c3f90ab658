"""Boundary strata E_l of the m-stable spaces and the test curves they carry.

The locus of curves with an elliptic l-fold point splits into components
indexed by the combinatorial type: a set partition of [n] into l parts.
Each component is (birationally) a projective bundle over a product of
genus-zero moduli spaces; a fiber of that bundle is the basic test curve
:func:`esigma_fiber_curve`.

Test curves are linear functionals on divisor classes.  Only the degrees on
the basis (lambda and the delta_{0,S}) are stored; psi and delta_0 degrees are
derived from the basis relations when needed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import StrataError
from .picard import (
    DivisorClass,
    MarkSet,
    Space,
    as_rational,
    basis_key,
    format_rational,
)

LIBRARY_CAP = 5000
PENCIL_SECTIONS = 9


@dataclass(frozen=True)
class Partition:
    parts: tuple  # of MarkSet, ordered by min element

    def __post_init__(self):
        parts = tuple(sorted(self.parts, key=lambda s: s.members[0] if len(s) else 0))
        if any(len(p) == 0 for p in parts):
            raise StrataError("partition parts must be nonempty")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts) -> "Partition":
        return cls(tuple(MarkSet.of(p) for p in parts))

    @property
    def l(self) -> int:
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(len(p) for p in self.parts)

    @property
    def big(self) -> tuple:
        return tuple(p for p in self.parts if len(p) >= 2)

    @property
    def singletons(self) -> tuple:
        return tuple(p.members[0] for p in self.parts if len(p) == 1)

    def validate(self, n: int) -> "Partition":
        seen = 0
        for p in self.parts:
            if p.mask & seen:
                raise StrataError("parts overlap")
            seen |= p.mask
        if seen != MarkSet.full(n).mask:
            raise StrataError(f"parts do not cover {{1..{n}}}")
        return self

    def __str__(self) -> str:
        return "|".join(",".join(map(str, p.members)) for p in self.parts)


def _rgs(n: int, l: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n using exactly l blocks, lexicographically."""
    a = [0] * n

    def rec(i: int, used: int):
        if n - i < l - used:
            return
        if i == n:
            if used == l:
                yield list(a)
            return
        for b in range(min(used + 1, l)):
            a[i] = b
            yield from rec(i + 1, max(used, b + 1))

    if n:
        yield from rec(1, 1)


def set_partitions(n: int, l: int) -> Iterator[Partition]:
    for word in _rgs(n, l):
        blocks = [[] for _ in range(l)]
        for i, b in enumerate(word):
            blocks[b].append(i + 1)
        yield Partition(tuple(MarkSet.of(b) for b in blocks))


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind by inclusion-exclusion."""
    if k == 0:
        return 1 if n == 0 else 0
    total = sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1))
    return total // math.factorial(k)


def enumerate_components(n: int, m: int, l: int) -> list[Partition]:
    """Combinatorial types of the components of E_l on M_{1,n}(m)."""
    Space(n, m)
    if not 1 <= l <= m:
        raise StrataError(f"need 1 <= l <= m, got l={l}, m={m}", code="L_OUT_OF_RANGE")
    return list(set_partitions(n, l))


def stratum_dimension(n: int, partition: Partition) -> int:
    partition.validate(n)
    big = partition.big
    if not big:
        raise StrataError("all-singleton type gives an empty stratum", code="EMPTY_STRATUM")
    return sum(len(p) - 2 for p in big) + (len(big) - 1)


def stratum_codimension(n: int, partition: Partition) -> int:
    return n - stratum_dimension(n, partition)


# -- test curves -----------------------------------------------------------

@dataclass(frozen=True)
class TestCurve:
    space: Space
    name: str
    lambda_deg: Fraction
    boundary_degs: tuple  # sorted (MarkSet, Fraction) pairs, no zeros

    __test__ = False  # not a pytest class

    @classmethod
    def make(cls, space: Space, name: str, lam, boundary: Mapping | None = None) -> "TestCurve":
        items = []
        for s, c in (boundary or {}).items():
            s = space.check_markset(s if isinstance(s, MarkSet) else MarkSet.of(s))
            c = as_rational(c)
            if c:
                items.append((s, c))
        items.sort(key=lambda kv: basis_key(kv[0]))
        return cls(space, name, as_rational(lam), tuple(items))

    @property
    def degs(self) -> dict:
        return dict(self.boundary_degs)

    def deg(self, s: MarkSet) -> Fraction:
        return self.degs.get(s, Fraction(0))

    def psi_degree(self, i: int) -> Fraction:
        """psi_i.B from psi_i = lambda + sum_{i in S} delta_{0,S}."""
        return self.lambda_deg + sum((c for s, c in self.boundary_degs if i in s), Fraction(0))

    def psi_total_degree(self) -> Fraction:
        return sum((self.psi_degree(i) for i in range(1, self.space.n + 1)), Fraction(0))

    def delta0_degree(self) -> Fraction:
        return sum((c for _, c in self.boundary_degs), Fraction(0))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "n": self.space.n,
            "m": self.space.m,
            "lambda": format_rational(self.lambda_deg),
            "boundary": {s.key(): format_rational(c) for s, c in self.boundary_degs},
        }


def esigma_fiber_curve(n: int, m: int, partition: Partition, *, formal: bool = False) -> TestCurve:
    """A fiber of the projective bundle over the component E_Sigma.

    Degrees: lambda -1, delta_{0,S_i} = 1 for every part of size >= 2, zero
    elsewhere.  The fiber lies on M_{1,n}(m) only when l <= m and every big
    part has size <= n - m; with ``formal=True`` those checks are skipped and
    the functional is returned on M_{1,n} instead.
    """
    partition.validate(n)
    big = partition.big
    if not big:
        raise StrataError("no part of size >= 2: the bundle has no fiber curve",
                          code="ALL_SINGLETONS")
    if formal:
        space = Space(n, 0)
    else:
        space = Space(n, m)
        if partition.l > m:
            raise StrataError(f"l = {partition.l} exceeds m = {m}", code="L_OUT_OF_RANGE")
        if any(not space.admits(p) for p in big):
            raise StrataError(f"a part of {partition} is larger than n - m = {n - m}",
                              code="OUT_OF_SPACE")
    return TestCurve.make(space, f"E[{partition}]", -1, {p: 1 for p in big})


def elliptic_tail_curve(n: int, m: int, T) -> TestCurve:
    """A moving elliptic tail attached at one point to a fixed rational tail carrying T.

    Degrees lambda 1, delta_{0,T} -1 (the self-intersection of the tail
    divisor on a family with fixed rational part), zero elsewhere.  The
    elliptic side is a cubic pencil with the remaining marks and the
    attaching point as base-point sections, so it needs n - |T| + 1 <= 9.
    """
    space = Space(n, m)
    T = T if isinstance(T, MarkSet) else MarkSet.of(T)
    space.check_markset(T)
    if n - len(T) + 1 > PENCIL_SECTIONS:
        raise StrataError("too many sections for a cubic pencil", code="OUT_OF_SPACE")
    return TestCurve.make(space, f"ET[{T.key()}]", 1, {T: -1})


def pencil_curve(n: int, m: int) -> TestCurve:
    """A pencil of plane cubics with its base points as sections and no reducible members."""
    if n > PENCIL_SECTIONS:
        raise StrataError("a cubic pencil has only 9 base points", code="OUT_OF_SPACE")
    return TestCurve.make(Space(n, m), "pencil", 1)


def bt_curve(n: int, T) -> TestCurve:
    """Curve on M_{1,n} contracted by phi when |T| >= n - m + 1, normalized so lambda.B = 1."""
    space = Space(n, 0)
    T = T if isinstance(T, MarkSet) else MarkSet.of(T)
    if not 2 <= len(T) <= n or not T.issubset(MarkSet.full(n)):
        raise StrataError(f"invalid T = {T} for n = {n}", code="INVALID_T")
    return TestCurve.make(space, f"B[{T.key()}]", 1, {T: -1})


def genuine_types(n: int, m: int) -> Iterator[Partition]:
    """Types with l <= m whose fiber curve lies on M_{1,n}(m)."""
    for l in range(1, m + 1):
        for p in set_partitions(n, l):
            big = p.big
            if big and all(len(s) <= n - m for s in big):
                yield p


def esigma_library(n: int, m: int, cap: int = LIBRARY_CAP, seed: int = 0) -> list[TestCurve]:
    """Every genuine E_Sigma fiber curve, or a seeded uniform sample of ``cap`` of them."""
    types = list(genuine_types(n, m))
    if len(types) > cap:
        types = random.Random(seed).sample(types, cap)
        types.sort(key=lambda p: (p.l, [s.members for s in p.parts]))
    return [esigma_fiber_curve(n, m, p) for p in types]


def curve_library(n: int, m: int, cap: int = LIBRARY_CAP, seed: int = 0) -> list[TestCurve]:
    """Test curves on M_{1,n}(m): E_Sigma fibers, elliptic tails, and the pencil."""
    space = Space(n, m)
    curves = esigma_library(n, m, cap, seed)
    curves.extend(elliptic_tail_curve(n, m, T) for T in space.boundary_sets()
                  if n - len(T) + 1 <= PENCIL_SECTIONS)
    if n <= PENCIL_SECTIONS:
        curves.append(pencil_curve(n, m))
    return curves

