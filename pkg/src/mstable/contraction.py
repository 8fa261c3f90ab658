"""Push/pull of divisor classes along phi: M_{1,n}(m1)^* --> M_{1,n}(m2)^*.

From M_{1,n} the map is a birational contraction whose exceptional divisors
are the delta_{0,S} with ``|S| >= n - m + 1``.  Pushforward forgets them;
pullback sends ``Delta_irr`` to ``Delta_irr + 12 sum_exc delta_{0,S}``, i.e.
``lambda`` to ``lambda + sum_exc delta_{0,S}``, and fixes every surviving
``delta_{0,S}``.  Maps between two intermediate models are defined by
factoring through M_{1,n}.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InvalidSpace, SpaceMismatch
from .picard import (
    Delta0,
    DeltaIrr,
    DivisorClass,
    Ds,
    K,
    MarkSet,
    Space,
    as_rational,
    expand,
    format_rational,
)


@dataclass(frozen=True)
class ContractionMap:
    source: Space
    target: Space

    def __post_init__(self):
        if self.source.n != self.target.n:
            raise InvalidSpace("source and target must have the same n")
        if self.source.m > self.target.m:
            raise InvalidSpace("contraction goes from smaller m to larger m")

    @classmethod
    def between(cls, n: int, m_from: int, m_to: int) -> "ContractionMap":
        return cls(Space(n, m_from), Space(n, m_to))

    @property
    def n(self) -> int:
        return self.source.n

    def exceptional_sets(self) -> list[MarkSet]:
        """Boundary divisors of the source that the map contracts."""
        lo = self.n - self.target.m + 1
        return self.source.boundary_sets(lo=lo)

    def is_regular(self) -> bool:
        """Regularity of a single step (n, m-1) -> (n, m): iff m = 1 or m = n-1."""
        if self.target.m - self.source.m != 1:
            return False
        return self.target.m in (1, self.n - 1)


def pushforward(phi: ContractionMap, d: DivisorClass) -> DivisorClass:
    if d.space != phi.source:
        raise SpaceMismatch(f"class lives on {d.space}, map starts at {phi.source}")
    return d.restrict_to(phi.target)


def _pullback_from_target_to_dm(phi: ContractionMap, d: DivisorClass) -> DivisorClass:
    dm = Space(phi.n, 0)
    exc = dm.boundary_sets(lo=phi.n - phi.target.m + 1)
    return d.restrict_to(dm) + DivisorClass(dm, 0, tuple((s, d.lambda_coeff) for s in exc))


def pullback(phi: ContractionMap, d: DivisorClass) -> DivisorClass:
    if d.space != phi.target:
        raise SpaceMismatch(f"class lives on {d.space}, map ends at {phi.target}")
    return _pullback_from_target_to_dm(phi, d).restrict_to(phi.source)


# -- discrepancies of D(s) ---------------------------------------------------

@dataclass(frozen=True)
class DiscrepancyReport:
    n: int
    m: int
    s: Fraction
    coefficients: dict  # MarkSet -> Fraction
    min_coefficient: Fraction | None
    section_rings_equal: bool

    def by_size(self) -> dict[int, Fraction]:
        out = {}
        for t, c in self.coefficients.items():
            out.setdefault(len(t), c)
        return dict(sorted(out.items()))


def discrepancy_of_Ds(n: int, m: int, s) -> DiscrepancyReport:
    """Exceptional part of ``D(s) - phi^* phi_* D(s)`` for phi: M_{1,n} --> M_{1,n}(m)^*.

    The section rings of ``D(s)`` and ``phi_* D(s)`` agree exactly when every
    coefficient is non-negative, which happens iff ``s <= 12 - m``.
    """
    s = as_rational(s)
    if not 1 <= m <= n - 1:
        raise InvalidSpace(f"need 1 <= m <= n-1, got n={n}, m={m}")
    phi = ContractionMap.between(n, 0, m)
    d = expand(phi.source, Ds(s))
    diff = d - pullback(phi, pushforward(phi, d))
    exc = phi.exceptional_sets()
    if diff.lambda_coeff != 0 or any(t not in exc for t in diff.coeffs):
        raise AssertionError("D(s) - phi^*phi_*D(s) must be supported on exceptional divisors")
    coeffs = {t: diff.coeff(t) for t in exc}
    lo = min(coeffs.values()) if coeffs else None
    equal = lo is None or lo >= 0
    return DiscrepancyReport(n, m, s, coeffs, lo, equal)


# -- canonical class and the singularity test ---------------------------------

class Verdict(str, Enum):
    SINGULAR = "SINGULAR"
    INCONCLUSIVE = "INCONCLUSIVE"
    NOT_APPLICABLE = "NOT_APPLICABLE"


def canonical_class(space: Space) -> DivisorClass:
    """K of the coarse space M_{1,n} pushed forward to ``space``."""
    return expand(space, K)


def canonical_discrepancy(n: int, m_from: int, m_to: int) -> DivisorClass:
    """``K_source - phi^* K_target`` in the basis of (n, m_from)."""
    phi = ContractionMap.between(n, m_from, m_to)
    return canonical_class(phi.source) - pullback(phi, canonical_class(phi.target))


@dataclass(frozen=True)
class SmoothnessCheck:
    n: int
    m_from: int
    m_to: int
    discrepancy: DivisorClass
    per_divisor: dict  # MarkSet -> Fraction
    dim: int
    applicable: bool
    verdict: Verdict

    @property
    def threshold(self) -> int:
        return self.dim - 1

    def summary(self) -> str:
        if not self.per_divisor:
            return f"no exceptional divisors -> {self.verdict.value}"
        lo = min(self.per_divisor.values())
        rel = "<" if lo < self.threshold else ("=" if lo == self.threshold else ">")
        return (f"discrepancy {format_rational(lo)} {rel} dim-1 = {self.threshold}"
                f" -> {self.verdict.value}")


def smoothness_consistency(n: int, m_from: int, m_to: int) -> SmoothnessCheck:
    """One-sided singularity test for the target of (n, m_from) -> (n, m_to).

    A regular contraction onto smooth points has every exceptional discrepancy
    at least ``dim - 1``; a smaller one proves the target singular.  The test
    only applies to the regular single step onto M_{1,n}(n-1), whose exceptional
    divisors map to finitely many points.
    """
    phi = ContractionMap.between(n, m_from, m_to)
    disc = canonical_discrepancy(n, m_from, m_to)
    exc = phi.exceptional_sets()
    per = {t: disc.coeff(t) for t in exc}
    dim = n
    applicable = bool(exc) and phi.is_regular() and m_to == n - 1
    if not applicable:
        verdict = Verdict.NOT_APPLICABLE
    elif min(per.values()) < dim - 1:
        verdict = Verdict.SINGULAR
    else:
        verdict = Verdict.INCONCLUSIVE
    return SmoothnessCheck(n, m_from, m_to, disc, per, dim, applicable, verdict)


# -- log-canonical dictionary ------------------------------------------------

def alpha_of_s(s) -> Fraction:
    """``s lambda + psi - Delta`` is proportional to ``K + alpha Delta_irr + Delta_0``."""
    return (as_rational(s) - 1) / 12


def s_of_alpha(alpha) -> Fraction:
    return 12 * as_rational(alpha) + 1


def log_canonical(m: int) -> bool:
    """Whether M_{1,n}(m) arises as a log canonical model (alpha >= 0)."""
    return m <= 10


def stack_log_canonical_divisor(space: Space, alpha) -> DivisorClass:
    return (expand(space, K, stack=True) + expand(space, DeltaIrr).scale(alpha)
            + expand(space, Delta0))
