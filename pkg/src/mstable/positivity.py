"""Intersection with test curves and finite positivity checks.

Positivity on a finite curve library is a necessary condition for
ampleness, not a proof of it; reports therefore say "consistent with
ampleness" rather than "ample".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .chambers import chamber_table
from .contraction import ContractionMap, pullback, pushforward
from .errors import InvalidSpace, SpaceMismatch
from .picard import (
    Delta0,
    DeltaIrr,
    DivisorClass,
    Ds,
    Lambda,
    Psi,
    Space,
    as_rational,
    expand,
    format_rational,
)
from .strata import LIBRARY_CAP, TestCurve, bt_curve, curve_library


def intersect(d: DivisorClass, b: TestCurve) -> Fraction:
    if d.space != b.space:
        raise SpaceMismatch(f"divisor on {d.space}, curve on {b.space}")
    total = d.lambda_coeff * b.lambda_deg
    for s, c in b.boundary_degs:
        total += d.coeff(s) * c
    return total


class Verdict(str, Enum):
    ALL_POSITIVE = "ALL_POSITIVE"
    ALL_NONNEGATIVE = "ALL_NONNEGATIVE"
    FAILS = "FAILS"

    @property
    def exit_code(self) -> int:
        return {"ALL_POSITIVE": 0, "ALL_NONNEGATIVE": 1, "FAILS": 2}[self.value]


@dataclass(frozen=True)
class PositivityReport:
    divisor: DivisorClass
    evaluations: tuple  # (curve name, degree), in library order
    min_degree: Fraction | None
    verdict: Verdict
    witness: str | None = None  # first curve attaining the minimum when it is <= 0

    def attaining(self) -> list[str]:
        return [name for name, deg in self.evaluations if deg == self.min_degree]

    def summary(self) -> str:
        lo = "n/a" if self.min_degree is None else format_rational(self.min_degree)
        tail = f" (witness {self.witness})" if self.witness else ""
        note = "; consistent with ampleness" if self.verdict is Verdict.ALL_POSITIVE else ""
        return f"{self.verdict.value}: min degree {lo} over {len(self.evaluations)} curves{tail}{note}"

    def to_json(self) -> dict:
        return {
            "divisor": self.divisor.to_json(),
            "verdict": self.verdict.value,
            "min_degree": None if self.min_degree is None else format_rational(self.min_degree),
            "witness": self.witness,
            "evaluations": [[name, format_rational(v)] for name, v in self.evaluations],
        }


def evaluate(d: DivisorClass, curves) -> PositivityReport:
    evals = tuple((b.name, intersect(d, b)) for b in curves)
    if not evals:
        return PositivityReport(d, evals, None, Verdict.ALL_POSITIVE)
    lo = min(v for _, v in evals)
    witness = next(name for name, v in evals if v == lo) if lo <= 0 else None
    if lo > 0:
        verdict = Verdict.ALL_POSITIVE
    elif lo == 0:
        verdict = Verdict.ALL_NONNEGATIVE
    else:
        verdict = Verdict.FAILS
    return PositivityReport(d, evals, lo, verdict, witness)


def psi_minus_delta0(space: Space, t) -> DivisorClass:
    """``psi - delta_0 - t lambda`` on ``space``."""
    t = as_rational(t)
    return expand(space, Psi) - expand(space, Delta0) - expand(space, Lambda).scale(t)


def verify_ample_range(n: int, m: int, s, cap: int = LIBRARY_CAP) -> PositivityReport:
    """Evaluate ``psi - delta_0 - s lambda`` on M_{1,n}(m) against the curve library."""
    if not 1 <= m <= n - 1:
        raise InvalidSpace(f"need 1 <= m <= n-1, got n={n}, m={m}")
    space = Space(n, m)
    return evaluate(psi_minus_delta0(space, s), curve_library(n, m, cap))


@dataclass(frozen=True)
class ChamberCheck:
    m: int
    s: Fraction  # midpoint of the chamber
    parameter: Fraction  # 12 - s
    identity_holds: bool  # phi_* D(s) == psi - delta_0 - (12 - s) lambda
    midpoint: PositivityReport
    upper_endpoint: PositivityReport  # parameter m + 1, i.e. s = 11 - m
    lower_endpoint: PositivityReport  # parameter m, i.e. s = 12 - m

    @property
    def ok(self) -> bool:
        return (self.identity_holds and self.midpoint.verdict is Verdict.ALL_POSITIVE
                and self.upper_endpoint.min_degree == 0)


@dataclass(frozen=True)
class ChamberAmplenessSummary:
    n: int
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            out.append(
                f"m={c.m} s={format_rational(c.s)} t={format_rational(c.parameter)} "
                f"identity={'ok' if c.identity_holds else 'BROKEN'} "
                f"mid={c.midpoint.verdict.value} min={format_rational(c.midpoint.min_degree)} "
                f"t=m+1 min={format_rational(c.upper_endpoint.min_degree)} "
                f"t=m min={format_rational(c.lower_endpoint.min_degree)}")
        return out


def verify_chamber_ampleness(n: int, cap: int = LIBRARY_CAP) -> ChamberAmplenessSummary:
    """For each m-stable chamber, check phi_* D(s) at its midpoint against the library."""
    if n < 2:
        raise InvalidSpace("need n >= 2")
    mids = {}
    for ch in chamber_table(n):
        if ch.model.m is not None:
            mids[ch.model.m] = ch.midpoint()
    checks = []
    for m in range(1, n):
        s = mids[m]
        t = 12 - s
        phi = ContractionMap.between(n, 0, m)
        pushed = pushforward(phi, expand(phi.source, Ds(s)))
        identity = pushed == psi_minus_delta0(phi.target, t)
        curves = curve_library(n, m, cap)
        checks.append(ChamberCheck(
            m, s, t, identity,
            evaluate(pushed, curves),
            evaluate(psi_minus_delta0(phi.target, m + 1), curves),
            evaluate(psi_minus_delta0(phi.target, m), curves),
        ))
    return ChamberAmplenessSummary(n, tuple(checks))


# -- contraction certificates ------------------------------------------------

def contraction_certificate(n: int, m: int) -> dict:
    """Pair the pullback of every basis class of M_{1,n}(m) with each B_T, |T| >= n-m+1.

    Returns ``{T: [degrees]}``; all degrees vanish when phi contracts B_T.
    """
    phi = ContractionMap.between(n, 0, m)
    target = phi.target
    basis = [expand(target, Lambda)] + [DivisorClass.make(target, 0, {s: 1})
                                        for s in target.boundary_sets()]
    pulled = [pullback(phi, d) for d in basis]
    return {T: [intersect(p, bt_curve(n, T)) for p in pulled] for T in phi.exceptional_sets()}


def solve_pullback_coefficients(n: int, m: int, T) -> tuple[Fraction, Fraction]:
    """Recover a_T and b_T from B_T alone.

    Writing phi^* Delta_irr = Delta_irr + a_T delta_{0,T} + ... and
    phi^* delta_{0,S} = delta_{0,S} + b_T delta_{0,T} + ..., both pullbacks
    must have degree zero on the contracted curve B_T.
    """
    b = bt_curve(n, T)
    T = b.boundary_degs[0][0]
    if len(T) < n - m + 1:
        raise InvalidSpace(f"B_T with |T| = {len(T)} is not contracted on M1,{n}({m})")
    dT = b.deg(T)
    dm = Space(n, 0)
    a_T = -intersect(expand(dm, DeltaIrr), b) / dT
    others = [s for s in dm.boundary_sets() if len(s) <= n - m]
    b_vals = {-intersect(DivisorClass.make(dm, 0, {s: 1}), b) / dT for s in others}
    b_T = b_vals.pop() if len(b_vals) == 1 else None
    if b_vals:
        raise AssertionError("b_T is not well defined")
    return a_T, (Fraction(0) if b_T is None else b_T)
