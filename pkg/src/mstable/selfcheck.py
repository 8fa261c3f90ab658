"""Invariant suite run by ``mstable selfcheck``: one boolean per (check, n)."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Callable

from .chambers import chamber_table
from .contraction import ContractionMap, discrepancy_of_Ds, pullback, pushforward
from .dualgraph import DualGraph, isomorphic
from .picard import (
    Delta,
    Delta0S,
    DeltaIrr,
    DivisorClass,
    K,
    Lambda,
    MarkSet,
    Psi,
    PsiI,
    Space,
    expand,
)
from .positivity import (
    contraction_certificate,
    intersect,
    psi_minus_delta0,
    verify_chamber_ampleness,
)
from .reduction import mstable_reduce, phi_limit
from .strata import esigma_library, set_partitions, stirling2, stratum_dimension


def check_relations(n: int) -> bool:
    sp = Space(n)
    lam = expand(sp, Lambda)
    for i in range(1, n + 1):
        rhs = lam
        for s in sp.boundary_sets():
            if i in s:
                rhs = rhs + expand(sp, Delta0S(s))
        if expand(sp, PsiI(i)) != rhs:
            return False
    total = DivisorClass.zero(sp)
    for i in range(1, n + 1):
        total = total + expand(sp, PsiI(i))
    if total != expand(sp, Psi) or expand(sp, DeltaIrr) != lam.scale(12):
        return False
    stack = lam.scale(13) - expand(sp, Delta).scale(2) + expand(sp, Psi)
    want = DivisorClass.make(sp, n - 11, {s: len(s) - 2 for s in sp.boundary_sets()})
    if stack != want or expand(sp, K, stack=True) != want:
        return False
    coarse = want - DivisorClass.make(sp, 0, {MarkSet.full(n): 1}) if n >= 2 else want
    return expand(sp, K) == coarse


def check_truncation(n: int) -> bool:
    full = Space(n)
    for m in range(n):
        sp = Space(n, m)
        for cls in (Lambda, Psi, K, DeltaIrr, Delta):
            if expand(sp, cls) != expand(full, cls).restrict_to(sp):
                return False
    return True


def check_discrepancy(n: int) -> bool:
    for m in range(1, n):
        for s in (Fraction(11 - m), Fraction(12 - m), Fraction(25 - 2 * m, 2)):
            rep = discrepancy_of_Ds(n, m, s)
            if any(c != len(t) + 11 - n - s for t, c in rep.coefficients.items()):
                return False
            if rep.section_rings_equal != (s <= 12 - m):
                return False
    return True


def check_push_pull(n: int) -> bool:
    for m in range(1, n):
        phi = ContractionMap.between(n, 0, m)
        for d in (expand(phi.target, Psi), expand(phi.target, Lambda)):
            if pushforward(phi, pullback(phi, d)) != d:
                return False
    return True


def check_chambers(n: int) -> bool:
    if n < 2:
        return True
    table = chamber_table(n)
    real = [c for c in table if not c.degenerate]
    if len(real) != n:
        return False
    for c in real[1:]:
        if c.model.m is None:
            return False
        lo, hi = c.alpha_bounds()
        m = c.model.m
        if (lo, hi) != (Fraction(10 - m, 12), Fraction(11 - m, 12)):
            return False
    return True


def check_strata(n: int) -> bool:
    for l in range(1, n + 1):
        count = 0
        for p in set_partitions(n, l):
            count += 1
            if p.big and stratum_dimension(n, p) != n - l - 1:
                return False
        if count != stirling2(n, l):
            return False
    return True


def check_test_curves(n: int) -> bool:
    for m in range(1, n):
        sp = Space(n, m)
        probes = {t: psi_minus_delta0(sp, t) for t in (Fraction(m), Fraction(2 * m + 1, 2))}
        for b in esigma_library(n, m):
            l = len(b.name[2:-1].split("|"))
            if any(intersect(d, b) != t - l for t, d in probes.items()):
                return False
    return True


def check_certificates(n: int) -> bool:
    for m in range(1, n):
        if any(v != 0 for vs in contraction_certificate(n, m).values() for v in vs):
            return False
    return True


def check_positivity(n: int) -> bool:
    return verify_chamber_ampleness(n).ok


def check_reduction(n: int) -> bool:
    if n > 6:
        return True
    for m in range(1, n):
        for k in range(n - m + 1, n + 1):
            for S in combinations(range(1, n + 1), k):
                rest = [i for i in range(1, n + 1) if i not in S]
                g = DualGraph.build(n, [("E", 1, rest), ("R", 0, S)], [("E", "R")])
                out, _ = mstable_reduce(g, m)
                if not isomorphic(out, phi_limit(g, n, m)):
                    return False
    return True


CHECKS: dict[str, Callable[[int], bool]] = {
    "relations": check_relations,
    "truncation": check_truncation,
    "push-pull": check_push_pull,
    "discrepancy": check_discrepancy,
    "chambers": check_chambers,
    "strata": check_strata,
    "test-curves": check_test_curves,
    "certificates": check_certificates,
    "positivity": check_positivity,
    "reduction": check_reduction,
}


def run_selfcheck(max_n: int = 8) -> dict[str, dict[int, bool]]:
    return {name: {n: fn(n) for n in range(2, max_n + 1)} for name, fn in CHECKS.items()}
