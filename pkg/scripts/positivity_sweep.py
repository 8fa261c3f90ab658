"""Evaluate psi - delta_0 - t lambda on the test-curve library across t for each (n, m).

For every m the minimum degree is reported at t = m, at the chamber midpoint
t = m + 1/2, and at t = m + 1, plus one point beyond the range.

    python3 scripts/positivity_sweep.py --max-n 8
"""

import argparse
from fractions import Fraction

from mstable.picard import format_rational
from mstable.positivity import verify_ample_range, verify_chamber_ampleness


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    args = ap.parse_args()
    for n in range(2, args.max_n + 1):
        summary = verify_chamber_ampleness(n)
        print(f"n={n}: chamber check {'ok' if summary.ok else 'FAILED'}")
        for m in range(1, n):
            cells = []
            for t in (Fraction(m), m + Fraction(1, 2), Fraction(m + 1), m + Fraction(3, 2)):
                rep = verify_ample_range(n, m, t)
                cells.append(f"t={format_rational(t)}: {format_rational(rep.min_degree)} ({rep.witness or rep.attaining()[0]})")
            print(f"  m={m}  " + "  ".join(cells))


if __name__ == "__main__":
    main()
