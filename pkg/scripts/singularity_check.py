"""Canonical discrepancy of M1,n(n-2) --> M1,n(n-1) and the resulting verdict.

    python3 scripts/singularity_check.py --n 5 6 7 8
"""

import argparse

from mstable.contraction import smoothness_consistency
from mstable.picard import format_rational


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 5, 6, 7, 8, 9])
    args = ap.parse_args()
    for n in args.n:
        check = smoothness_consistency(n, n - 2, n - 1)
        sizes = sorted({(len(t), c) for t, c in check.per_divisor.items()})
        detail = ", ".join(f"|S|={k}: {format_rational(c)}" for k, c in sizes)
        print(f"n={n} ({n - 2} -> {n - 1}): {detail}; {check.summary()}")


if __name__ == "__main__":
    main()
