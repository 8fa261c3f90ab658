"""Print the chamber decomposition of the D(s) slice for several n.

    python3 scripts/chamber_table.py --n 5 7 12
"""

import argparse

from mstable.chambers import chamber_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[5, 7, 12])
    args = ap.parse_args()
    for n in args.n:
        print(f"n = {n}")
        for ch in chamber_table(n):
            print(f"  {ch.interval():<12} {ch.alpha_interval():<14} {ch.model.label()}")
        print()


if __name__ == "__main__":
    main()
