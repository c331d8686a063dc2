"""Scan single-vertex diagonal systems over the block multiplicity.

For ``M = [[N]]`` and ``E = [[e]]`` at every level, the evaluation share per
level is ``e / (N + e)``; the scan shows where the finite-prefix diagnostics
switch from inconclusive to consistent with rapid growth.
"""
import argparse
from fractions import Fraction

from villadsen.model import SEED_PRESETS, LevelData, VilladsenSystem
from villadsen.ratios import rapid_growth_report
from villadsen.render import decimal_str


def system(N: int, e: int, levels: int) -> VilladsenSystem:
    return VilladsenSystem(SEED_PRESETS["square"], (1,), (LevelData(((N,),), ((e,),)),) * levels)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=4)
    ap.add_argument("--e", type=int, default=1)
    ap.add_argument("--tol", default="1/1000")
    args = ap.parse_args()
    print(f"{'N':>6}  {'r_last':>12}  {'largest decrement':>18}  verdict")
    for N in (1, 2, 4, 16, 64, 256, 1024, 4096):
        rep = rapid_growth_report(system(N, args.e, args.levels), Fraction(args.tol))
        print(f"{N:>6}  {decimal_str(rep.r_last[0], 8):>12}  "
              f"{decimal_str(rep.largest_decrement, 8):>18}  {rep.verdict}")


if __name__ == "__main__":
    main()
