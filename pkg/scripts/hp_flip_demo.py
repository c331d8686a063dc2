"""Flip obstruction as the asymmetric eigenvalue block grows.

Prints the two limit-ratio brackets at the extreme traces for a family of
two-vertex systems whose first vertex carries ``k1`` eigenvalue copies per level
while the second carries none, and the verdict for each.
"""
import argparse
from fractions import Fraction

from villadsen import hp
from villadsen.render import decimal_str


def family(length: int, k1: int) -> hp.HPParams:
    tens = tuple(10**i for i in range(1, length + 1))
    zeros = (0,) * length
    return hp.HPParams(2, tens, tens, (k1,) * length, zeros, zeros, zeros)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--length", type=int, default=6)
    ap.add_argument("--max-k1", type=int, default=4)
    ap.add_argument("--digits", type=int, default=6)
    args = ap.parse_args()
    print(f"{'k1':>3}  {'tau1 bracket':>28}  {'tau2 bracket':>28}  verdict")
    for k1 in range(args.max_k1 + 1):
        rep = hp.flip_obstruction(family(args.length, k1))
        fmt = lambda b: f"[{decimal_str(Fraction(b.lower), args.digits)}, " \
                        f"{decimal_str(Fraction(b.upper), args.digits)}]"  # noqa: E731
        print(f"{k1:>3}  {fmt(rep.at_tau1):>28}  {fmt(rep.at_tau2):>28}  {rep.verdict}")


if __name__ == "__main__":
    main()
