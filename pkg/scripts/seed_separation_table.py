"""Dirac limit values for every seed preset under shared UHF growth data.

Seeds whose value sets differ in shape are separated by the limit ratio
invariant even when the radius of comparison (the maximum) agrees.
"""
import argparse

from villadsen import uhf
from villadsen.model import SEED_PRESETS
from villadsen.render import rat


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="2,3,5,7", help="comma-separated block multiplicities")
    ap.add_argument("--k", default="1,2,1,3", help="comma-separated eigenvalue counts")
    args = ap.parse_args()
    n = [int(x) for x in args.n.split(",")]
    k = [int(x) for x in args.k.split(",")]
    names = sorted(SEED_PRESETS)
    for name in names:
        vals = uhf.dirac_values(SEED_PRESETS[name], n, k)
        print(f"{name:<34} {', '.join(rat(v) for v in vals)}")
    print()
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            rep = uhf.seed_separation(SEED_PRESETS[a], SEED_PRESETS[b], n, k)
            rc = "rc equal" if rep.max_equal else "rc differs"
            print(f"{a} vs {b}: {rep.verdict}; {rc}")


if __name__ == "__main__":
    main()
