"""Split every two-type necklace up to a length and compare with brute force.

    python scripts/sweep.py --max-n 8 --thieves 2 3
"""

import argparse
from collections import Counter
from itertools import product
import time

from polychain.necklace import Necklace, brute_force_split, find_fair_split, verify_splitting


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--alphabet", default="ab")
    ap.add_argument("--thieves", type=int, nargs="+", default=[2, 3])
    args = ap.parse_args()

    print("%3s %3s %6s %8s %10s %9s" % ("n", "q", "cases", "ok", "cuts used", "seconds"))
    for n in range(1, args.max_n + 1):
        for q in args.thieves:
            t0 = time.perf_counter()
            ok, cuts = 0, Counter()
            strings = list(product(args.alphabet, repeat=n))
            for beads in strings:
                nk = Necklace(beads)
                s = find_fair_split(nk, q)
                rep = verify_splitting(nk, s, q)
                if rep.ok and (n > 12 or brute_force_split(nk, q) is not None):
                    ok += 1
                cuts[len(s.cuts)] += 1
            hist = " ".join("%d:%d" % kv for kv in sorted(cuts.items()))
            print("%3d %3d %6d %8d %10s %9.2f" % (n, q, len(strings), ok, hist, time.perf_counter() - t0))


if __name__ == "__main__":
    main()
