"""Print the pairing ladder for every necklace of a given size."""

import argparse
from itertools import product

from polychain.dold import eta_chain_map, solve_phi, verify_pairing
from polychain.necklace import Necklace, build_L


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--types", type=int, default=2)
    ap.add_argument("--prime", type=int, default=2)
    args = ap.parse_args()
    t, p = args.types, args.prime
    D = t * (p - 1)
    eta = eta_chain_map(build_L(t, p), p, D)
    phi = solve_phi(p, D)
    letters = "abcdefgh"[:t]
    for beads in product(letters, repeat=args.n):
        if len(set(beads)) < t:
            continue
        rep = verify_pairing(Necklace(beads), p, eta=eta, phi=phi, strict=False)
        values = " ".join(str(r["value"]) for r in rep.rungs)
        print("%-10s rungs [%s]  closing %d  witnesses %d/%d  %s"
              % (rep.necklace, values, rep.closing, rep.overlap, rep.witness_faces,
                 "ok" if rep.ok else "MISMATCH"))


if __name__ == "__main__":
    main()
