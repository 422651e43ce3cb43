"""polychain command line: split, verify, check-invariants, dold-verify, demo."""

import argparse
import json
import os
import re
import sys

from sympy import isprime

from .necklace import (Necklace, Splitting, WitnessNotFound, find_fair_split,
                       verify_splitting)

SPLIT_METHODS = ("chain", "brute")


def _emit(obj):
    print(json.dumps(obj, sort_keys=True, separators=(",", ":")))


def _necklace(text):
    text = text.strip()
    if text.startswith("{"):
        try:
            beads = json.loads(text)["beads"]
        except (ValueError, KeyError, TypeError):
            raise argparse.ArgumentTypeError("expected {\"beads\": [labels]}")
        if not beads or not isinstance(beads, list):
            raise argparse.ArgumentTypeError("beads must be a nonempty list")
        return Necklace(tuple(str(b) for b in beads))
    if not re.fullmatch(r"[a-z]+", text):
        raise argparse.ArgumentTypeError("necklace must be a string over [a-z]")
    return Necklace.from_string(text)


def _int_at_least(lo):
    def parse(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError("not an integer: %r" % text)
        if v < lo:
            raise argparse.ArgumentTypeError("must be >= %d" % lo)
        return v
    return parse


def _prime(text):
    v = _int_at_least(2)(text)
    if not isprime(v):
        raise argparse.ArgumentTypeError("%d is not prime" % v)
    return v


def _seed(text):
    v = _int_at_least(0)(text)
    if v >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _splitting(text):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return Splitting.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError):
        raise argparse.ArgumentTypeError("expected {\"cuts\": [...], \"owners\": [...]}")


def build_parser():
    ap = argparse.ArgumentParser(prog="polychain", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("split", help="fair splitting with at most t(q-1) cuts")
    sp.add_argument("--necklace", type=_necklace, required=True)
    sp.add_argument("--thieves", type=_int_at_least(2), required=True)
    sp.add_argument("--method", choices=SPLIT_METHODS, default="chain")
    sp.add_argument("--json", action="store_true")

    vp = sub.add_parser("verify", help="check a splitting for fairness and cut budget")
    vp.add_argument("--necklace", type=_necklace, required=True)
    vp.add_argument("--thieves", type=_int_at_least(2), required=True)
    vp.add_argument("--splitting", type=_splitting, required=True,
                    help="JSON text or a file holding it")
    vp.add_argument("--json", action="store_true")

    cp = sub.add_parser("check-invariants", help="seeded property suites")
    cp.add_argument("--seed", type=_seed, default=0)
    cp.add_argument("--max-dim", type=_int_at_least(1), default=4)
    cp.add_argument("--json", action="store_true")

    dp = sub.add_parser("dold-verify", help="pairing ladder on one instance")
    dp.add_argument("--n", type=_int_at_least(1), required=True)
    dp.add_argument("--types", type=_int_at_least(1), required=True)
    dp.add_argument("--prime", type=_prime, required=True)
    dp.add_argument("--necklace", type=_necklace, default=None,
                    help="defaults to beads cycling through the types")
    dp.add_argument("--timing", action="store_true", help="include wall-clock seconds")
    dp.add_argument("--json", action="store_true")

    mp = sub.add_parser("demo", help="double wrap of the hexagon and the rejected cubical map")
    mp.add_argument("--json", action="store_true")
    return ap


def cmd_split(args):
    nk, q = args.necklace, args.thieves
    try:
        s = find_fair_split(nk, q, method=args.method)
    except WitnessNotFound as e:
        if args.json:
            _emit({"error": str(e)})
        else:
            print("error: %s" % e, file=sys.stderr)
        return 1
    rep = verify_splitting(nk, s, q)
    if args.json:
        _emit({"necklace": list(nk.beads), "thieves": q, "method": args.method,
               "splitting": s.to_json(), "report": rep.to_json()})
    else:
        print("cuts:   %s" % (list(s.cuts),))
        print("owners: %s" % (list(s.owners),))
        print(rep.table(nk))
    return 0 if rep.ok else 1


def cmd_verify(args):
    nk, q = args.necklace, args.thieves
    rep = verify_splitting(nk, args.splitting, q)
    if args.json:
        _emit(rep.to_json())
    else:
        if rep.counts:
            print(rep.table(nk))
        for f in rep.flags:
            print("FLAG: %s" % f)
        print("fair and within budget" if rep.ok else "NOT a valid splitting")
    return 0 if rep.ok else 1


def cmd_check(args):
    from .suite import run_all
    results = run_all(seed=args.seed, max_dim=args.max_dim)
    ok = all(r.ok for r in results)
    if args.json:
        _emit({"seed": args.seed, "max_dim": args.max_dim, "ok": ok,
               "suites": [r.to_json() for r in results]})
    else:
        for r in results:
            print("%-4s %-45s %6d checked" % ("ok" if r.ok else "FAIL", r.name, r.checked))
        print("all invariants hold" if ok else "invariant failures")
    return 0 if ok else 1


def cmd_dold(args):
    from .dold import default_necklace, verify_pairing
    nk = args.necklace
    if nk is None:
        try:
            nk = default_necklace(args.n, args.types)
        except ValueError as e:
            print("error: %s" % e, file=sys.stderr)
            return 2
    elif nk.n != args.n or nk.t != args.types:
        print("error: necklace has n=%d, t=%d" % (nk.n, nk.t), file=sys.stderr)
        return 2
    rep = verify_pairing(nk, args.prime, strict=False)
    if args.json:
        _emit(rep.to_json(timing=args.timing))
    else:
        print("necklace %s, p=%d, %d join copies" % (rep.necklace, rep.p, rep.copies))
        for r in rep.rungs:
            print("  degree %d (%s): %d, expected %d %s"
                  % (r["degree"], r["operator"], r["value"], r["expected"], "ok" if r["ok"] else "MISMATCH"))
        print("  closing value %d, top image nonzero: %s" % (rep.closing, rep.final_nonzero))
        print("  witness faces %d (necklace search %d, shared %d)"
              % (rep.witness_faces, rep.necklace_witnesses, rep.overlap))
        if args.timing:
            print("  %.3f s" % rep.seconds)
    return 0 if rep.ok else 1


def cmd_demo(args):
    from .polymap import induce_chain_map, is_feh_cubical, validate_polytopal
    from .suite import cubical_counterexample, hexagon_double_wrap
    lam = hexagon_double_wrap()
    sharp = induce_chain_map(lam)
    top = max(lam.source.faces(), key=len)
    alpha = sharp.alpha(top)
    cub = cubical_counterexample()
    viol = validate_polytopal(cub)
    out = {"hexagon_alpha": alpha,
           "cubical_map": {"feh_cubical": is_feh_cubical(cub),
                           "violations": [{"face": sorted(cub.source.face_vertices(v.face)),
                                           "dim": v.dim, "image_dim": v.image_dim} for v in viol]}}
    if args.json:
        _emit(out)
    else:
        print("hexagon -> triangle, v_i -> i mod 3: alpha on the 2-face = %d" % alpha)
        print("3-cube -> 4-cube table map: cubical (adjacency sense) = %s" % out["cubical_map"]["feh_cubical"])
        for v in out["cubical_map"]["violations"]:
            print("  rejected: %d-face %s spans a %d-face" % (v["dim"], v["face"], v["image_dim"]))
    return 0


COMMANDS = {"split": cmd_split, "verify": cmd_verify, "check-invariants": cmd_check,
            "dold-verify": cmd_dold, "demo": cmd_demo}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags and 0 on --help
        return e.code
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
