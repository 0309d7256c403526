"""Command line front end: ``balancing-proof <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import bounds, prover
from .numerics import PrecisionPolicy
from .sequences import balancing, lucas_balancing


def _int(text):
    return prover._parse_int(text)


def cmd_sequence(args):
    term = balancing if args.kind == "B" else lucas_balancing
    for n in range(args.start, args.stop + 1):
        print(term(n).value)
    return 0


def cmd_reduce(args):
    policy = PrecisionPolicy(args.digits, max(args.digits, args.max_digits))
    ns = range(2, 38) if args.all else [args.n]
    ok = True
    for n in ns:
        inst = bounds.balancing_instance(n, args.M, Fraction(args.B))
        try:
            out = bounds.baker_davenport_reduce(inst, args.cf_budget, policy)
        except ArithmeticError as exc:
            print("n=%d error=%s" % (n, exc))
            ok = False
            continue
        rec = prover.hp_record(out.epsilon, 12)
        print(
            "n=%d q=%d eps=%s k_bound=%d x_cap=%d attempts=%d"
            % (n, out.q_used, rec["approx"], out.k_bound, out.x_cap, out.attempts)
        )
    return 0 if ok else 1


def cmd_search(args):
    rng = prover.SearchRange(args.n_lo, args.n_hi, args.x_lo, args.x_hi)
    hits = prover.small_n_search(rng)
    for h in hits:
        print("m=%d n=%d x=%d" % (h.m, h.n, h.x))
    print("cells=%d hits=%d" % (rng.cells(), len(hits)))
    return 0


def cmd_legendre(args):
    rec = prover.legendre_stage(args.x_cap)
    for key in ("k_star", "q_kstar", "a_max", "a_max_next", "conclusion", "verdict"):
        print("%s=%s" % (key, rec.get(key)))
    if "error" in rec:
        print("error=%s" % rec["error"])
    return 0 if rec["verdict"] == "pass" else 1


def cmd_final_grid(args):
    rec = prover.grid_stage(prover.ProverConfig(grid_x_hi=args.x_hi))
    am = rec["argmin"]
    print("cells=%d" % rec["cells"])
    print("min=%s err=%s" % (rec["min_value"]["approx"], rec["min_value"]["err"]))
    print("argmin x=%d t=%d variant=%s" % (am["x"], am["t"], am["sign_variant"]))
    print("all_cells_above_tenth=%s" % rec["all_cells_above_tenth"])
    print("n_bound_from_min=%s" % rec["n_bound_from_min"])
    return 0 if rec["verdict"] == "pass" else 1


def cmd_prove(args):
    config = prover.load_config(args.config) if args.config else prover.ProverConfig()
    cert = prover.prove(config)
    text = json.dumps(cert, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for name, stage in cert["stages"].items():
        print("%-16s %s" % (name, stage["verdict"]), file=sys.stderr)
    print("overall          %s" % cert["verdict"], file=sys.stderr)
    return 0 if cert["verdict"] == "pass" else 1


def cmd_verify(args):
    with open(args.cert) as fh:
        cert = json.load(fh)
    results = prover.verify_certificate(cert)
    for name, ok in results.items():
        print("%-16s %s" % (name, "ok" if ok else "FAILED"))
    return 0 if all(results.values()) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="balancing-proof", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sequence", help="print B_n or C_n, one per line")
    s.add_argument("--kind", choices=["B", "C"], default="B")
    s.add_argument("--from", dest="start", type=int, default=0)
    s.add_argument("--to", dest="stop", type=int, default=9)
    s.set_defaults(func=cmd_sequence)

    s = sub.add_parser("reduce", help="Baker-Davenport reduction per n")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--all", action="store_true", help="every n in [2, 37]")
    s.add_argument("--M", type=_int, default=bounds.SMALL_N_M)
    s.add_argument("--B", default="5.8")
    s.add_argument("--cf-budget", type=int, default=64)
    s.add_argument("--digits", type=int, default=200)
    s.add_argument("--max-digits", type=int, default=3200)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("search", help="exhaustive search over an (n, x) box")
    s.add_argument("--n-lo", type=int, default=2)
    s.add_argument("--n-hi", type=int, default=37)
    s.add_argument("--x-lo", type=int, default=3)
    s.add_argument("--x-hi", type=int, default=77)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("legendre", help="continued-fraction audit for x > 100")
    s.add_argument("--x-cap", type=_int, default=7 * 10**28)
    s.set_defaults(func=cmd_legendre)

    s = sub.add_parser("final-grid", help="evaluate the final (x, t) grid")
    s.add_argument("--x-hi", type=int, default=100)
    s.set_defaults(func=cmd_final_grid)

    s = sub.add_parser("prove", help="run every stage and emit the certificate")
    s.add_argument("--config")
    s.add_argument("--out")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("verify", help="re-check a stored certificate")
    s.add_argument("cert")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
