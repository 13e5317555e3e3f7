"""Command-line front end.

Subcommands: dc, virasoro, gluing-check, factorize, dim, oracle.  All
numeric output is exact (printed as p/q); every run starts with a manifest
header echoing the command.  Exit codes: 0 success, 2 input validation,
3 resource/window, 4 missing table data.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .errors import (MissingDataError, TwistblocksError, ValidationError,
                     WindowError)
from .twist import automorphism_from_spec, parse_weight, weight_str


def _manifest(args, extra=""):
    argv = " ".join(sys.argv[1:])
    print("# twistblocks %s | %s | exact-arithmetic=rational/cyclotomic%s"
          % (__version__, argv, extra))


def _sigma_from_args(args):
    h = None
    if args.h is not None:
        h = tuple(int(x) for x in args.h.split(",")) if args.h else None
    sig = automorphism_from_spec(args.series, args.rank, args.tau, h, args.m)
    return sig


def cmd_dc(args):
    _manifest(args)
    sig = _sigma_from_args(args)
    rows = sig.enumerate_Dc(args.c)
    print("# %s | level %d | %d weights" % (sig.describe(), args.c, len(rows)))
    for wt in rows:
        print(weight_str(wt))
    return 0


def cmd_virasoro(args):
    from .loop_rep import build_integrable_truncation
    from .sugawara import virasoro_defect
    _manifest(args)
    sig = _sigma_from_args(args)
    lam = parse_weight(args.lam) if args.lam else (Fraction(0),) * sig.folded_rank
    trunc = build_integrable_truncation(sig, lam, args.c, args.d_max)
    report, expected = virasoro_defect(sig, trunc, args.n, args.k)
    print("# %s | level %d | lambda (%s) | [L_%d, L_%d]"
          % (sig.describe(), args.c, weight_str(lam), args.n, args.k))
    print("# expected scalar %s" % expected)
    ok = True
    for (d, is_scalar, val) in report:
        sval = str(val) if val is not None else "-"
        verdict = "ok" if (is_scalar and val == expected) else "FAIL"
        ok = ok and verdict == "ok"
        print("%d %s %s %s" % (d, "scalar" if is_scalar else "nonscalar",
                               sval, verdict))
    return 0 if ok else 1


def cmd_gluing_check(args):
    from .gluing import (annihilation_sweep, build_gluing_tensor,
                         identity_element_checks)
    _manifest(args)
    sig = _sigma_from_args(args)
    mu = parse_weight(args.mu) if args.mu else (Fraction(0),) * sig.folded_rank
    dmax = args.d_top + args.n_max
    tensor = build_gluing_tensor(sig, mu, args.c, dmax)
    ident = identity_element_checks(tensor)
    fails = annihilation_sweep(tensor, args.n_max, args.d_top)
    print("# %s | level %d | mu (%s) | degree-0 identity element: %s"
          % (sig.describe(), args.c, weight_str(mu), "ok" if ident else "FAIL"))
    print("# annihilation sweep |n| <= %d, d <= %d: %d failures"
          % (args.n_max, args.d_top, len(fails)))
    for f in fails:
        print("FAIL n=%d sector=%d index=%d d=%d" % f)
    return 0 if ident and not fails else 1


def _load_problem(path):
    from .curve import BlockProblem, load_curve_json
    with open(path) as fh:
        data = json.load(fh)
    curve = load_curve_json(data)
    return BlockProblem(curve=curve)


def cmd_factorize(args):
    from .curve import reduce_to_trinions, tree_leaves
    _manifest(args)
    prob = _load_problem(args.curve)
    tree = reduce_to_trinions(prob)
    leaves = tree_leaves(tree)
    print("# %d trinion leaves" % len(leaves))
    _print_tree(tree, 0)
    return 0


def _print_tree(tree, depth):
    pad = "  " * depth
    if "leaf" in tree:
        print("%sleaf %s" % (pad, _sig_str(tree["leaf"])))
        return
    mv = tree["move"]
    print("%sfactorize node endpoints=%s stab=%d char=%d"
          % (pad, mv[1], mv[2], mv[3]))
    for ch in tree["children"]:
        print("%s mu = (%s)" % (pad, ch["mu"]))
        for part in ch["parts"]:
            _print_tree(part, depth + 2)


def _sig_str(sig):
    return " | ".join("e=%d p=%d wt=(%s)" % (e, p, weight_str(w))
                      for (e, p, w) in sig)


def cmd_dim(args):
    from .coinvariants import oracle_fill_fusion
    from .curve import (FusionTable, collect_leaf_signatures, dimension,
                        fill_with_verlinde)
    _manifest(args)
    prob = _load_problem(args.curve)
    table = FusionTable()
    if args.fusion:
        with open(args.fusion) as fh:
            table = FusionTable.from_json(json.load(fh))
    sigs = collect_leaf_signatures(prob)
    if args.oracle:
        fill_with_verlinde(sigs, table, prob.curve.action, prob.curve.level)
        table, _ = oracle_fill_fusion(prob.curve.action, prob.curve.level,
                                      sigs, table, d_max=args.oracle_dmax)
    val = dimension(prob, table)
    print("# %d trinion signatures" % len(sigs))
    for sig in sorted(sigs):
        print("# table[%s] = %d (%s)" % (_sig_str(sig), table.get(sig),
                                         table.provenance.get(
                                             tuple(sorted(sig)), "user")))
    print("dimension %d" % val)
    return 0


def cmd_oracle(args):
    from .coinvariants import coinvariants_for_problem
    _manifest(args)
    prob = _load_problem(args.curve)
    if args.verlinde:
        from .verlinde import verlinde_untwisted
        curve = prob.curve
        if curve.action.N != 1:
            raise ValidationError("--verlinde needs a trivial group")
        ws = [mk.weight for mk in curve.components[0].markings]
        genus = curve.components[0].genus
        val = verlinde_untwisted(curve.action.series, curve.action.rank,
                                 curve.level, genus, ws)
        print("verlinde %d" % val)
        return 0
    rep = coinvariants_for_problem(prob, args.d_max,
                                   pole_extra=args.pole_extra,
                                   stop_early=not args.full_ladder)
    print("# coinvariant dimension ladder (degree, dim)")
    for d, v in enumerate(rep.dims):
        print("%d %d" % (d, v))
    print("stabilized %s" % ("yes" if rep.stabilized else "no"))
    if rep.value is not None:
        print("value %d" % rep.value)
    return 0 if rep.stabilized else 1


def _add_sigma_args(p):
    p.add_argument("series", type=str, help="simple series letter A..G")
    p.add_argument("rank", type=int)
    p.add_argument("--tau", default="id",
                   help="id | flip | rot3 | 1-indexed permutation")
    p.add_argument("--h", default=None,
                   help="comma list alpha_i(h) on the folded nodes")
    p.add_argument("--m", type=int, default=1)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="twistblocks",
        description="exact twisted affine Kac-Moody and conformal-block "
                    "computations")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for randomized property sampling")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("dc", help="level-c integrable weight table")
    _add_sigma_args(p)
    p.add_argument("--c", "--level", dest="c", type=int, required=True)
    p.set_defaults(fn=cmd_dc)

    p = sub.add_parser("virasoro", help="Virasoro bracket defect report")
    _add_sigma_args(p)
    p.add_argument("--c", "--level", dest="c", type=int, required=True)
    p.add_argument("--lam", default=None, help="highest weight, comma list")
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_virasoro)

    p = sub.add_parser("gluing-check", help="node gluing tensor identities")
    _add_sigma_args(p)
    p.add_argument("--c", "--level", dest="c", type=int, required=True)
    p.add_argument("--mu", default=None)
    p.add_argument("--n-max", type=int, default=2)
    p.add_argument("--d-top", type=int, default=2)
    p.set_defaults(fn=cmd_gluing_check)

    p = sub.add_parser("factorize", help="reduction tree to trinions")
    p.add_argument("curve")
    p.set_defaults(fn=cmd_factorize)

    p = sub.add_parser("dim", help="block dimension via factorization")
    p.add_argument("curve")
    p.add_argument("fusion", nargs="?", default=None)
    p.add_argument("--oracle", action="store_true",
                   help="fill missing trinions by brute force")
    p.add_argument("--oracle-dmax", type=int, default=3)
    p.set_defaults(fn=cmd_dim)

    p = sub.add_parser("oracle", help="brute-force coinvariants ladder")
    p.add_argument("curve")
    p.add_argument("--d-max", type=int, default=3)
    p.add_argument("--pole-extra", type=int, default=2)
    p.add_argument("--full-ladder", action="store_true")
    p.add_argument("--verlinde", action="store_true")
    p.set_defaults(fn=cmd_oracle)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as e:
        print("error (validation): %s" % e, file=sys.stderr)
        return 2
    except WindowError as e:
        print("error (window/resources): %s" % e, file=sys.stderr)
        return 3
    except MissingDataError as e:
        print("error (missing data): %s" % e, file=sys.stderr)
        for sig in e.missing:
            print("missing %s" % _sig_str(sig), file=sys.stderr)
        return 4
    except TwistblocksError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
