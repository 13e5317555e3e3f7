"""Block dimensions on nodal covers: the factorization recursion against
the two independent oracles (fusion recursion; brute-force coinvariants).

Run:  python demos/04_factorization_and_oracles.py
"""

import json
import os
from fractions import Fraction as Q

from twistblocks.coinvariants import coinvariants_bruteforce, oracle_fill_fusion
from twistblocks.curve import (BlockProblem, FusionTable,
                               collect_leaf_signatures, dimension,
                               fill_with_verlinde, load_curve_json)
from twistblocks.verlinde import verlinde_untwisted

HERE = os.path.dirname(__file__)


def load(name):
    with open(os.path.join(HERE, "curves", name)) as fh:
        return BlockProblem(curve=load_curve_json(json.load(fh)))


def main():
    # untwisted four-point blocks against the fusion recursion
    for name, want in [("p1_4pt_sl2_c1.json", 1), ("p1_4pt_sl2_c2.json", 2),
                       ("genus1_sl2_c1.json", 2)]:
        prob = load(name)
        table = FusionTable()
        fill_with_verlinde(collect_leaf_signatures(prob), table,
                           prob.curve.action, prob.curve.level)
        val = dimension(prob, table)
        print("%-24s dimension %d (fusion oracle %d)" % (name, val, want))

    # the Z/2-twisted nodal curve: trinion values come from the brute-force
    # coinvariants oracle, and the total must match the direct computation
    # on the smooth four-orbit cover
    prob = load("z2_4pt_sl2_c2.json")
    sigs = collect_leaf_signatures(prob)
    table = FusionTable()
    table, _ = oracle_fill_fusion(prob.curve.action, 2, sigs, table, d_max=3)
    print("z2_4pt_sl2_c2.json trinion table:")
    for sig, v in sorted(table.entries.items()):
        print("   ", sig, "->", v)
    engine = dimension(prob, table)
    direct = coinvariants_bruteforce(
        prob.curve.action, 2,
        [(2, 1, (Q(0),)), (2, 1, (Q(0),)), (1, 0, (Q(1),)), (1, 0, (Q(1),))],
        3)
    print("factorization: %d | direct coinvariants: %s" % (engine, direct))


if __name__ == "__main__":
    main()
