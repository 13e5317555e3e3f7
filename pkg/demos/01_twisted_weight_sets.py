"""Walk through the twisted affine data attached to finite-order
automorphisms: eigenspace decompositions, labels, and the level-c weight
sets D_c.

Run:  python demos/01_twisted_weight_sets.py
"""

from fractions import Fraction as Q

from twistblocks.twist import automorphism_from_spec, weight_str


def show(sigma, levels=(1, 2, 3, 4)):
    print("=" * 64)
    print(sigma.describe())
    print("  fixed subalgebra of tau:", "%s%d" % sigma.tau.folded_type,
          "| <theta0,theta0>_tau =", sigma.tau.theta0_norm)
    print("  eigenspace dims:", sigma.eigenspace_dims())
    print("  labels s_i:", sigma.s, "| normalized:", sigma.sbar,
          "| gcd:", sigma.sbar_gcd)
    for c in levels:
        rows = sigma.enumerate_Dc(c)
        mark = "0 in D_c" if sigma.zero_in_Dc(c) else "0 not in D_c"
        print("  D_%d (%d weights, %s): %s"
              % (c, len(rows), mark,
                 "  ".join("(%s)" % weight_str(w) for w in rows)))


def main():
    # the untwisted baseline: D_c is the level-c alcove
    show(automorphism_from_spec("A", 1, "id", None, 1))

    # diagram automorphisms: the A2 flip is the (A_2n, 2) special case,
    # where 0 belongs to D_c only at even levels
    show(automorphism_from_spec("A", 2, "flip", None, 2))
    show(automorphism_from_spec("A", 3, "flip", None, 2))

    # triality on D4 folds to G2
    show(automorphism_from_spec("D", 4, "rot3", None, 3), levels=(1, 2, 3))

    # inner twists: the fixed subalgebra degenerates to a torus and the
    # weight sets acquire fractional coordinates
    show(automorphism_from_spec("A", 1, "id", (1,), 2))
    show(automorphism_from_spec("A", 1, "id", (1,), 3), levels=(1, 2))

    # duality: mu -> mu* permutes each D_c
    sigma = automorphism_from_spec("A", 2, "id", (1, 1), 3)
    show(sigma, levels=(1, 2))
    for mu in sigma.enumerate_Dc(2):
        print("  dual of (%s) is (%s)"
              % (weight_str(mu), weight_str(sigma.dual_weight(mu))))


if __name__ == "__main__":
    main()
