"""Gluing tensors at a node: the branch pairing and the annihilation
identity that makes node smoothing work.

Run:  python demos/03_gluing_tensors.py
"""

from fractions import Fraction as Q

from twistblocks.gluing import (annihilation_sweep, build_gluing_tensor,
                                identity_element_checks)
from twistblocks.twist import automorphism_from_spec, weight_str


def main():
    sl2 = automorphism_from_spec("A", 1, "id", None, 1)
    for mu, c in [((Q(0),), 1), ((Q(1),), 1)]:
        gt = build_gluing_tensor(sl2, mu, c, 4)
        print("sl2 c=%d mu=(%s): H(mu*) dims %s"
              % (c, weight_str(mu), gt.trunc.graded_dims()))
        print("  Delta_0 is the identity element:",
              identity_element_checks(gt))
        fails = annihilation_sweep(gt, 2, 2)
        print("  annihilation identity, |n| <= 2, d <= 2:",
              "all pass" if not fails else fails)

    a2 = automorphism_from_spec("A", 2, "flip", None, 2)
    gt = build_gluing_tensor(a2, (Q(2),), 2, 3)
    print("A2-flip c=2 mu=(2): dims %s, identity %s, sweep %s"
          % (gt.trunc.graded_dims(), identity_element_checks(gt),
             "all pass" if not annihilation_sweep(gt, 2, 1) else "FAIL"))


if __name__ == "__main__":
    main()
