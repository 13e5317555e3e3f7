"""Truncated highest-weight modules and the Sugawara action.

Builds generalized Verma truncations and their integrable quotients,
compares graded dimensions with the PBW generating function, and verifies
the Virasoro bracket on exact matrices.

Run:  python demos/02_modules_and_sugawara.py
"""

from fractions import Fraction as Q

from twistblocks.loop_rep import (build_integrable_truncation,
                                  build_verma_truncation, pbw_graded_dims)
from twistblocks.sugawara import (build_L0, scalar_of_matrix,
                                  parameter_change_scalar, virasoro_defect)
from twistblocks.twist import automorphism_from_spec


def main():
    sl2 = automorphism_from_spec("A", 1, "id", None, 1)
    vac = (Q(0),)

    verma = build_verma_truncation(sl2, vac, 1, 5)
    print("sl2 level-1 Verma graded dims:", verma.graded_dims())
    print("PBW generating function      :",
          pbw_graded_dims(sl2, verma.finite.dim, 5))

    hq = build_integrable_truncation(sl2, vac, 1, 5)
    print("integrable quotient dims     :", hq.graded_dims())
    print("kernel dims per degree       :",
          [hq.kernel_dim(d) for d in range(6)])

    # L_0 acts on the highest weight vector by the Casimir eigenvalue
    for lam, c in [((Q(1),), 1), ((Q(2),), 2)]:
        h = build_integrable_truncation(sl2, lam, c, 2)
        L0 = build_L0(sl2, h)
        val = scalar_of_matrix(L0.matrix(0), h.layer_dim(0), sl2.field)
        print("L_0 on v+ for lambda=%s c=%d: %s" % (lam, c, val))

    # the Virasoro relation with its exact central term
    for (n, k) in [(1, -1), (2, -2), (1, 1)]:
        rep, expected = virasoro_defect(sl2, hq, n, k)
        print("[L_%d, L_%d] - (n-k) L_{n+k}: expected %s, layers %s"
              % (n, k, expected,
                 [(d, str(v)) for (d, ok, v) in rep]))

    # twisted module: the A2 flip at level 2
    a2 = automorphism_from_spec("A", 2, "flip", None, 2)
    h2 = build_integrable_truncation(a2, (Q(0),), 2, 4)
    print("A2-flip level-2 vacuum dims  :", h2.graded_dims())
    rep, expected = virasoro_defect(a2, h2, 2, -2)
    print("twisted [L_2, L_-2] central term: expected %s, got %s"
          % (expected, rep[0][2]))

    # reparameterization changes the Sugawara action by a scalar only
    b = parameter_change_scalar(sl2, hq, {0: 1, 1: 1}, {1: Q(1)})
    print("parameter change t -> t(1+t), theta = t d/dt: scalar b =", b)


if __name__ == "__main__":
    main()
