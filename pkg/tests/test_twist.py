import random
from fractions import Fraction as Q

import pytest

from twistblocks.errors import ValidationError
from twistblocks.finite_rep import build_finite_module
from twistblocks.twist import automorphism_from_spec

CASES = {
    "sl2": ("A", 1, "id", None, 1),
    "sl2_inner2": ("A", 1, "id", (1,), 2),
    "sl2_inner3": ("A", 1, "id", (1,), 3),
    "a2_flip": ("A", 2, "flip", None, 2),
    "a3_flip": ("A", 3, "flip", None, 2),
    "a4_flip": ("A", 4, "flip", None, 2),
    "d4_flip": ("D", 4, "flip", None, 2),
    "d4_rot3": ("D", 4, "rot3", None, 3),
    "sl3_inner3": ("A", 2, "id", (1, 1), 3),
}


def sigma(name):
    return automorphism_from_spec(*CASES[name])


def test_eigenspace_dimensions():
    expect = {
        "sl2": {0: 3},
        "sl2_inner2": {0: 1, 1: 2},
        "a2_flip": {0: 3, 1: 5},
        "a3_flip": {0: 10, 1: 5},
        "a4_flip": {0: 10, 1: 14},
        "d4_flip": {0: 21, 1: 7},
        "d4_rot3": {0: 14, 1: 7, 2: 7},
        "sl3_inner3": {0: 2, 1: 3, 2: 3},
    }
    for name, dims in expect.items():
        s = sigma(name)
        assert s.eigenspace_dims() == dims, name
        assert sum(dims.values()) == s.algebra.dimension


def test_folded_types_and_theta_norm():
    # case list: <theta0, theta0>_tau is 2/r, and 2 for (A_2n, 2)
    assert sigma("a2_flip").tau.folded_type == ("A", 1)
    assert sigma("a2_flip").tau.theta0_norm == 2
    assert sigma("a4_flip").tau.folded_type == ("B", 2)
    assert sigma("a4_flip").tau.theta0_norm == 2
    assert sigma("a3_flip").tau.folded_type == ("C", 2)
    assert sigma("a3_flip").tau.theta0_norm == 1
    assert sigma("d4_flip").tau.folded_type == ("B", 3)
    assert sigma("d4_flip").tau.theta0_norm == 1
    assert sigma("d4_rot3").tau.folded_type == ("G", 2)
    assert sigma("d4_rot3").tau.theta0_norm == Q(2, 3)


def test_h_o_closed_form_a2n():
    # for the A_2n flip, [x_o, y_o] = -(coroot_1 + ... + coroot_{n-1}
    #                                   + coroot_n / 2)
    s = sigma("a2_flip")
    assert s.tau.h_o_coroot == (Q(-1, 2),)
    s = sigma("a4_flip")
    assert s.tau.h_o_coroot == (Q(-1), Q(-1, 2))
    # untwisted: h_o = -theta-coroot
    s = sigma("sl2")
    assert s.tau.h_o_coroot == (Q(-1),)


def test_diagram_automorphism_labels():
    # sigma = tau: s_i = 0 on the folded nodes and s_o = 1
    for name in ("a2_flip", "a3_flip", "d4_flip", "d4_rot3"):
        s = sigma(name)
        assert s.s["o"] == 1
        assert all(s.s[i] == 0 for i in range(s.folded_rank))


def test_g0_closed_under_bracket():
    for name in ("a2_flip", "d4_rot3", "sl2_inner2", "sl3_inner3"):
        s = sigma(name)
        g0 = s.eig[0]
        for a in g0:
            for b in g0:
                br = s.algebra.bracket(a.vec, b.vec)
                if br:
                    coords = s.eigen_coords(br)
                    assert all(j == 0 for (j, _) in coords)


def test_n_coefficient_examples():
    # untwisted sl2, lambda = k omega: n_o = c - k, n_1 = k
    s = sigma("sl2")
    for k in range(4):
        for c in range(1, 5):
            ns = s.n_coefficients((Q(k),), c)
            assert ns[0] == k and ns["o"] == c - k
    # (A_2n, 2), lambda = 0, c = 1: n_o = 1/2
    s2 = sigma("a2_flip")
    assert s2.n_coefficients((Q(0),), 1)["o"] == Q(1, 2)
    # zero case at every sigma: lambda = 0, formally c -> 0 effect
    for name in CASES:
        s = sigma(name)
        zero = (Q(0),) * s.folded_rank
        ns1 = s.n_coefficients(zero, 1)
        ns2 = s.n_coefficients(zero, 2)
        for i in s.labels:
            # coefficients are linear in c with zero constant term at lambda=0
            assert ns2[i] == 2 * ns1[i]


def independent_dc_scan(s, c):
    """Brute-force dominant-weight scan with coordinates bounded by c*m,
    shifted by the fractional offsets the labels force."""
    l = s.folded_rank
    bound = c * s.m + 2
    offs = [Q(s.sbar[i] * c, s.m) for i in range(l)]
    found = set()

    def rec(prefix):
        i = len(prefix)
        if i == l:
            lam = tuple(prefix)
            ns = s.n_coefficients(lam, c)
            if all(v.denominator == 1 and v >= 0 for v in ns.values()):
                found.add(lam)
            return
        base = -offs[i]
        k = 0
        while base + k <= bound:
            rec(prefix + [base + k])
            k += 1

    rec([])
    return found


@pytest.mark.parametrize("name", ["sl2", "sl2_inner2", "sl2_inner3",
                                  "a2_flip", "a3_flip", "d4_rot3"])
def test_enumerate_dc_vs_scan(name):
    s = sigma(name)
    for c in range(1, 5):
        got = set(s.enumerate_Dc(c))
        want = independent_dc_scan(s, c)
        assert got == want, (name, c)
        assert got, "D_c must be nonempty"
        assert s.zero_in_Dc(c) == (((Q(0),) * s.folded_rank) in got)


def test_zero_in_dc_corollary():
    # m | c implies 0 in D_c; (A_2n, 2): 0 in D_c iff c even
    for name in CASES:
        s = sigma(name)
        for c in range(1, 7):
            if c % s.m == 0:
                assert s.zero_in_Dc(c)
    s2 = sigma("a2_flip")
    for c in range(1, 7):
        assert s2.zero_in_Dc(c) == (c % 2 == 0)
        dc = s2.enumerate_Dc(c)
        if c % 2 == 1:
            # omega_n belongs to D_c for odd c
            assert (Q(1),) in dc and (Q(0),) not in dc


def test_dual_weight_involution_and_bijection():
    for name in ("sl2", "a2_flip", "a3_flip", "sl2_inner2", "sl3_inner3",
                 "d4_rot3"):
        s = sigma(name)
        for c in (1, 2, 3):
            dc = set(s.enumerate_Dc(c))
            for mu in dc:
                mustar = s.dual_weight(mu)
                assert s.dual_weight(mustar) == mu
            assert {s.dual_weight(mu) for mu in dc} == set(
                sorted(s.dual_weight(mu) for mu in dc))


def test_dual_weight_character_oracle():
    # weights of V(mu*) are the negatives of the weights of V(mu)
    s = automorphism_from_spec("A", 2, "id", None, 1)
    mu = (Q(1), Q(0))
    mustar = s.dual_weight(mu)
    assert mustar == (Q(0), Q(1))
    m1 = build_finite_module(s, mu)
    m2 = build_finite_module(s, mustar)
    w1 = sorted(tuple(-x for x in w) for w in m1.weights)
    w2 = sorted(tuple(x for x in w) for w in m2.weights)
    assert w1 == w2
    # sl2: dual is the identity; 0 is self dual everywhere
    s2 = sigma("sl2")
    for k in range(4):
        assert s2.dual_weight((Q(k),)) == (Q(k),)
    for name in CASES:
        ss = sigma(name)
        zero = (Q(0),) * ss.folded_rank
        assert ss.dual_weight(zero) == zero


def test_dual_weight_rejects_non_dominant():
    s = sigma("sl2")
    with pytest.raises(ValidationError):
        s.dual_weight((Q(-1),))


def test_realization_map():
    # inner sl2 with alpha(h) = 1, m = 2: e[t^j] -> e[t^{2j+1}]
    s = sigma("sl2_inner2")
    alg = s.algebra
    e = {alg.e(0): s.field.one}
    for j in (-2, -1, 0, 1, 2):
        img, central = s.realization_map(e, j)
        assert len(img) == 1 and not central
        (_, coeff, power) = img[0]
        assert power == 2 * j + 1
    h = {alg.h(0): s.field.one}
    img, central = s.realization_map(h, 0)
    assert img[0][2] == 0
    # tau-fixed ad-h-eigenvalue-0 component of x[t^0] -> x[t^0]
    s2 = sigma("a2_flip")
    x0 = s2.gen_x[0]
    img, central = s2.realization_map(x0, 0)
    assert all(p == 0 for (_, _, p) in img) and not central


def as_frac(x):
    from twistblocks.field import as_fraction
    return as_fraction(x)


@pytest.mark.parametrize("name", ["sl2_inner2", "sl2_inner3", "a2_flip"])
def test_realization_preserves_brackets(name):
    """phi([a,b]) = [phi(a), phi(b)] on sampled pairs, including central
    terms: the tau-side cocycle uses (1/r) Res, the sigma side (1/m) Res,
    and the degree-zero Cartan correction closes the gap exactly."""
    rng = random.Random(5)
    s = sigma(name)
    alg = s.algebra
    r = s.tau.order
    for _ in range(100):
        i, j = rng.randrange(alg.dimension), rng.randrange(alg.dimension)
        dj, dk = rng.randint(-2, 2), rng.randint(-2, 2)
        x, y = {i: s.field.one}, {j: s.field.one}
        # restrict to legal tau-side elements: keep the tau-eigencomponents
        # of x with exponent dj (the map decomposes inputs anyway)
        ix, _ = s.realization_map(x, dj)
        iy, _ = s.realization_map(y, dk)

        def part(terms):
            out = {}
            for (key, coeff, _) in terms:
                for bidx, v in s.eig_elem(*key).items():
                    out[bidx] = out.get(bidx, s.field.zero) + coeff * v
            return {k: v for k, v in out.items() if v}

        xp, yp = part(ix), part(iy)
        br = alg.bracket(xp, yp)
        img_br, eta = (s.realization_map(br, dj + dk) if br
                       else ([], s.field.zero))
        acc = {}
        sig_central = Q(0)
        for (ka, ca, pa) in ix:
            for (kb, cb, pb) in iy:
                coords, f2 = s.bracket_eigen(ka, kb)
                for kk, cc in coords.items():
                    key = (kk, pa + pb)
                    acc[key] = acc.get(key, s.field.zero) + ca * cb * cc
                if pa + pb == 0 and f2:
                    sig_central += Q(pa, s.m) * as_frac(ca * cb * f2)
        want = {}
        for (kk, cc, pp) in img_br:
            want[(kk, pp)] = want.get((kk, pp), s.field.zero) + cc
        acc = {k: v for k, v in acc.items() if v}
        want = {k: v for k, v in want.items() if v}
        assert acc == want
        # central: (dj/r) delta <x_dj-part, y_dk-part> + eta == sigma-side
        tau_central = Q(0)
        if dj + dk == 0:
            for (ka, ca, pa) in ix:
                for (kb, cb, pb) in iy:
                    f2 = s.form_eigen(ka, kb)
                    if f2:
                        tau_central += Q(dj, r) * as_frac(ca * cb * f2)
        assert sig_central == tau_central + as_frac(eta)


def test_automorphism_validation():
    with pytest.raises(ValidationError):
        automorphism_from_spec("A", 1, "id", (7,), 2)   # theta_0(h) > m/r
    with pytest.raises(ValidationError):
        automorphism_from_spec("A", 1, "id", (-1,), 2)  # negative label
    with pytest.raises(ValidationError):
        automorphism_from_spec("A", 2, "flip", None, 3)  # r does not divide m
    with pytest.raises(ValidationError):
        automorphism_from_spec("A", 2, "2,3", None, 2)   # not a permutation


def test_weight_serialization_roundtrip():
    from twistblocks.twist import parse_weight, weight_str
    for wt in [(Q(0),), (Q(1), Q(-2)), (Q(1, 2), Q(3, 4))]:
        assert parse_weight(weight_str(wt)) == wt
