import random
from fractions import Fraction as Q

import pytest

from twistblocks.errors import ValidationError
from twistblocks.gluing import (annihilation_sweep, build_gluing_tensor,
                                build_pairing, check_annihilation,
                                identity_element_checks)
from twistblocks.linalg import sparse_rank
from twistblocks.twist import automorphism_from_spec


def sl2():
    return automorphism_from_spec("A", 1, "id", None, 1)


def test_pairing_nondegenerate():
    s = sl2()
    for mu in [(Q(0),), (Q(1),)]:
        for d in range(3):
            g, trunc = build_pairing(s, mu, 1, d)
            rows = [{j: v for j, v in enumerate(row) if v} for row in g]
            assert sparse_rank(rows) == trunc.layer_dim(d)
    # degree-0 pairing is the canonical V(mu)-dual Gram
    g, trunc = build_pairing(s, (Q(1),), 1, 0)
    assert len(g) == 2


def test_pairing_requires_membership():
    s = sl2()
    with pytest.raises(ValidationError):
        build_pairing(s, (Q(2),), 1, 1)  # 2 omega is not level 1


def test_identity_element():
    s = sl2()
    for mu, c in [((Q(0),), 1), ((Q(1),), 1), ((Q(2),), 2)]:
        gt = build_gluing_tensor(s, mu, c, 2)
        assert identity_element_checks(gt)
    s2 = automorphism_from_spec("A", 2, "flip", None, 2)
    for mu in [(Q(0),), (Q(2),)]:
        gt = build_gluing_tensor(s2, mu, 2, 2)
        assert identity_element_checks(gt)


def test_annihilation_sweep_small():
    s = sl2()
    gt = build_gluing_tensor(s, (Q(0),), 1, 4)
    assert annihilation_sweep(gt, 2, 2) == []
    gt = build_gluing_tensor(s, (Q(1),), 2, 4)
    assert annihilation_sweep(gt, 2, 2) == []


def test_annihilation_vacuous_cases():
    s = sl2()
    gt = build_gluing_tensor(s, (Q(0),), 1, 3)
    # d + n < 0 and the d-layer empty: both terms vanish
    ev = s.eig[0][0]
    assert check_annihilation(gt, ev.vec, -5, 1)
    # empty layer gives a zero tensor
    assert gt.delta(-1) is None


def test_delta_degree1_rank():
    s = sl2()
    gt = build_gluing_tensor(s, (Q(0),), 1, 1)
    d1 = gt.delta(1)
    rows = [{j: v for j, v in enumerate(row) if v} for row in d1]
    assert sparse_rank(rows) == 3


def test_adjoint_compatibility_random():
    """b(x[z'^n] h1, h2) + b(h1, x[z''^{-n}] h2) = 0 through the matrices:
    G_d A + B^T G_{d+n} = 0."""
    from twistblocks.linalg import mat_apply
    s = automorphism_from_spec("A", 2, "flip", None, 2)
    gt = build_gluing_tensor(s, (Q(0),), 2, 3)
    trunc = gt.trunc
    F = s.field
    rng = random.Random(8)
    om = s.algebra.cartan_involution_matrix()
    for _ in range(60):
        n = rng.randint(-2, 2)
        d = rng.randint(0, 3 - max(n, 0))
        if d + n < 0 or d + n > 3:
            continue
        sector = s.eig[n % s.m]
        ev = sector[rng.randrange(len(sector))]
        rows_a = trunc.layer_dim(d)
        cols_b = trunc.layer_dim(d + n)
        if not rows_a or not cols_b:
            continue
        u = {rng.randrange(cols_b): F.one}
        w = {rng.randrange(rows_a): F.one}
        # lhs: b(x[t^n] u, w) at degree d
        xu = mat_apply(trunc.elem_matrix(ev.vec, n, d + n), u)
        g = trunc.gram(d)
        lhs = F.zero
        for i, ci in xu.items():
            for j, cj in w.items():
                lhs = lhs + ci * cj * g[i][j]
        # rhs: b(u, (omega x)[t^{-n}] w) at degree d + n
        ox = s.algebra.apply_basis_map(om, ev.vec)
        oxw = mat_apply(trunc.elem_matrix(ox, -n, d), w)
        g2 = trunc.gram(d + n)
        rhs = F.zero
        for i, ci in u.items():
            for j, cj in oxw.items():
                rhs = rhs + ci * cj * g2[i][j]
        assert lhs + rhs == F.zero
