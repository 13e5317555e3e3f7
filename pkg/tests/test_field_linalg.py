import random
from fractions import Fraction as Q

import pytest

from twistblocks.field import CycField, as_fraction, cyclotomic_poly
from twistblocks.linalg import (Echelon, mat_inverse, nullspace_dense,
                                solve_dense, solve_rectangular, sparse_rank)


def test_cyclotomic_polynomials():
    # degrees are Euler phi(M)
    for M, deg in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (12, 4)]:
        assert len(cyclotomic_poly(M)) - 1 == deg


@pytest.mark.parametrize("M", [1, 2, 3, 4, 6])
def test_roots_of_unity(M):
    F = CycField(M)
    z = F.zeta(1)
    acc = F.one
    for k in range(M):
        assert acc == F.zeta(k)
        acc = acc * z
    assert acc == F.one
    if M > 1:
        s = F.zero
        for k in range(M):
            s = s + F.zeta(k)
        assert not s


def test_field_inverse_random():
    rng = random.Random(7)
    for M in (3, 4, 6):
        F = CycField(M)
        for _ in range(25):
            x = F.zero
            for k in range(F.degree):
                x = x + F.zeta(k) * Q(rng.randint(-4, 4), rng.randint(1, 5))
            if not x:
                continue
            assert x * (F.one / x) == F.one


def test_subfield_embedding():
    F3, F6 = CycField(3), CycField(6)
    assert F6.embed(F3.zeta(1), F3) == F6.zeta(2)
    assert as_fraction(F3.zeta(1) + F3.zeta(2)) == Q(-1)


def test_echelon_and_rank():
    rows = [{0: Q(1), 1: Q(2)}, {0: Q(2), 1: Q(4)}, {1: Q(1), 2: Q(1)}]
    assert sparse_rank(rows) == 2
    ech = Echelon()
    for r in rows:
        ech.add(dict(r))
    assert ech.contains({0: Q(3), 1: Q(6)})
    assert not ech.contains({2: Q(1)})
    red = ech.reduce_full({0: Q(1), 2: Q(5)})
    assert all(k not in ech.pivots for k in red)


def test_dense_solvers():
    rng = random.Random(1)
    from twistblocks.field import QQ
    for n in (2, 3, 4):
        a = [[Q(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)]
        try:
            inv = mat_inverse(a, QQ)
        except ValueError:
            continue
        for i in range(n):
            for j in range(n):
                s = sum(a[i][k] * inv[k][j] for k in range(n))
                assert s == (1 if i == j else 0)
        rhs = [Q(rng.randint(-3, 3)) for _ in range(n)]
        x = solve_dense(a, rhs, QQ)
        for i in range(n):
            assert sum(a[i][k] * x[k] for k in range(n)) == rhs[i]


def test_nullspace_and_rectangular_solve():
    from twistblocks.field import QQ
    mat = [[Q(1), Q(2), Q(3)], [Q(2), Q(4), Q(6)]]
    ns = nullspace_dense(mat, QQ)
    assert len(ns) == 2
    for v in ns:
        assert all(sum(row[i] * v[i] for i in range(3)) == 0 for row in mat)
    cols = [{0: Q(1), 1: Q(1)}, {1: Q(1)}]
    coeffs = solve_rectangular(cols, {0: Q(2), 1: Q(5)}, QQ)
    assert coeffs == [Q(2), Q(3)]
    with pytest.raises(ValueError):
        solve_rectangular(cols, {2: Q(1)}, QQ)
