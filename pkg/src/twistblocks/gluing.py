"""Gluing tensors at nodes: the pairing between the two branch modules and
the canonical annihilated element.

A node pairs the module H(mu*) on the z'-branch with H(mu) on the
z''-branch.  The z''-side realization has Chevalley generators x'' = -y',
y'' = -x', so the composite of the Cartan involution with the branch swap
sends x[z'^n] to x[z''^{-n}]; transporting everything to the z'-side, the
pairing b_mu is the contravariant form of H(mu*) and the action of
x[z''^{-n}] on the second factor is that of (omega x)[t^{-n}] on H(mu*).

In the layer bases, b_{mu,d} is the Gram matrix G_d and the degree-d gluing
tensor Delta_{mu,d} is its inverse (the canonical element of the pairing);
Delta_{mu,0} is the identity element of V(mu*) (x) V(mu) = End(V(mu)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalCheckError, ValidationError, WindowError
from .linalg import mat_inverse, sparse_rank
from .loop_rep import IntegrableTruncation, build_integrable_truncation
from .twist import FiniteOrderAutomorphism, Weight


@dataclass
class GluingTensor:
    sigma: FiniteOrderAutomorphism
    mu: Weight                    # the z''-side weight; the module is H(mu*)
    mustar: Weight
    c: int
    dmax: int
    trunc: IntegrableTruncation   # H(mu*) truncation
    deltas: dict                  # degree -> dense matrix Delta_{mu,d}

    def delta(self, d):
        if d < 0:
            return None  # zero by convention
        if d > self.dmax:
            raise WindowError("degree %d beyond the tensor window" % d)
        return self.deltas[d]


def build_pairing(sigma: FiniteOrderAutomorphism, mu: Weight, c: int, d: int,
                  trunc: IntegrableTruncation | None = None):
    """The degree-d pairing matrix b_{mu,d} on H(mu*)_d x H(mu)_d.

    Requires mu* in D_c; returns (matrix, truncation).  The matrix must be
    nondegenerate, which is asserted.
    """
    mustar = sigma.dual_weight(mu)
    if not sigma.in_Dc(mustar, c):
        raise ValidationError("mu* is not in D_c for the primed realization")
    if trunc is None:
        trunc = build_integrable_truncation(sigma, mustar, c, d)
    g = trunc.gram(d)
    n = trunc.layer_dim(d)
    rows = [{j: v for j, v in enumerate(row) if v} for row in g]
    if sparse_rank(rows) != n:
        raise InternalCheckError(
            "pairing degenerate at degree %d (rank < %d)" % (d, n))
    return g, trunc


def build_gluing_tensor(sigma: FiniteOrderAutomorphism, mu: Weight, c: int,
                        dmax: int) -> GluingTensor:
    mustar = sigma.dual_weight(mu)
    if not sigma.in_Dc(mustar, c):
        raise ValidationError("mu* is not in D_c for the primed realization")
    trunc = build_integrable_truncation(sigma, mustar, c, dmax)
    F = sigma.field
    deltas = {}
    for d in range(dmax + 1):
        n = trunc.layer_dim(d)
        if n == 0:
            deltas[d] = []
            continue
        deltas[d] = mat_inverse(trunc.gram(d), F)
    return GluingTensor(sigma=sigma, mu=tuple(Fraction(x) for x in mu),
                        mustar=mustar, c=c, dmax=dmax, trunc=trunc,
                        deltas=deltas)


def _act_matrix_dense(trunc, x, k, d, rows, cols):
    """elem_matrix as a dense rows x cols array (target layer d-k)."""
    F = trunc.sigma.field
    out = [[F.zero] * cols for _ in range(rows)]
    if d < 0 or d - k < 0:
        return out
    mat = trunc.elem_matrix(x, k, d)
    for col, column in mat.items():
        for row, v in column.items():
            out[row][col] = v
    return out


def check_annihilation(tensor: GluingTensor, x: dict, n: int, d: int) -> bool:
    """Exact verdict of (x[z'^n] (x) 1) Delta_{mu,d+n} +
    (1 (x) x[z''^{-n}]) Delta_{mu,d} = 0.

    x must lie in g_{n mod m}.  Both terms live in
    H(mu*)_{d} (x) H(mu)_{d+n}; degrees outside [0, dmax] contribute zero.
    """
    trunc = tensor.trunc
    sigma = tensor.sigma
    F = sigma.field
    if d > tensor.dmax or d + n > tensor.dmax:
        raise WindowError("annihilation check needs degrees d and d+n inside "
                          "the window")
    rows_a = trunc.layer_dim(d)
    cols_b = trunc.layer_dim(d + n) if d + n >= 0 else 0
    total = [[F.zero] * cols_b for _ in range(rows_a)]
    # term 1: A * Delta_{d+n}, A: layer d+n -> layer d
    if d + n >= 0 and cols_b and rows_a:
        A = _act_matrix_dense(trunc, x, n, d + n, rows_a, cols_b)
        delta = tensor.delta(d + n)
        for i in range(rows_a):
            for j in range(cols_b):
                s = F.zero
                for t in range(cols_b):
                    if A[i][t] and delta[t][j]:
                        s = s + A[i][t] * delta[t][j]
                total[i][j] = total[i][j] + s
    # term 2: Delta_d * B^T, B = (omega x)[t^{-n}]: layer d -> layer d+n
    if d >= 0 and rows_a and cols_b and d + n >= 0:
        om = sigma.algebra.cartan_involution_matrix()
        ox = sigma.algebra.apply_basis_map(om, x)
        B = _act_matrix_dense(trunc, ox, -n, d, cols_b, rows_a)
        delta = tensor.delta(d)
        for i in range(rows_a):
            for j in range(cols_b):
                s = F.zero
                for t in range(rows_a):
                    if delta[i][t] and B[j][t]:
                        s = s + delta[i][t] * B[j][t]
                total[i][j] = total[i][j] + s
    return all(not total[i][j] for i in range(rows_a) for j in range(cols_b))


def annihilation_sweep(tensor: GluingTensor, nmax: int, dtop: int):
    """Run the annihilation identity over every eigenbasis element x of
    every g_{n mod m}, |n| <= nmax, 0 <= d <= dtop.  Returns failures."""
    sigma = tensor.sigma
    m = sigma.m
    failures = []
    for n in range(-nmax, nmax + 1):
        for ev in sigma.eig[n % m]:
            for d in range(0, dtop + 1):
                if d + n > tensor.dmax or d > tensor.dmax:
                    continue
                if not check_annihilation(tensor, ev.vec, n, d):
                    failures.append((n, ev.j, ev.idx, d))
    return failures


def identity_element_checks(tensor: GluingTensor) -> bool:
    """Structural Delta_{mu,0} = I_mu facts: G_0 Delta_0 = Id and the
    g^sigma-invariance (z (x) 1 + 1 (x) z) Delta_0 = 0 for all z in g_0."""
    trunc = tensor.trunc
    sigma = tensor.sigma
    F = sigma.field
    n0 = trunc.layer_dim(0)
    g0 = trunc.gram(0)
    d0 = tensor.delta(0)
    for i in range(n0):
        for j in range(n0):
            s = F.zero
            for t in range(n0):
                if g0[i][t] and d0[t][j]:
                    s = s + g0[i][t] * d0[t][j]
            want = F.one if i == j else F.zero
            if s != want:
                return False
    for ev in sigma.eig[0]:
        if not check_annihilation(tensor, ev.vec, 0, 0):
            return False
    return True
