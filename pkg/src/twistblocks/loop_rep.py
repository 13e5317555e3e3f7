"""Degree-truncated modules over the twisted affine algebra.

The generalized Verma module induced from V(lambda) at level c is modeled up
to a degree cap: the degree-d layer has the PBW basis of monomials
y_{a_1}[t^{-j_1}] ... y_{a_k}[t^{-j_k}] v  with j_1 >= ... (generators sorted
nonincreasingly, ties broken by eigenbasis index), sum j_i = d, applied to a
basis vector v of V(lambda).  An element x[t^k] lowers the degree by k.

Action matrices are built by exact straightening: commutators reduce any
product to the PBW basis, with the central term k/m <x,y> c appearing when
opposite powers meet.  The integrable quotient divides by the submodule
generated by y_i[t^{-s_i}]^{n_i + 1} v, closed downward under nonnegative
modes and then upward under negative modes (the PBW factorization makes the
two-phase closure exhaustive).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import InternalCheckError, ValidationError, WindowError
from .field import as_fraction
from .finite_rep import FiniteModule, build_finite_module
from .linalg import Echelon, vec_axpy
from .twist import FiniteOrderAutomorphism, Weight


def _pbw_monomials(negs, d):
    """Nonincreasing tuples over the generator list with degrees summing d."""
    out = []

    def rec(prefix, rem, maxi):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for t in range(maxi, -1, -1):
            j, a = negs[t]
            if j <= rem:
                prefix.append(negs[t])
                rec(prefix, rem - j, t)
                prefix.pop()

    rec([], d, len(negs) - 1)
    return out


@dataclass
class Truncation:
    """Common interface of Verma and integrable truncations."""

    sigma: FiniteOrderAutomorphism
    lam: Weight
    c: int
    dmax: int
    kind: str
    finite: FiniteModule

    def layer_dim(self, d):
        raise NotImplementedError

    def gen_matrix(self, gen, d):
        raise NotImplementedError

    def elem_matrix(self, x: dict, k: int, d: int) -> dict:
        """Action matrix of x[t^k] on layer d; x must lie in g_{k mod m}."""
        sig = self.sigma
        out: dict = {}
        for (j, idx), cc in sig.eigen_coords(x).items():
            if j != k % sig.m:
                raise ValidationError(
                    "x[t^%d] requires sigma(x) = zeta^%d x" % (k, k % sig.m))
            mat = self.gen_matrix((k, idx), d)
            for col, column in mat.items():
                tgt = out.setdefault(col, {})
                for row, v in column.items():
                    s = tgt.get(row)
                    s = cc * v if s is None else s + cc * v
                    if s:
                        tgt[row] = s
                    else:
                        tgt.pop(row, None)
        return {cl: co for cl, co in out.items() if co}

    def act(self, terms, central, vec_by_degree: dict) -> dict:
        """Apply a loop-algebra element sum x_t[t^{k_t}] + central*C to a
        graded vector {degree: {pos: coeff}}.  Degrees must stay inside the
        window; leaving it raises WindowError (never silent truncation)."""
        out: dict = {}
        cc = central * self.c if central else None
        for d, comp in vec_by_degree.items():
            if cc:
                tgt = out.setdefault(d, {})
                for pos, v in comp.items():
                    vec_axpy(tgt, cc * v, {pos: self.sigma.field.one})
            for (x, k) in terms:
                nd = d - k
                if nd < 0:
                    continue  # annihilated below degree zero
                if nd > self.dmax:
                    raise WindowError(
                        "degree %d exceeds the window (dmax=%d)" % (nd, self.dmax))
                mat = self.elem_matrix(x, k, d)
                tgt = out.setdefault(nd, {})
                for pos, v in comp.items():
                    col = mat.get(pos)
                    if col:
                        vec_axpy(tgt, v, col)
        return {d: comp for d, comp in out.items() if comp}

    def graded_dims(self):
        return [self.layer_dim(d) for d in range(self.dmax + 1)]


class VermaTruncation(Truncation):
    def __init__(self, sigma, lam, c, dmax, finite):
        super().__init__(sigma=sigma, lam=lam, c=c, dmax=dmax,
                         kind="verma", finite=finite)
        m = sigma.m
        self.negs = []
        for j in range(1, dmax + 1):
            for a in range(len(sigma.eig[(-j) % m])):
                self.negs.append((j, a))
        self.layers = []
        self.pos = {}
        for d in range(dmax + 1):
            keys = []
            for mono in _pbw_monomials(self.negs, d):
                for v in range(finite.dim):
                    keys.append((mono, v))
            keys.sort(key=lambda kv: (kv[0], kv[1]))
            self.layers.append(keys)
            for t, k in enumerate(keys):
                self.pos[k] = (d, t)
        self._col_memo: dict = {}
        self._mat_memo: dict = {}
        self._gram: dict = {}
        self._omega = sigma.algebra.cartan_involution_matrix()
        self._omega_eig: dict = {}

    # -- basis ---------------------------------------------------------------

    def layer_dim(self, d):
        if d < 0:
            return 0
        return len(self.layers[d])

    def key_of(self, d, t):
        return self.layers[d][t]

    def hw_pos(self):
        """(degree, position) of the highest weight vector."""
        return self.pos[((), 0)]

    # -- straightening -------------------------------------------------------

    def _neg_col(self, gen, key):
        """Column of y-type generator `gen`=(j,b) applied to basis `key`."""
        memo_key = ("n", gen, key)
        got = self._col_memo.get(memo_key)
        if got is not None:
            return got
        j, b = gen
        mono, vidx = key
        sig = self.sigma
        if not mono or gen >= mono[0]:
            res = {((gen,) + mono, vidx): sig.field.one}
        else:
            head = mono[0]
            rest = (mono[1:], vidx)
            j1, b1 = head
            res: dict = {}
            coords, _ = sig.bracket_eigen(((-j) % sig.m, b), ((-j1) % sig.m, b1))
            for (jj, idx), cc in coords.items():
                sub = self._neg_col((j + j1, idx), rest)
                for k2, v in sub.items():
                    s = res.get(k2)
                    s = cc * v if s is None else s + cc * v
                    if s:
                        res[k2] = s
                    else:
                        res.pop(k2, None)
            mid = self._neg_col(gen, rest)
            for kmid, v in mid.items():
                sub = self._neg_col(head, kmid)
                for k2, v2 in sub.items():
                    s = res.get(k2)
                    s = v * v2 if s is None else s + v * v2
                    if s:
                        res[k2] = s
                    else:
                        res.pop(k2, None)
        self._col_memo[memo_key] = res
        return res

    def _nonneg_col(self, gen, key):
        memo_key = ("p", gen, key)
        got = self._col_memo.get(memo_key)
        if got is not None:
            return got
        k, a = gen
        mono, vidx = key
        sig = self.sigma
        res: dict = {}
        if not mono:
            if k == 0:
                col = self.finite.act_eig(a).get(vidx, {})
                res = {((), v): cc for v, cc in col.items()}
            # k > 0 annihilates V(lambda)
        else:
            head = mono[0]
            rest = (mono[1:], vidx)
            j1, b1 = head
            coords, frm = sig.bracket_eigen((k % sig.m, a), ((-j1) % sig.m, b1))
            for (jj, idx), cc in coords.items():
                p = k - j1
                sub = (self._nonneg_col((p, idx), rest) if p >= 0
                       else self._neg_col((-p, idx), rest))
                for k2, v in sub.items():
                    s = res.get(k2)
                    s = cc * v if s is None else s + cc * v
                    if s:
                        res[k2] = s
                    else:
                        res.pop(k2, None)
            if k == j1 and frm:
                cc = Fraction(k, sig.m) * self.c
                val = frm * cc
                if val:
                    s = res.get(rest)
                    s = val if s is None else s + val
                    if s:
                        res[rest] = s
                    else:
                        res.pop(rest, None)
            mid = self._nonneg_col(gen, rest)
            for kmid, v in mid.items():
                sub = self._neg_col(head, kmid)
                for k2, v2 in sub.items():
                    s = res.get(k2)
                    s = v * v2 if s is None else s + v * v2
                    if s:
                        res[k2] = s
                    else:
                        res.pop(k2, None)
        self._col_memo[memo_key] = res
        return res

    def gen_matrix(self, gen, d):
        """Column-sparse matrix (positions) of generator (k, a) on layer d.

        k > 0 lowers the degree by k, k < 0 raises it by |k|.
        """
        k, a = gen
        if d < 0 or d > self.dmax:
            raise WindowError("source degree %d outside window" % d)
        nd = d - k
        if nd < 0:
            return {}
        if nd > self.dmax:
            raise WindowError(
                "target degree %d exceeds the window (dmax=%d)" % (nd, self.dmax))
        memo_key = (gen, d)
        got = self._mat_memo.get(memo_key)
        if got is not None:
            return got
        out = {}
        for t, key in enumerate(self.layers[d]):
            col = (self._neg_col((-k, a), key) if k < 0
                   else self._nonneg_col((k, a), key))
            if col:
                out[t] = {self.pos[k2][1]: v for k2, v in col.items()}
        self._mat_memo[memo_key] = out
        return out

    # -- contravariant form ----------------------------------------------------

    def _omega_action(self, j1, b1, d):
        """Matrix of the Cartan-involution partner (omega y)[t^{+j1}] of the
        generator y = eigenvector b1 of g_{-j1 mod m}, on layer d."""
        key = (j1, b1, d)
        got = self._omega_eig.get(key)
        if got is not None:
            return got
        sig = self.sigma
        y = sig.eig_elem((-j1) % sig.m, b1)
        img = sig.algebra.apply_basis_map(self._omega, y)
        mat = self.elem_matrix(img, j1, d)
        self._omega_eig[key] = mat
        return mat

    def gram(self, d):
        """Dense contravariant Gram matrix on layer d, b(v+, v+) = 1."""
        got = self._gram.get(d)
        if got is not None:
            return got
        F = self.sigma.field
        n = self.layer_dim(d)
        if d == 0:
            g = [[F.from_fraction(self.finite.gram[i][j]) for j in range(n)]
                 for i in range(n)]
        else:
            g = [[F.zero] * n for _ in range(n)]
            for u, key in enumerate(self.layers[d]):
                mono, vidx = key
                j1, b1 = mono[0]
                rest_pos = self.pos[(mono[1:], vidx)][1]
                gprev = self.gram(d - j1)
                mat = self._omega_action(j1, b1, d)
                for w in range(n):
                    col = mat.get(w)
                    if not col:
                        continue
                    tot = F.zero
                    for x, vv in col.items():
                        gv = gprev[rest_pos][x]
                        if gv:
                            tot = tot + vv * gv
                    g[w][u] = -tot
        self._gram[d] = g
        return g


class IntegrableTruncation(Truncation):
    def __init__(self, verma: VermaTruncation, kernel_per_degree):
        super().__init__(sigma=verma.sigma, lam=verma.lam, c=verma.c,
                         dmax=verma.dmax, kind="integrable", finite=verma.finite)
        self.verma = verma
        self.kernel = kernel_per_degree  # list of Echelon per degree
        self.quotient_pos = []
        for d in range(verma.dmax + 1):
            piv = set(self.kernel[d].pivots)
            self.quotient_pos.append(
                [t for t in range(verma.layer_dim(d)) if t not in piv])
        self._mat_memo: dict = {}
        self._gram: dict = {}

    def layer_dim(self, d):
        if d < 0:
            return 0
        return len(self.quotient_pos[d])

    def kernel_dim(self, d):
        return self.kernel[d].rank

    def project(self, d, vec: dict) -> dict:
        """Quotient coordinates of a Verma layer-d vector."""
        red = self.kernel[d].reduce_full(vec)
        out = {}
        for t, p in enumerate(self.quotient_pos[d]):
            v = red.pop(p, None)
            if v:
                out[t] = v
        if red:
            raise InternalCheckError("reduction left non-quotient support")
        return out

    def lift(self, d, qvec: dict) -> dict:
        return {self.quotient_pos[d][t]: v for t, v in qvec.items()}

    def gen_matrix(self, gen, d):
        k, a = gen
        nd = d - k
        if nd < 0:
            return {}
        memo_key = (gen, d)
        got = self._mat_memo.get(memo_key)
        if got is not None:
            return got
        vm = self.verma.gen_matrix(gen, d)
        out = {}
        for t, p in enumerate(self.quotient_pos[d]):
            col = vm.get(p)
            if col:
                q = self.project(nd, col)
                if q:
                    out[t] = q
        self._mat_memo[memo_key] = out
        return out

    def gram(self, d):
        got = self._gram.get(d)
        if got is not None:
            return got
        gv = self.verma.gram(d)
        qs = self.quotient_pos[d]
        g = [[gv[p][q] for q in qs] for p in qs]
        self._gram[d] = g
        return g


def build_verma_truncation(sigma: FiniteOrderAutomorphism, lam: Weight,
                           c: int, dmax: int,
                           finite: FiniteModule | None = None) -> VermaTruncation:
    if dmax < 0:
        raise ValidationError("dmax must be nonnegative")
    if c < 1:
        raise ValidationError("level must be a positive integer")
    lam = tuple(Fraction(x) for x in lam)
    if finite is None:
        finite = build_finite_module(sigma, lam)
    tr = VermaTruncation(sigma, lam, c, dmax, finite)
    import os
    cap = int(os.environ.get("TWISTBLOCKS_MAX_CELLS", "2000000"))
    sz = sum(tr.layer_dim(d) for d in range(dmax + 1))
    if sz > cap:
        raise WindowError("truncation size %d exceeds the resource cap %d "
                          "(set TWISTBLOCKS_MAX_CELLS to raise it)" % (sz, cap))
    return tr


def pbw_graded_dims(sigma: FiniteOrderAutomorphism, dim_v: int, dmax: int):
    """Independent generating-function count: coefficient of q^d in
    dim V(lambda) * prod_{j>=1} (1 - q^j)^(-dim g_{-j mod m})."""
    coeffs = [Fraction(1)] + [Fraction(0)] * dmax
    m = sigma.m
    for j in range(1, dmax + 1):
        mult = len(sigma.eig[(-j) % m])
        for _ in range(mult):
            # multiply by 1/(1 - q^j)
            for d in range(j, dmax + 1):
                coeffs[d] += coeffs[d - j]
    return [int(c) * dim_v for c in coeffs]


def kernel_generators(sigma: FiniteOrderAutomorphism, lam: Weight, c: int):
    """Labels i with s_i > 0 paired with the exponents n_{lambda,i} + 1."""
    ns = sigma.n_coefficients(lam, c)
    out = []
    for i in sigma.labels:
        if sigma.s[i] > 0:
            n = ns[i]
            if n.denominator != 1 or n < 0:
                raise ValidationError(
                    "weight is not in D_c: n_{lambda,%s} = %s" % (i, n))
            out.append((i, int(n) + 1))
    return out


def build_integrable_truncation(sigma: FiniteOrderAutomorphism, lam: Weight,
                                c: int, dmax: int,
                                finite: FiniteModule | None = None
                                ) -> IntegrableTruncation:
    lam = tuple(Fraction(x) for x in lam)
    if not sigma.in_Dc(lam, c):
        raise ValidationError("weight is not in D_c at this level")
    verma = build_verma_truncation(sigma, lam, c, dmax, finite=finite)
    gens = kernel_generators(sigma, lam, c)
    sig = sigma
    m = sig.m

    # seed vectors y_i^{n_i + 1} v+
    seeds = []
    for (i, power) in gens:
        deg = sig.s[i] * power
        if deg > dmax:
            continue
        vec = {verma.hw_pos()[1]: sig.field.one}
        d = 0
        for _ in range(power):
            nxt: dict = {}
            mat = verma.elem_matrix(sig.gen_y[i], -sig.s[i], d)
            for pos, v in vec.items():
                col = mat.get(pos)
                if col:
                    vec_axpy(nxt, v, col)
            vec = nxt
            d += sig.s[i]
        if vec:
            seeds.append((d, vec))

    layers = [Echelon() for _ in range(dmax + 1)]
    frontier = []
    for d, vec in seeds:
        if layers[d].add(vec):
            frontier.append((d, vec))

    # phase 1: close downward under nonnegative modes
    queue = list(frontier)
    while queue:
        d, vec = queue.pop()
        for k in range(0, d + 1):
            for a in range(len(sig.eig[k % m])):
                mat = verma.gen_matrix((k, a), d)
                img: dict = {}
                for pos, v in vec.items():
                    col = mat.get(pos)
                    if col:
                        vec_axpy(img, v, col)
                if img and layers[d - k].add(img):
                    queue.append((d - k, img))

    # phase 2: close upward under negative modes
    for d in range(dmax + 1):
        # iterate over a snapshot: new vectors at higher degrees only
        rows = list(layers[d].pivots.values())
        for vec in rows:
            for j in range(1, dmax - d + 1):
                for a in range(len(sig.eig[(-j) % m])):
                    mat = verma.gen_matrix((-j, a), d)
                    img: dict = {}
                    for pos, v in vec.items():
                        col = mat.get(pos)
                        if col:
                            vec_axpy(img, v, col)
                    if img:
                        layers[d + j].add(img)

    if layers[0].rank != 0:
        raise InternalCheckError("kernel submodule meets degree zero")
    return IntegrableTruncation(verma, layers)


def verify_kac_identity(sigma: FiniteOrderAutomorphism, lam: Weight, c: int,
                        i, p: int, q: int, f: dict, dmax: int | None = None):
    """Check Y^p v = alpha X^q Y^{p+q} v with X = x_i[f], Y = y_i[t^{-s_i}].

    f: {power: coefficient} with f = t^{s_i} + higher terms, powers congruent
    to s_i mod m.  Returns the nonzero alpha and asserts the identity on the
    truncated Verma module.
    """
    ns = sigma.n_coefficients(lam, c)
    n = ns[i]
    if n.denominator != 1:
        raise ValidationError("n_{lambda,i} must be an integer")
    n = int(n)
    if p <= n:
        raise ValidationError("requires p > n_{lambda,i} = %d" % n)
    if q <= 0:
        raise ValidationError("requires q > 0")
    s_i = sigma.s[i]
    if s_i == 0:
        raise ValidationError("label must have s_i > 0")
    if sorted(f) == [] or min(f) != s_i or f[s_i] != 1:
        raise ValidationError("f must be t^{s_i} + higher order terms")
    for pw in f:
        if (pw - s_i) % sigma.m != 0:
            raise ValidationError("f must satisfy sigma(f) = eps^{-s_i} f")
    need = s_i * (p + q)
    if dmax is None:
        dmax = need
    if need > dmax:
        raise WindowError("requires dmax >= %d" % need)
    verma = build_verma_truncation(sigma, lam, c, dmax)

    def apply_elem(x, k, d, vec):
        mat = verma.elem_matrix(x, k, d)
        out: dict = {}
        for pos, v in vec.items():
            col = mat.get(pos)
            if col:
                vec_axpy(out, v, col)
        return out

    vec = {verma.hw_pos()[1]: sigma.field.one}
    d = 0
    for _ in range(p):
        vec = apply_elem(sigma.gen_y[i], -s_i, d, vec)
        d += s_i
    lhs = vec

    vec = {verma.hw_pos()[1]: sigma.field.one}
    d = 0
    for _ in range(p + q):
        vec = apply_elem(sigma.gen_y[i], -s_i, d, vec)
        d += s_i
    for _ in range(q):
        out: dict = {}
        for pw, coeff in f.items():
            if coeff:
                part = apply_elem(sigma.gen_x[i], pw, d, vec)
                vec_axpy(out, Fraction(coeff), part)
        vec = out
        d -= s_i
    rhs = vec

    beta = Fraction(1)
    for u in range(p + 1, p + q + 1):
        beta *= u * (n - u + 1)
    if beta == 0:
        raise InternalCheckError("alpha would be infinite; hypothesis violated")
    alpha = Fraction(1) / beta
    scaled = {pos: v * alpha for pos, v in rhs.items()}
    if scaled != lhs:
        raise InternalCheckError("the highest-weight recursion identity failed")
    return alpha


def contravariant_form(trunc: Truncation, d: int, u: dict, w: dict):
    """b(u, w) for layer-d quotient/Verma coordinate vectors.  Vectors of
    unequal degree pair to zero by convention; callers pass a single layer."""
    g = trunc.gram(d)
    F = trunc.sigma.field
    tot = F.zero
    for i, ci in u.items():
        row = g[i]
        for j, cj in w.items():
            v = row[j]
            if v:
                tot = tot + ci * cj * v
    return tot
