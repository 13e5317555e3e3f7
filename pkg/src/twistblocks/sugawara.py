"""Sugawara operators on truncated modules and exact Virasoro checks.

L_0 is the normally ordered quadratic expression

  L_0 = 1/(2(c+hv)) * ( sum_a u_a u^a  +  2 sum_{n>0} sum_a u_a[t^-n] u^a[t^n]
                        + 1/(2 m^2) sum_{n=0}^{m-1} n (m-n) dim g_nbar )

with {u_a}, {u^a} dual bases of g_nbar and g_-nbar for the invariant form,
and hv the dual Coxeter number.  The higher modes come from the formal
commutator with the derivation -t^{mk+1} d/dt:

  L_k = 1/(m k (c+hv)) sum_{n>0} sum_a n ( u_a[t^{mk-n}] u^a[t^n]
                                           - u_a[t^{-n}] u^a[t^{n+mk}] ).

L_k shifts the module degree by -mk; its matrix on a layer d is exact
whenever both d and d - mk lie inside the truncation window (intermediate
degrees never leave [0, max(d, d-mk)]).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalCheckError, ValidationError, WindowError
from .field import as_fraction
from .linalg import mat_add, mat_compose, mat_inverse, mat_scale
from .loop_rep import Truncation
from .twist import FiniteOrderAutomorphism


@dataclass
class SugawaraOperator:
    """A Sugawara mode as exact matrices on the truncation.

    For the reference parameter t the mode L_k shifts the grading by m*k
    and `blocks[d]` has the single key m*k.  For a changed parameter t' the
    operator decomposes into several t-degree shifts m*k, m*(k+1), ...
    """

    trunc: Truncation
    base_shift: int
    blocks: dict                  # source degree -> {shift: matrix}
    label: str

    def safe_layers(self):
        return sorted(self.blocks)

    def has_layer(self, d):
        return d < 0 or d in self.blocks

    def matrix(self, d):
        """Single-block matrix on layer d (reference-parameter operators).
        Layers below degree 0 are zero by the grading; above the window
        raises."""
        if d < 0:
            return {}
        if d not in self.blocks:
            raise WindowError("layer %d is outside the safe window of %s"
                              % (d, self.label))
        blk = self.blocks[d]
        extra = [s for s in blk if s != self.base_shift and blk[s]]
        if extra:
            raise InternalCheckError("operator %s has mixed shifts" % self.label)
        return blk.get(self.base_shift, {})

    def apply(self, vec_by_degree: dict) -> dict:
        out: dict = {}
        for d, comp in vec_by_degree.items():
            if d < 0:
                continue
            if d not in self.blocks:
                raise WindowError("layer %d is outside the safe window of %s"
                                  % (d, self.label))
            for shift, mat in self.blocks[d].items():
                if not mat:
                    continue
                tgt = out.setdefault(d - shift, {})
                for pos, v in comp.items():
                    col = mat.get(pos)
                    if col:
                        for row, x in col.items():
                            s = tgt.get(row)
                            s = v * x if s is None else s + v * x
                            if s:
                                tgt[row] = s
                            else:
                                tgt.pop(row, None)
        return {d: c for d, c in out.items() if c}


def _dual_pairs(sigma: FiniteOrderAutomorphism, nbar: int):
    """Dual bases (u_a in g_nbar, u^a in g_-nbar) for the invariant form."""
    F = sigma.field
    m = sigma.m
    basis_n = sigma.eig[nbar % m]
    basis_neg = sigma.eig[(-nbar) % m]
    if len(basis_n) != len(basis_neg):
        raise InternalCheckError("paired eigenspaces have different dims")
    if not basis_n:
        return []
    P = [[_coerce(sigma.algebra.form(a.vec, b.vec), F) for b in basis_neg]
         for a in basis_n]
    Q = mat_inverse(P, F)
    out = []
    for a, ev in enumerate(basis_n):
        dual = {}
        for cidx, bv in enumerate(basis_neg):
            coef = Q[cidx][a]
            if coef:
                for k, v in bv.vec.items():
                    s = dual.get(k)
                    s = coef * v if s is None else s + coef * v
                    if s:
                        dual[k] = s
                    else:
                        dual.pop(k, None)
        out.append((ev.vec, dual))
    return out


def _coerce(x, F):
    return F.from_fraction(x) if isinstance(x, (int, Fraction)) else x


def normal_ordering_constant(sigma: FiniteOrderAutomorphism) -> Fraction:
    """(1/2m^2) sum_n n(m-n) dim g_nbar.

    In L_0 this constant multiplies the central element, i.e. it enters the
    operator as c times this value (inside the 1/(2(c+hv)) prefactor); that
    normalization is forced by the exact Virasoro relations
    [L_n, L_-n] = 2n L_0 + (n^3-n)/12 dim(g) c/(c+hv).
    """
    m = sigma.m
    tot = Fraction(0)
    for n in range(m):
        tot += Fraction(n * (m - n) * len(sigma.eig[n]), 1)
    return tot / (2 * m * m)


def anomaly_element(sigma: FiniteOrderAutomorphism) -> dict:
    """The zero-mode linear correction - sum_{nbar=1}^{m-1} (nbar/m) B_nbar
    with B_nbar = sum_a [u_a, u^a] over dual bases of g_nbar x g_-nbar.

    B_nbar is a central element of g_0; it vanishes whenever g_0 has trivial
    center (in particular for every diagram automorphism), but contributes
    for inner twists with asymmetric sectors.
    """
    alg = sigma.algebra
    F = sigma.field
    out: dict = {}
    for nbar in range(1, sigma.m):
        for (u, ud) in _dual_pairs(sigma, nbar):
            br = alg.bracket(u, ud)
            for k, v in br.items():
                cur = out.get(k, F.zero)
                cur = cur - Fraction(nbar, sigma.m) * v
                if cur:
                    out[k] = cur
                else:
                    out.pop(k, None)
    return out


def _pair_matrix(trunc, sigma, u, udual, p_up, p_down, d):
    """Matrix of u[t^{p_up}] u_dual[t^{p_down}] on layer d (apply the second
    factor first).  Out-of-range intermediate or final layers give zero."""
    mid = d - p_down
    if mid < 0 or mid > trunc.dmax:
        return {}
    fin = mid - p_up
    if fin < 0 or fin > trunc.dmax:
        return {}
    m1 = trunc.elem_matrix(udual, p_down, d)
    if not m1:
        return {}
    m2 = trunc.elem_matrix(u, p_up, mid)
    return mat_compose(m2, m1)


def _expand_tprime_power(p, u_pows, dmax):
    """Laurent expansion of (t')^p = t^p u(t)^p as [(power, coeff), ...],
    truncated to exponents <= dmax (higher terms annihilate the window)."""
    ser = u_pows(p)
    out = []
    for l, coeff in sorted(ser.items()):
        pw = p + l
        if pw > dmax:
            break
        if coeff:
            out.append((pw, coeff))
    return out


def build_Lk(sigma: FiniteOrderAutomorphism, trunc: Truncation, k: int,
             u_pows=None) -> SugawaraOperator:
    """Sugawara mode L_k (L_0 for k = 0); u_pows switches to the parameter
    t' = u*t, giving L^{t'}_k (u_pows(p) must return the series of u^p)."""
    m = sigma.m
    c = trunc.c
    hv = sigma.algebra.dual_coxeter
    F = sigma.field
    if c + hv == 0:
        raise ValidationError("level equals the critical level -h^vee")
    shift = m * k
    label = "L_%d%s" % (k, "" if u_pows is None else "'")

    def tp(p):
        if u_pows is None:
            return [(p, Fraction(1))]
        return _expand_tprime_power(p, u_pows, trunc.dmax)

    pairs_cache = {}

    def pairs(nbar):
        if nbar not in pairs_cache:
            pairs_cache[nbar] = _dual_pairs(sigma, nbar)
        return pairs_cache[nbar]

    blocks = {}
    for d in range(trunc.dmax + 1):
        if d - shift > trunc.dmax:
            continue
        buckets: dict = {}

        def put(p1, p2, mt, coeff):
            if not mt or not coeff:
                return
            sh = p1 + p2
            buckets[sh] = mat_add(buckets.get(sh, {}), mat_scale(mt, coeff))

        if k == 0:
            # zero modes: Casimir part of g_0
            for (u, ud) in pairs(0):
                for (p2, c2) in tp(0):
                    for (p1, c1) in tp(0):
                        put(p1, p2,
                            _pair_matrix(trunc, sigma, u, ud, p1, p2, d), c1 * c2)
            for n in range(1, d + 1):
                for (u, ud) in pairs(-n):
                    for (p2, c2) in tp(n):
                        for (p1, c1) in tp(-n):
                            put(p1, p2,
                                _pair_matrix(trunc, sigma, u, ud, p1, p2, d),
                                2 * c1 * c2)
            anom = anomaly_element(sigma)
            if anom:
                buckets[0] = mat_add(buckets.get(0, {}),
                                     trunc.elem_matrix(anom, 0, d))
            kappa = normal_ordering_constant(sigma) * c  # central element acts by c
            if kappa and trunc.layer_dim(d):
                eye = {t: {t: _coerce(kappa, F)} for t in range(trunc.layer_dim(d))}
                buckets[0] = mat_add(buckets.get(0, {}), eye)
            pref = Fraction(1, 2 * (c + hv))
        else:
            nmax = max(d, d - shift)
            for n in range(1, nmax + 1):
                for (u, ud) in pairs(-n):
                    # u_a[t^{mk-n}] u^a[t^n]
                    for (p2, c2) in tp(n):
                        for (p1, c1) in tp(shift - n):
                            put(p1, p2,
                                _pair_matrix(trunc, sigma, u, ud, p1, p2, d),
                                Fraction(n) * c1 * c2)
                    # - u_a[t^{-n}] u^a[t^{n+mk}]
                    for (p2, c2) in tp(n + shift):
                        for (p1, c1) in tp(-n):
                            put(p1, p2,
                                _pair_matrix(trunc, sigma, u, ud, p1, p2, d),
                                -Fraction(n) * c1 * c2)
            pref = Fraction(1, m * k * (c + hv))
        blocks[d] = {sh: mat_scale(mt, pref) for sh, mt in buckets.items() if mt}
    if not blocks:
        raise WindowError("no layer fits the window for %s" % label)
    return SugawaraOperator(trunc=trunc, base_shift=shift, blocks=blocks,
                            label=label)


def build_L0(sigma, trunc, u_pows=None) -> SugawaraOperator:
    return build_Lk(sigma, trunc, 0, u_pows=u_pows)


def theta_coefficients(theta: dict, m: int) -> dict:
    """Validate a sigma-invariant vector field sum a_j t^j d/dt: powers must
    be congruent to 1 mod m.  Returns {k: a_{mk+1}}."""
    out = {}
    for j, a in theta.items():
        if a == 0:
            continue
        if (j - 1) % m != 0:
            raise ValidationError(
                "vector field t^%d d/dt is not sigma-invariant (m=%d)" % (j, m))
        out[(j - 1) // m] = Fraction(a)
    return out


def build_Ltheta(sigma, trunc, theta: dict, u_pows=None):
    """L_theta = sum_k (-m a_{mk+1}) L_k for theta = sum a_j t^j d/dt.

    Returns a list of (coefficient, SugawaraOperator) terms; the operator is
    applied by summing the terms."""
    ks = theta_coefficients(theta, sigma.m)
    return [(-sigma.m * a, build_Lk(sigma, trunc, k, u_pows=u_pows))
            for k, a in sorted(ks.items())]


def apply_operator_terms(terms, vec_by_degree: dict) -> dict:
    out: dict = {}
    for coeff, op in terms:
        part = op.apply(vec_by_degree)
        for d, comp in part.items():
            tgt = out.setdefault(d, {})
            for pos, v in comp.items():
                s = tgt.get(pos)
                s = coeff * v if s is None else s + coeff * v
                if s:
                    tgt[pos] = s
                else:
                    tgt.pop(pos, None)
    return {d: c for d, c in out.items() if c}


def scalar_of_matrix(mat: dict, dim: int, F):
    """If mat == s * Id on a dim-dimensional layer, return s, else None."""
    if dim == 0:
        return F.zero
    diag = None
    for t in range(dim):
        col = mat.get(t, {})
        for row, v in col.items():
            if row != t and v:
                return None
        v = col.get(t, F.zero)
        if diag is None:
            diag = v
        elif diag != v:
            return None
    return diag if diag is not None else F.zero


def virasoro_defect(sigma, trunc, n: int, k: int):
    """[L_n, L_k] - (n-k) L_{n+k} on every safe layer.

    Returns (report, expected) where report is a list of
    (degree, is_scalar, value) and expected the predicted central scalar
    delta_{n,-k} (n^3-n)/12 dim(g) c/(c+hv)."""
    m = sigma.m
    c = trunc.c
    hv = sigma.algebra.dual_coxeter
    F = sigma.field
    Ln = build_Lk(sigma, trunc, n)
    Lk = build_Lk(sigma, trunc, k)
    Lnk = build_Lk(sigma, trunc, n + k)
    expected = Fraction(0)
    if n == -k:
        expected = Fraction(n ** 3 - n, 12) * sigma.algebra.dimension * Fraction(c, c + hv)
    report = []
    for d in range(trunc.dmax + 1):
        needed = [d, d - m * k, d - m * n, d - m * (n + k)]
        if any(x > trunc.dmax for x in needed):
            continue
        a = mat_compose(Ln.matrix(d - m * k), Lk.matrix(d))
        b = mat_compose(Lk.matrix(d - m * n), Ln.matrix(d))
        dmat = mat_add(a, mat_scale(b, Fraction(-1)))
        dmat = mat_add(dmat, mat_scale(Lnk.matrix(d), Fraction(-(n - k))))
        s = scalar_of_matrix(dmat, trunc.layer_dim(d), F)
        report.append((d, s is not None, s))
    if not report:
        raise WindowError(
            "no layer supports [L_%d, L_%d] at dmax=%d; enlarge the window"
            % (n, k, trunc.dmax))
    return report, expected


def check_commutation_with_currents(sigma, trunc, k: int, nmodes=2):
    """Exact check of [x[t^n], L_k] = (n/m) x[t^{n+mk}] on all basis currents
    with |n| <= nmodes, on every layer where all four corners fit."""
    m = sigma.m
    F = sigma.field
    Lk = build_Lk(sigma, trunc, k)
    failures = []
    for n in range(-nmodes, nmodes + 1):
        for ev in sigma.eig[n % m]:
            x = ev.vec
            for d in range(trunc.dmax + 1):
                corners = [d, d - m * k, d - n, d - n - m * k]
                if any(t > trunc.dmax for t in corners):
                    continue
                if not (Lk.has_layer(d) and Lk.has_layer(d - n)):
                    continue

                def cur(x, p, src):
                    if src < 0 or src - p < 0:
                        return {}
                    return trunc.elem_matrix(x, p, src)

                # x[t^n] L_k - L_k x[t^n] = (n/m) x[t^{n+mk}]
                a = mat_compose(cur(x, n, d - m * k), Lk.matrix(d))
                b = mat_compose(Lk.matrix(d - n), cur(x, n, d))
                dmat = mat_add(a, mat_scale(b, Fraction(-1)))
                rhs = mat_scale(cur(x, n + m * k, d), Fraction(n, m))
                if dmat != rhs:
                    failures.append((n, ev.j, ev.idx, d))
    return failures


# ---------------------------------------------------------------------------
# exact truncated series for parameter changes
# ---------------------------------------------------------------------------

def ser_mul(a: dict, b: dict, N: int) -> dict:
    out: dict = {}
    for i, x in a.items():
        if not x:
            continue
        for j, y in b.items():
            p = i + j
            if p <= N and y:
                out[p] = out.get(p, Fraction(0)) + x * y
    return {p: v for p, v in out.items() if v}


def ser_inv(a: dict, N: int) -> dict:
    """Inverse of a series with invertible lowest term (pure power series)."""
    v0 = a.get(0)
    if not v0:
        raise ValidationError("series must be a unit in the power series ring")
    inv = {0: Fraction(1) / v0}
    rest = {p: v for p, v in a.items() if p != 0}
    # Newton-free iterative coefficient extraction
    for p in range(1, N + 1):
        s = Fraction(0)
        for q, v in rest.items():
            if 0 < q <= p:
                s += v * inv.get(p - q, Fraction(0))
        if s:
            inv[p] = -s / v0
    return {p: v for p, v in inv.items() if v}


def ser_pow(a: dict, j: int, N: int) -> dict:
    if j == 0:
        return {0: Fraction(1)}
    base = a if j > 0 else ser_inv(a, N)
    out = {0: Fraction(1)}
    for _ in range(abs(j)):
        out = ser_mul(out, base, N)
    return out


class ParameterChange:
    """t' = u(t) * t with u = u_0 + u_m t^m + ... a sigma-invariant unit."""

    def __init__(self, sigma, u: dict, N: int):
        self.m = sigma.m
        self.N = N
        u = {int(p): Fraction(v) for p, v in u.items() if v}
        if any(p % sigma.m != 0 or p < 0 for p in u):
            raise ValidationError("u must be a power series in t^m")
        if not u.get(0):
            raise ValidationError("u must be a unit")
        self.u = u
        self._pows: dict = {}
        # reversion: t = s * w(s^m) with t'(t(s)) = s
        w = {0: Fraction(1) / u[0]}
        for _ in range(N // max(sigma.m, 1) + 3):
            # u evaluated at t = s*w(s): compose u's powers of t with s*w
            comp = {}
            for p, v in u.items():
                # (s*w)^p contributes at s^p * w^p; here p is a multiple of m
                term = ser_pow(w, p, N)
                for q, x in term.items():
                    if p + q <= N:
                        comp[p + q] = comp.get(p + q, Fraction(0)) + v * x
            w = ser_inv(comp, N)
        self.w = w

    def u_pows(self, p: int) -> dict:
        got = self._pows.get(p)
        if got is None:
            got = ser_pow(self.u, p, self.N)
            self._pows[p] = got
        return got

    def theta_in_tprime(self, theta: dict) -> dict:
        """Rewrite theta = sum a_j t^j d/dt as sum b_j t'^j d/dt'."""
        N = self.N
        dudt = {}
        for p, v in self.u.items():
            dudt[p] = dudt.get(p, Fraction(0)) + v * (p + 1)
        # theta(t') as a Laurent series in t: sum a_j t^j * d(t')/dt
        a_t: dict = {}
        for j, aj in theta.items():
            if not aj:
                continue
            for p, v in dudt.items():
                q = j + p
                if q <= N:
                    a_t[q] = a_t.get(q, Fraction(0)) + Fraction(aj) * v
        # substitute t = s * w(s):  t^q -> s^q w(s)^q
        out: dict = {}
        for q, v in a_t.items():
            term = ser_pow(self.w, q, N)
            for r, x in term.items():
                pw = q + r
                if pw <= N:
                    out[pw] = out.get(pw, Fraction(0)) + v * x
        return {p: v for p, v in out.items() if v}


def parameter_change_scalar(sigma, trunc, u: dict, theta: dict):
    """The scalar b with L^t_theta = L^{t'}_theta + b Id on safe layers.

    Raises InternalCheckError if the difference fails to be scalar.
    """
    m = sigma.m
    ks = theta_coefficients(theta, m)
    if not ks:
        return Fraction(0)
    kmax = max(abs(k) for k in ks)
    N = trunc.dmax + m * (kmax + 1) + m + 2
    pc = ParameterChange(sigma, u, N)
    terms_t = build_Ltheta(sigma, trunc, theta)
    theta_prime = pc.theta_in_tprime(theta)
    terms_tp = build_Ltheta(sigma, trunc, theta_prime, u_pows=pc.u_pows)
    F = sigma.field

    # collect per-(source, target) blocks of the difference
    blocks: dict = {}
    for sign, terms in ((1, terms_t), (-1, terms_tp)):
        for coeff, op in terms:
            for d, per_shift in op.blocks.items():
                for sh, mat in per_shift.items():
                    key = (d, d - sh)
                    cur = blocks.setdefault(key, {})
                    scaled = mat_scale(mat, coeff if sign > 0 else -coeff)
                    blocks[key] = mat_add(cur, scaled)
    scalar = None
    for (d, nd), mat in sorted(blocks.items()):
        if d != nd:
            if any(v for col in mat.values() for v in col.values()):
                raise InternalCheckError(
                    "difference has a nonzero degree-shifting block")
            continue
        s = scalar_of_matrix(mat, trunc.layer_dim(d), F)
        if s is None:
            raise InternalCheckError(
                "L^t_theta - L^t'_theta is not scalar on layer %d" % d)
        if scalar is None:
            scalar = s
        elif scalar != s:
            raise InternalCheckError("scalar differs between layers")
    if scalar is None:
        # every block vanished identically: the difference is zero on the
        # whole window (e.g. theta vanishing to high order)
        return Fraction(0)
    return as_fraction(scalar) if not isinstance(scalar, Fraction) else scalar


# ---------------------------------------------------------------------------
# the abstract Virasoro cocycle on sigma-invariant vector fields
# ---------------------------------------------------------------------------

def _laurent_derivative(f: dict) -> dict:
    return {p - 1: v * p for p, v in f.items() if v * p}


def _laurent_shift(f: dict, k: int) -> dict:
    return {p + k: v for p, v in f.items()}


def _laurent_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, Fraction(0)) + x * y
    return {p: v for p, v in out.items() if v}


def virasoro_cocycle_check(f: dict, g: dict, m: int) -> Fraction:
    """Central term of [f d/dt, g d/dt]: Res(t^{3m} A^3(t^{-1} f) t^{-1} g
    t^{-1} dt) / (12 m) with A = t^{-m} (m + t d/dt)."""
    for p in list(f) + list(g):
        if (p - 1) % m != 0:
            raise ValidationError("vector fields must be spanned by t^{mk+1}")

    def A(h):
        out = {}
        for p, v in h.items():
            out[p - m] = out.get(p - m, Fraction(0)) + v * (m + p)
        return {p: v for p, v in out.items() if v}

    h = _laurent_shift({p: Fraction(v) for p, v in f.items()}, -1)
    for _ in range(3):
        h = A(h)
    prod = _laurent_mul(_laurent_shift(h, 3 * m),
                        _laurent_shift({p: Fraction(v) for p, v in g.items()}, -1))
    res = prod.get(0, Fraction(0))  # coefficient of t^{-1} dt on t^{-1}*prod
    # prod already includes both t^{-1} shifts; Res picks the t^{-1} coeff of
    # prod * t^{-1}, i.e. the t^0 coefficient of prod
    return res / (12 * m)
