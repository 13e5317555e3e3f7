"""Cartan matrices, root systems and weight combinatorics.

Simple types use the Bourbaki numbering of Dynkin nodes.  Roots are integer
coordinate tuples in the simple-root basis; weights are Fraction tuples in
the fundamental-weight basis (coordinates lambda_i = lambda(coroot_i)).

The code also handles decomposable (semisimple) Cartan matrices, which show
up as root systems of reductive fixed-point subalgebras.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ValidationError

SERIES = "ABCDEFG"


def cartan_matrix(series: str, rank: int, _relaxed: bool = False):
    """Cartan matrix A[i][j] = alpha_j(coroot_i), Bourbaki numbering.

    With _relaxed=True, C_2 is additionally admitted; it occurs as the fixed
    subalgebra of the A_3 diagram flip and is only used internally.
    """
    series = series.upper()
    ok = {
        "A": rank >= 1, "B": rank >= 2, "C": rank >= (2 if _relaxed else 3),
        "D": rank >= 4,
        "E": rank in (6, 7, 8), "F": rank == 4, "G": rank == 2,
    }.get(series, False)
    if not ok:
        raise ValidationError(
            "invalid simple type %s%d: expected A_n n>=1, B_n n>=2, C_n n>=3, "
            "D_n n>=4, E_6/7/8, F_4, G_2" % (series, rank))
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, vij=-1, vji=-1):
        a[i][j] = vij
        a[j][i] = vji

    if series in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if series == "B":
            # alpha_n short: a[n-1][n-2] stays -1, a[n-2][n-1] ... see below
            link(n - 2, n - 1, -1, -2)
        elif series == "C":
            # alpha_n long
            link(n - 2, n - 1, -2, -1)
    elif series == "D":
        for i in range(n - 3):
            link(i, i + 1)
        link(n - 3, n - 2)
        link(n - 3, n - 1)
    elif series == "E":
        # Bourbaki: chain 1-3-4-5-..., node 2 attached to 4
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for x, y in zip(chain, chain[1:]):
            link(x, y)
        link(1, 3)
    elif series == "F":
        link(0, 1)
        link(1, 2, -1, -2)  # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        link(2, 3)
    elif series == "G":
        # alpha_1 short, alpha_2 long (Bourbaki)
        link(0, 1, -3, -1)
    return tuple(tuple(row) for row in a)


def symmetrizer(cartan) -> tuple:
    """d_i = (alpha_i, alpha_i)/2, normalized so that max d_i = 1 on each
    connected component (long roots get squared length 2)."""
    n = len(cartan)
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and cartan[i][j] != 0 and d[j] is None:
                    # d_i * a_ij = d_j * a_ji
                    d[j] = d[i] * cartan[i][j] / cartan[j][i]
                    stack.append(j)
        # normalize this component so its maximum is 1
        reachable = _component(cartan, start)
        mx = max(d[i] for i in reachable)
        for i in reachable:
            d[i] = d[i] / mx
    return tuple(d)


def _component(cartan, start):
    n = len(cartan)
    seen = {start}
    stack = [start]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and j not in seen:
                seen.add(j)
                stack.append(j)
    return sorted(seen)


@dataclass(frozen=True)
class RootData:
    """Root system attached to a (possibly decomposable) Cartan matrix."""

    cartan: tuple
    positive_roots: tuple     # tuples in simple-root coordinates, fixed order
    d: tuple                  # half squared lengths of simple roots

    @property
    def rank(self):
        return len(self.cartan)

    def pairing(self, root) -> tuple:
        """alpha(coroot_i) for each i, i.e. the root in fw-coordinates."""
        return tuple(sum(self.cartan[i][j] * root[j] for j in range(self.rank))
                     for i in range(self.rank))

    def root_norm(self, root) -> Fraction:
        """(root, root) in the normalization with long roots of length^2 2."""
        return sum(root[i] * root[j] * self.d[i] * self.cartan[i][j]
                   for i in range(self.rank) for j in range(self.rank))

    def wt_root_pairing(self, wt, root) -> Fraction:
        """(wt, root) for wt in fw-coordinates and root in root coordinates."""
        return sum(Fraction(root[i]) * self.d[i] * wt[i] for i in range(self.rank))

    def coroot_coords(self, root) -> tuple:
        """Coefficients of the coroot in the simple-coroot basis."""
        nrm = self.root_norm(root)
        return tuple(Fraction(root[i]) * self.d[i] * 2 / nrm for i in range(self.rank))

    def reflect(self, wt, i) -> tuple:
        """Simple reflection s_i on fw-coordinates."""
        c = wt[i]
        return tuple(wt[j] - c * self.cartan[j][i] for j in range(self.rank))

    def is_dominant(self, wt) -> bool:
        return all(c >= 0 for c in wt)

    def dominant_representative(self, wt):
        """Dominant Weyl-orbit representative, with the sign of the chamber
        count parity; returns (dom, sign) where sign=0 when wt is on a wall."""
        wt = tuple(Fraction(c) for c in wt)
        sign = 1
        while True:
            neg = next((i for i, c in enumerate(wt) if c < 0), None)
            if neg is None:
                if any(c == 0 for c in wt):
                    return wt, 0
                return wt, sign
            wt = self.reflect(wt, neg)
            sign = -sign

    def dualize(self, wt) -> tuple:
        """Highest weight of the dual module: -w0(wt)."""
        neg = tuple(-c for c in wt)
        cur = neg
        while True:
            i = next((k for k, c in enumerate(cur) if c < 0), None)
            if i is None:
                return cur
            cur = self.reflect(cur, i)

    def highest_root(self) -> tuple:
        longs = [r for r in self.positive_roots
                 if self.root_norm(r) == max(self.root_norm(x) for x in self.positive_roots)]
        doms = [r for r in longs if all(c >= 0 for c in self.pairing(r))]
        assert len(doms) == 1, "highest root must be unique for a simple system"
        return doms[0]

    def highest_short_root(self) -> tuple:
        mn = min(self.root_norm(x) for x in self.positive_roots)
        shorts = [r for r in self.positive_roots if self.root_norm(r) == mn]
        doms = [r for r in shorts if all(c >= 0 for c in self.pairing(r))]
        assert len(doms) == 1
        return doms[0]

    def weyl_dim(self, wt) -> int:
        """Weyl dimension formula; wt in fw-coordinates, must be dominant."""
        num = Fraction(1)
        den = Fraction(1)
        rho = (Fraction(1),) * self.rank
        lam_rho = tuple(Fraction(c) + 1 for c in wt)
        for beta in self.positive_roots:
            num *= self.wt_root_pairing(lam_rho, beta)
            den *= self.wt_root_pairing(rho, beta)
        val = num / den
        assert val.denominator == 1 and val > 0
        return int(val)


def _root_key(root):
    ht = sum(root)
    return (ht, tuple(-c for c in root))


def enumerate_positive_roots(cartan) -> tuple:
    """All positive roots from the Cartan matrix, by closing root strings.

    Ordered by height, then reverse-lexicographically on coordinates, so
    that alpha_1 < alpha_2 < ... among simple roots.
    """
    n = len(cartan)
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(n):
                # length of the alpha_i-string through beta going down
                p = 0
                cur = list(beta)
                while True:
                    cur[i] -= 1
                    t = tuple(cur)
                    if t in roots:
                        p += 1
                    else:
                        break
                ipair = sum(cartan[i][j] * beta[j] for j in range(n))
                q = p - ipair
                if q > 0:
                    up = tuple(c + (1 if j == i else 0) for j, c in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        new.append(up)
        frontier = new
    return tuple(sorted(roots, key=_root_key))


def build_root_data(cartan) -> RootData:
    return RootData(cartan=tuple(tuple(r) for r in cartan),
                    positive_roots=enumerate_positive_roots(cartan),
                    d=symmetrizer(cartan))


def root_data_of_type(series: str, rank: int) -> RootData:
    return build_root_data(cartan_matrix(series, rank))


def identify_simple_type(cartan):
    """Return (series, rank) if the matrix equals a standard simple Cartan
    matrix with its Bourbaki numbering, else None."""
    rank = len(cartan)
    for series in SERIES:
        try:
            if cartan_matrix(series, rank, _relaxed=True) == tuple(tuple(r) for r in cartan):
                return (series, rank)
        except ValidationError:
            continue
    return None


# ---------------------------------------------------------------------------
# weight multiplicities, tensor products, fusion
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _cartan_inverse(cartan):
    from .linalg import mat_inverse
    from .field import QQ
    n = len(cartan)
    return mat_inverse([[Fraction(x) for x in row] for row in cartan], QQ)


def _fw_to_root_coords(rd: RootData, wt):
    """Convert fw-coordinates to simple-root coordinates (rational)."""
    inv = _cartan_inverse(rd.cartan)
    n = rd.rank
    return tuple(sum(inv[i][j] * Fraction(wt[j]) for j in range(n))
                 for i in range(n))


def weight_form(rd: RootData, a, b) -> Fraction:
    """(a, b) for two weights in fw-coordinates."""
    br = _fw_to_root_coords(rd, b)
    return sum(Fraction(br[i]) * rd.d[i] * Fraction(a[i]) for i in range(rd.rank))


def weight_multiplicities(rd: RootData, lam) -> dict:
    """Freudenthal weight multiplicities of the irreducible module V(lam)."""
    lam = tuple(Fraction(c) for c in lam)
    return dict(_weight_multiplicities_cached(rd, lam))


@lru_cache(maxsize=None)
def _weight_multiplicities_cached(rd: RootData, lam) -> tuple:
    assert rd.is_dominant(lam)
    # saturated weight set, generated by lowering along root strings
    weights = {lam}
    frontier = [lam]
    while frontier:
        new = []
        for mu in frontier:
            for i in range(rd.rank):
                k = mu[i]
                if k > 0:
                    cur = mu
                    alpha_fw = tuple(rd.cartan[j][i] for j in range(rd.rank))
                    for _ in range(int(k)):
                        cur = tuple(c - a for c, a in zip(cur, alpha_fw))
                        if cur not in weights:
                            weights.add(cur)
                            new.append(cur)
        frontier = new
    rho = (Fraction(1),) * rd.rank
    lam_rho = tuple(c + 1 for c in lam)
    c_top = weight_form(rd, lam_rho, lam_rho)
    mult = {lam: 1}
    # process by decreasing height of mu
    def depth(mu):
        rc = _fw_to_root_coords(rd, tuple(l - m for l, m in zip(lam, mu)))
        s = sum(rc)
        assert s.denominator == 1
        return int(s)
    for mu in sorted(weights, key=depth):
        if mu == lam:
            continue
        mu_rho = tuple(c + 1 for c in mu)
        denom = c_top - weight_form(rd, mu_rho, mu_rho)
        total = Fraction(0)
        for beta in rd.positive_roots:
            beta_fw = rd.pairing(beta)
            k = 1
            while True:
                nu = tuple(m + k * b for m, b in zip(mu, beta_fw))
                if nu not in mult and nu not in weights:
                    break
                mnu = mult.get(nu, 0)
                if mnu:
                    total += mnu * rd.wt_root_pairing(nu, beta)
                k += 1
        val = 2 * total / denom
        assert val.denominator == 1
        if val:
            mult[mu] = int(val)
    return tuple(sorted((mu, m) for mu, m in mult.items() if m))


def tensor_decomposition(rd: RootData, lam, mu) -> dict:
    """Multiplicities of irreducibles in V(lam) (x) V(mu), via Klimyk."""
    out: dict = {}
    for xi, m in weight_multiplicities(rd, mu).items():
        v = tuple(Fraction(l) + Fraction(x) + 1 for l, x in zip(lam, xi))
        dom, sign = rd.dominant_representative(v)
        if sign == 0:
            continue
        nu = tuple(c - 1 for c in dom)
        out[nu] = out.get(nu, 0) + sign * m
    return {nu: c for nu, c in out.items() if c}


def level(rd: RootData, wt) -> Fraction:
    """wt(theta-coroot): the level pairing against the highest root."""
    theta = rd.highest_root()
    # theta is long and normalized to length^2 2, so coroot pairing = (wt, theta)
    return rd.wt_root_pairing(wt, theta)


def level_weights(rd: RootData, c: int) -> list:
    """All dominant integral weights of level <= c, sorted."""
    out = []
    def rec(prefix):
        i = len(prefix)
        if i == rd.rank:
            if level(rd, prefix) <= c:
                out.append(tuple(Fraction(x) for x in prefix))
            return
        k = 0
        while True:
            cand = prefix + [k]
            if level(rd, tuple(cand + [0] * (rd.rank - i - 1))) > c:
                break
            rec(cand)
            k += 1
    rec([])
    return sorted(out)


def fusion_coefficients(rd: RootData, c: int, lam, mu) -> dict:
    """Level-c fusion product V(lam) x V(mu) by Kac-Walton alcove folding."""
    kappa = c + dual_coxeter_number(rd)
    theta = rd.highest_root()
    theta_fw = rd.pairing(theta)
    out: dict = {}
    for xi, m in weight_multiplicities(rd, mu).items():
        v = tuple(Fraction(l) + Fraction(x) + 1 for l, x in zip(lam, xi))
        sign = 1
        while True:
            i = next((k for k, cc in enumerate(v) if cc < 0), None)
            if i is not None:
                v = rd.reflect(v, i)
                sign = -sign
                continue
            if any(cc == 0 for cc in v):
                sign = 0
                break
            lv = rd.wt_root_pairing(v, theta)
            if lv == kappa:
                sign = 0
                break
            if lv > kappa:
                # affine reflection: v -> v - (lv - kappa) * theta
                v = tuple(vc - (lv - kappa) * tc for vc, tc in zip(v, theta_fw))
                sign = -sign
                continue
            break
        if sign == 0:
            continue
        nu = tuple(cc - 1 for cc in v)
        out[nu] = out.get(nu, 0) + sign * m
    return {nu: cc for nu, cc in out.items() if cc}


def dual_coxeter_number(rd: RootData) -> int:
    theta = rd.highest_root()
    cr = rd.coroot_coords(theta)
    s = sum(cr)
    assert all(c.denominator == 1 for c in cr)
    return 1 + int(s)
