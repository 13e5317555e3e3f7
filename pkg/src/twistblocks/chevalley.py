"""Chevalley bases of simple Lie algebras with integer structure constants.

Sign convention.  Positive roots are totally ordered by height and then
reverse-lexicographically on simple-root coordinates (so alpha_1 < alpha_2
< ... among simple roots).  For each non-simple positive root g the
extra-special pair is the decomposition g = a + b into positive roots with
a minimal; we set N(a, b) = p + 1 > 0 there, p the largest integer with
b - p*a still a root.  Every other constant follows from

    N(b, a) = -N(a, b),            N(-a, -b) = -N(a, b),
    N(a, b)/(c, c) = N(b, c)/(a, a)      for a + b + c = 0,

and the four-root identity

    N(a,b)N(c,d)/(a+b, a+b) + N(b,c)N(a,d)/(b+c, b+c)
                            + N(c,a)N(b,d)/(c+a, c+a) = 0

for a + b + c + d = 0 with no two opposite.  This pins every constant
deterministically; the Jacobi identity is property-tested on top.

Basis order: e-vectors by the root order, then f-vectors, then h_1..h_l.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .cartan import RootData, _root_key, cartan_matrix, build_root_data
from .errors import ValidationError


def _tadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _tneg(a):
    return tuple(-x for x in a)


def _is_pos(a):
    for x in a:
        if x > 0:
            return True
        if x < 0:
            return False
    return False


@dataclass
class SimpleLieAlgebra:
    series: str
    rank: int
    cartan: tuple
    roots: RootData
    dual_coxeter: int
    explicit: bool

    _pos_index: dict = dc_field(default_factory=dict, repr=False)
    _all_roots: set = dc_field(default_factory=set, repr=False)
    _extra_special: dict = dc_field(default_factory=dict, repr=False)
    _N: dict = dc_field(default_factory=dict, repr=False)

    # -- basis bookkeeping -------------------------------------------------

    @property
    def npos(self):
        return len(self.roots.positive_roots)

    @property
    def dimension(self):
        return self.rank + 2 * self.npos

    def e(self, k):
        return k

    def f(self, k):
        return self.npos + k

    def h(self, i):
        return 2 * self.npos + i

    def basis_root(self, idx):
        """Root of a basis vector, or None for Cartan elements."""
        if idx < self.npos:
            return self.roots.positive_roots[idx]
        if idx < 2 * self.npos:
            return _tneg(self.roots.positive_roots[idx - self.npos])
        return None

    def index_of_root_vector(self, root):
        if _is_pos(root):
            return self.e(self._pos_index[root])
        return self.f(self._pos_index[_tneg(root)])

    # -- structure constants ----------------------------------------------

    def _require_explicit(self):
        if not self.explicit:
            raise ValidationError(
                "structure constants not materialized for %s%d; explicit "
                "computations are supported for rank <= 4 and A_n, n <= 6"
                % (self.series, self.rank))

    def _p(self, a, b):
        """Largest p with b - p*a a root."""
        p = 0
        cur = b
        while True:
            cur = _tadd(cur, _tneg(a))
            if cur in self._all_roots:
                p += 1
            else:
                return p

    def N(self, a, b):
        """Structure constant [E_a, E_b] = N(a,b) E_{a+b} for roots a, b
        with a + b a root."""
        self._require_explicit()
        key = (a, b)
        got = self._N.get(key)
        if got is not None:
            return got
        val = self._compute_N(a, b)
        self._N[key] = val
        return val

    def _compute_N(self, a, b):
        s = _tadd(a, b)
        assert s in self._all_roots and any(s)
        apos, bpos = _is_pos(a), _is_pos(b)
        if apos and bpos:
            if _root_key(a) > _root_key(b):
                return -self.N(b, a)
            a1, b1 = self._extra_special[s]
            if (a1, b1) == (a, b):
                return Fraction(self._p(a, b) + 1)
            nrm = self.roots.root_norm
            t2 = Fraction(0)
            d1 = _tadd(b1, _tneg(a))
            if d1 in self._all_roots:
                t2 = self.N(b1, _tneg(a)) * self.N(a1, _tneg(b)) / nrm(d1)
            t3 = Fraction(0)
            d2 = _tadd(a1, _tneg(a))
            if d2 in self._all_roots:
                t3 = self.N(_tneg(a), a1) * self.N(b1, _tneg(b)) / nrm(d2)
            n_neg = -(t2 + t3) * nrm(s) / self.N(a1, b1)
            val = -n_neg
            assert val.denominator == 1 and val != 0
            return val
        if (not apos) and (not bpos):
            return -self.N(_tneg(a), _tneg(b))
        # mixed signs
        if not apos:
            return -self.N(b, a)
        z = _tneg(s)
        nrm = self.roots.root_norm
        if _is_pos(z):
            # (z, a) both positive, N(a,b)/(z,z)... = N(z,a)/(b,b)
            return self.N(z, a) * nrm(z) / nrm(b)
        # (b, z) both negative, N(a,b)/(z,z) = N(b,z)/(a,a)
        return self.N(b, z) * nrm(z) / nrm(a)

    def coroot_coeffs(self, root):
        cr = self.roots.coroot_coords(root)
        assert all(c.denominator == 1 for c in cr)
        return cr

    # -- brackets and the invariant form ------------------------------------

    def bracket_basis(self, i, j) -> dict:
        """Bracket of two basis vectors as a sparse coefficient map."""
        self._require_explicit()
        if i > j:
            return {k: -c for k, c in self.bracket_basis(j, i).items()}
        if i == j:
            return {}
        ri, rj = self.basis_root(i), self.basis_root(j)
        if ri is None and rj is None:
            return {}
        if ri is None or rj is None:
            # Cartan against root vector
            if rj is None:
                i, j = j, i
                ri, rj = rj, ri
                sgn = -1
            else:
                sgn = 1
            hcoord = i - 2 * self.npos
            val = sum(self.cartan[hcoord][t] * rj[t] for t in range(self.rank))
            if val == 0:
                return {}
            return {j: Fraction(sgn * val)}
        s = _tadd(ri, rj)
        if not any(s):
            # [E_a, E_-a] = coroot of a (sign: [e, f] = h_a for a positive)
            sgn = 1 if _is_pos(ri) else -1
            pos = ri if _is_pos(ri) else rj
            cr = self.coroot_coeffs(pos)
            return {self.h(t): Fraction(sgn) * cr[t] for t in range(self.rank) if cr[t]}
        if s in self._all_roots:
            return {self.index_of_root_vector(s): self.N(ri, rj)}
        return {}

    def bracket(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for i, ci in x.items():
            if not ci:
                continue
            for j, cj in y.items():
                if not cj:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    v = out.get(k)
                    term = ci * cj * c
                    v = term if v is None else v + term
                    if v:
                        out[k] = v
                    else:
                        out.pop(k, None)
        return out

    def form_basis(self, i, j) -> Fraction:
        """Normalized invariant form with (theta, theta) = 2."""
        ri, rj = self.basis_root(i), self.basis_root(j)
        if ri is None and rj is None:
            a, b = i - 2 * self.npos, j - 2 * self.npos
            return Fraction(self.cartan[a][b]) / self.roots.d[b]
        if ri is None or rj is None:
            return Fraction(0)
        if any(_tadd(ri, rj)):
            return Fraction(0)
        return Fraction(2) / self.roots.root_norm(ri)

    def form(self, x: dict, y: dict):
        tot = None
        for i, ci in x.items():
            for j, cj in y.items():
                c = self.form_basis(i, j)
                if c:
                    term = ci * cj * c
                    tot = term if tot is None else tot + term
        return tot if tot is not None else Fraction(0)

    # -- distinguished automorphisms of the basis ---------------------------

    def node_permutation_matrix(self, perm) -> dict:
        """Extend a Dynkin-diagram permutation to the Chevalley basis.

        perm: tuple with perm[i] = image of node i (0-indexed).  Returns a
        map basis index -> (image index, sign).  Requires the permutation to
        preserve the Cartan matrix.
        """
        self._require_explicit()
        n = self.rank
        for i in range(n):
            for j in range(n):
                if self.cartan[perm[i]][perm[j]] != self.cartan[i][j]:
                    raise ValidationError(
                        "node permutation does not preserve the Cartan matrix")
        out = {}
        for i in range(n):
            out[self.h(i)] = (self.h(perm[i]), Fraction(1))

        def img_root(r):
            v = [0] * n
            for i, c in enumerate(r):
                v[perm[i]] = c
            return tuple(v)

        # signs by induction on height via extra-special pairs
        esign = {}
        for k, r in enumerate(self.roots.positive_roots):
            if sum(r) == 1:
                esign[r] = Fraction(1)
                continue
            a, b = self._extra_special[r]
            val = esign[a] * esign[b] * self.N(img_root(a), img_root(b)) / self.N(a, b)
            assert val in (1, -1)
            esign[r] = val
        for k, r in enumerate(self.roots.positive_roots):
            tr = img_root(r)
            ke = self._pos_index[tr]
            out[self.e(k)] = (self.e(ke), esign[r])
            out[self.f(k)] = (self.f(ke), esign[r])
        return out

    def cartan_involution_matrix(self) -> dict:
        """The Chevalley involution: e_i -> -f_i, f_i -> -e_i, h -> -h."""
        self._require_explicit()
        out = {}
        for i in range(self.rank):
            out[self.h(i)] = (self.h(i), Fraction(-1))
        wsign = {}
        for k, r in enumerate(self.roots.positive_roots):
            if sum(r) == 1:
                wsign[r] = Fraction(-1)
            else:
                a, b = self._extra_special[r]
                # omega(e_r) = [omega e_a, omega e_b]/N(a,b), and
                # [f_a, f_b] = -N(a,b) f_{a+b}
                val = wsign[a] * wsign[b] * (-self.N(a, b)) / self.N(a, b)
                assert val in (1, -1)
                wsign[r] = val
            out[self.e(k)] = (self.f(k), wsign[r])
            out[self.f(k)] = (self.e(k), wsign[r])
        return out

    def apply_basis_map(self, mp: dict, x: dict) -> dict:
        out = {}
        for i, c in x.items():
            j, s = mp[i]
            v = out.get(j)
            term = c * s
            v = term if v is None else v + term
            if v:
                out[j] = v
            else:
                out.pop(j, None)
        return out


def build_simple_algebra(series: str, rank: int) -> SimpleLieAlgebra:
    """Construct the Chevalley model of the simple algebra of given type."""
    cm = cartan_matrix(series, rank)
    rd = build_root_data(cm)
    explicit = rank <= 4 or (series.upper() == "A" and rank <= 6)
    from .cartan import dual_coxeter_number
    alg = SimpleLieAlgebra(series=series.upper(), rank=rank, cartan=cm,
                           roots=rd, dual_coxeter=dual_coxeter_number(rd),
                           explicit=explicit)
    alg._pos_index = {r: k for k, r in enumerate(rd.positive_roots)}
    alg._all_roots = set(rd.positive_roots) | {_tneg(r) for r in rd.positive_roots}
    if explicit:
        # extra-special pair of each non-simple positive root
        for g in rd.positive_roots:
            if sum(g) == 1:
                continue
            best = None
            for a in rd.positive_roots:
                b = _tadd(g, _tneg(a))
                if b in alg._all_roots and _is_pos(b) and _root_key(a) < _root_key(b):
                    if best is None or _root_key(a) < _root_key(best[0]):
                        best = (a, b)
            assert best is not None
            alg._extra_special[g] = best
    return alg
