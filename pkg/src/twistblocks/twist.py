"""Finite-order automorphisms sigma = tau * eps^(ad h) and their affine data.

An automorphism is always given in normalized form: a diagram automorphism
tau of order r in {1,2,3} together with an element h of the tau-fixed Cartan
subalgebra satisfying alpha_i(h) in Z_{>=0} on the simple roots of the fixed
subalgebra g^tau and theta_0(h) <= m/r, and an integer m with r | m and
sigma^m = 1.  Weights live in (h^tau)* and are stored as Fraction tuples in
the fundamental-weight coordinates of g^tau, i.e. lambda_i = lambda(coroot_i)
for the folded simple coroots.

The degree-j eigenspace of sigma is g_j = {x : sigma(x) = zeta_m^j x}; its
basis vectors are computed exactly over Q(zeta_m), blockwise along
tau-orbits of Chevalley basis lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .cartan import RootData, build_root_data, identify_simple_type
from .chevalley import SimpleLieAlgebra, build_simple_algebra
from .errors import InternalCheckError, ValidationError
from .field import CycField, QQ, as_fraction
from .linalg import nullspace_dense, solve_dense, solve_rectangular

Weight = tuple  # Fraction tuple in folded fundamental-weight coordinates


def weight_str(wt) -> str:
    return ",".join(str(Fraction(c)) for c in wt)


def parse_weight(s: str) -> Weight:
    s = s.strip()
    if not s:
        return ()
    return tuple(Fraction(tok) for tok in s.split(","))


def _hvec_to_elem(alg: SimpleLieAlgebra, hvec) -> dict:
    return {alg.h(t): c for t, c in enumerate(hvec) if c}


def _elem_to_hvec(alg: SimpleLieAlgebra, elem) -> tuple:
    hvec = [Fraction(0)] * alg.rank
    for idx, c in elem.items():
        if idx < 2 * alg.npos:
            if c:
                raise InternalCheckError("element has root-vector components, "
                                         "expected a Cartan element")
        else:
            hvec[idx - 2 * alg.npos] = as_fraction(c)
    return tuple(hvec)


def _root_pairing_with_coroot(alg, gamma, coroot_hvec) -> Fraction:
    """gamma(H) for a root gamma of g and H in h given by coordinates."""
    return sum(coroot_hvec[t] * sum(alg.cartan[t][j] * gamma[j]
                                    for j in range(alg.rank))
               for t in range(alg.rank))


@dataclass
class DiagramAutomorphism:
    """A Cartan-matrix preserving node permutation with its folded data."""

    algebra: SimpleLieAlgebra
    perm: tuple
    order: int                   # r in {1, 2, 3}
    orbits: tuple                # node orbits, canonical (min-sorted) order
    folded_type: tuple           # (series, rank) of g^tau
    folded_cartan: tuple
    folded_roots: RootData
    is_a2n: bool                 # (g, r) = (A_{2n}, 2)
    x_gens: tuple                # simple raising elements of g^tau (over Q)
    y_gens: tuple
    coroots: tuple               # h-coordinate tuples of the folded coroots
    theta0_root: tuple           # theta_0 in folded simple-root coordinates
    theta0_fw: tuple             # theta_0 in folded fw-coordinates
    theta0_norm: Fraction        # <theta_0, theta_0>_tau from the case list
    x_o: dict                    # over CycField(order)
    y_o: dict
    h_o: tuple                   # h-coordinates (rational)
    h_o_coroot: tuple            # h_o in the folded-coroot basis
    tau_map: dict                # Chevalley basis map idx -> (idx, sign)

    @property
    def folded_rank(self):
        return len(self.orbits)

    def restricted_fw(self, gamma) -> tuple:
        """Weight of the g-root gamma restricted to h^tau, fw-coordinates."""
        return tuple(_root_pairing_with_coroot(self.algebra, gamma, cr)
                     for cr in self.coroots)


def trivial_diagram_automorphism(alg: SimpleLieAlgebra) -> DiagramAutomorphism:
    return build_diagram_automorphism(alg, tuple(range(alg.rank)))


def build_diagram_automorphism(alg: SimpleLieAlgebra, perm) -> DiagramAutomorphism:
    perm = tuple(perm)
    if sorted(perm) != list(range(alg.rank)):
        raise ValidationError("perm must be a permutation of the %d nodes" % alg.rank)
    # order
    r = 1
    cur = perm
    ident = tuple(range(alg.rank))
    while cur != ident:
        cur = tuple(perm[i] for i in cur)
        r += 1
        if r > 3:
            raise ValidationError("diagram automorphism order must be 1, 2 or 3")
    tau_map = alg.node_permutation_matrix(perm)

    # node orbits, ordered by minimal element
    seen = set()
    orbits = []
    for i in range(alg.rank):
        if i in seen:
            continue
        orb = [i]
        j = perm[i]
        while j != i:
            orb.append(j)
            j = perm[j]
        seen.update(orb)
        orbits.append(tuple(sorted(orb)))
    orbits.sort(key=lambda o: o[0])
    orbits = tuple(orbits)

    # simple generators of g^tau and folded coroots
    x_gens, y_gens, coroots = [], [], []
    for orb in orbits:
        x = {}
        f_raw = {}
        for n in orb:
            root = tuple(1 if t == n else 0 for t in range(alg.rank))
            x[alg.index_of_root_vector(root)] = Fraction(1)
            f_raw[alg.index_of_root_vector(tuple(-c for c in root))] = Fraction(1)
        h_raw = alg.bracket(x, f_raw)
        hvec = _elem_to_hvec(alg, h_raw)
        rep = orb[0]
        simple = tuple(1 if t == rep else 0 for t in range(alg.rank))
        k = _root_pairing_with_coroot(alg, simple, hvec)
        if k <= 0:
            raise InternalCheckError("folded coroot normalization failed")
        x_gens.append(x)
        y_gens.append({idx: 2 * c / k for idx, c in f_raw.items()})
        coroots.append(tuple(2 * c / k for c in hvec))
    x_gens, y_gens, coroots = tuple(x_gens), tuple(y_gens), tuple(coroots)

    l = len(orbits)
    folded_cartan = []
    for i in range(l):
        row = []
        for j in range(l):
            rep = orbits[j][0]
            simple = tuple(1 if t == rep else 0 for t in range(alg.rank))
            v = _root_pairing_with_coroot(alg, simple, coroots[i])
            assert v.denominator == 1
            row.append(int(v))
        folded_cartan.append(tuple(row))
    folded_cartan = tuple(folded_cartan)
    ftype = identify_simple_type(folded_cartan)
    if ftype is None:
        raise InternalCheckError("folded Cartan matrix is not of standard "
                                 "simple type in Bourbaki order: %r" % (folded_cartan,))
    frd = build_root_data(folded_cartan)

    is_a2n = (alg.series == "A" and alg.rank % 2 == 0 and r == 2)
    if r == 1:
        theta0_root = frd.highest_root()
    else:
        hs = frd.highest_short_root()
        theta0_root = tuple(2 * c for c in hs) if is_a2n else hs
    theta0_fw = tuple(sum(Fraction(folded_cartan[i][j]) * theta0_root[j]
                          for j in range(l)) for i in range(l))

    # x_o, y_o: tau-eigenvectors in the -theta0 / +theta0 restricted weight
    # spaces, over Q(zeta_r)
    Fr = CycField(r)
    helper = _EigenHelper(alg, tau_map, Fr)

    def restricted(gamma):
        return tuple(_root_pairing_with_coroot(alg, gamma, cr) for cr in coroots)

    minus = tuple(-c for c in theta0_fw)
    x_o = helper.weight_space_eigvec(restricted, minus, 1)
    y_cand = helper.weight_space_eigvec(restricted, theta0_fw, -1)
    h_cand = alg.bracket(x_o, y_cand)
    hvec = _elem_to_hvec(alg, h_cand)
    val = sum(Fraction(theta0_root[j]) *
              _root_pairing_with_coroot(
                  alg, tuple(1 if t == orbits[j][0] else 0 for t in range(alg.rank)),
                  hvec)
              for j in range(l))
    # theta0(h_cand) via theta0 = sum_j theta0_root[j] * beta_j
    if val == 0:
        raise InternalCheckError("degenerate x_o, y_o pairing")
    scale = Fraction(-2) / val
    y_o = {idx: c * scale for idx, c in y_cand.items()}
    h_o = tuple(c * scale for c in hvec)

    # h_o in the folded coroot basis
    cols = [{t: c for t, c in enumerate(cr) if c} for cr in coroots]
    rhs = {t: c for t, c in enumerate(h_o) if c}
    coeffs = solve_rectangular(cols, rhs, QQ)
    h_o_coroot = tuple(Fraction(c) for c in coeffs)
    if not all(c < 0 for c in h_o_coroot):
        raise InternalCheckError("h_o must be a negative coroot combination")

    # <theta_0, theta_0>_tau = 2 / <x_o, y_o>
    xy = as_fraction(alg.form(x_o, y_o))
    theta0_norm = Fraction(2) / xy
    expected = Fraction(2) if is_a2n else Fraction(2, r)
    if theta0_norm != expected:
        raise InternalCheckError(
            "<theta0,theta0>_tau = %s, expected %s" % (theta0_norm, expected))

    return DiagramAutomorphism(
        algebra=alg, perm=perm, order=r, orbits=orbits, folded_type=ftype,
        folded_cartan=folded_cartan, folded_roots=frd, is_a2n=is_a2n,
        x_gens=x_gens, y_gens=y_gens, coroots=coroots,
        theta0_root=theta0_root, theta0_fw=theta0_fw, theta0_norm=theta0_norm,
        x_o=x_o, y_o=y_o, h_o=h_o, h_o_coroot=h_o_coroot, tau_map=tau_map)


class _EigenHelper:
    """Eigenvector extraction for the tau-action on weight spaces."""

    def __init__(self, alg, tau_map, field):
        self.alg = alg
        self.tau_map = tau_map
        self.field = field

    def weight_space_eigvec(self, restricted, target_fw, zeta_exp) -> dict:
        alg, F = self.alg, self.field
        idxs = []
        for k, gamma in enumerate(alg.roots.positive_roots):
            if restricted(gamma) == target_fw:
                idxs.append(alg.e(k))
            if restricted(tuple(-c for c in gamma)) == target_fw:
                idxs.append(alg.f(k))
        if not idxs:
            raise InternalCheckError("empty restricted weight space")
        pos = {idx: t for t, idx in enumerate(idxs)}
        n = len(idxs)
        mat = [[F.zero] * n for _ in range(n)]
        for t, idx in enumerate(idxs):
            jdx, sgn = self.tau_map[idx]
            mat[pos[jdx]][t] = F.from_fraction(sgn)
        lam = F.zeta(zeta_exp % F.M) if F.M > 1 else F.one
        rows = [[mat[i][j] - (lam if i == j else F.zero) for j in range(n)]
                for i in range(n)]
        basis = nullspace_dense(rows, F)
        if len(basis) != 1:
            raise InternalCheckError(
                "expected a one-dimensional tau-eigenspace, got %d" % len(basis))
        return {idxs[t]: c for t, c in enumerate(basis[0]) if c}


@dataclass
class EigVec:
    """A sigma-eigenvector: simultaneous (tau, ad h) eigenvector of g."""

    j: int          # sigma-eigenvalue exponent: sigma(v) = zeta_m^j v
    idx: int        # position within the basis of g_j
    vec: dict       # Chevalley coordinates over the working field
    weight: tuple   # h^tau weight, folded fw-coordinates
    adh: int        # ad h eigenvalue
    tau_exp: int    # tau eigenvalue exponent mod r


@dataclass
class FiniteOrderAutomorphism:
    algebra: SimpleLieAlgebra
    tau: DiagramAutomorphism
    h_values: tuple              # alpha_i(h), one per folded node
    m: int
    field: CycField
    h_vec: tuple                 # h in Cartan coordinates
    eig: tuple                   # eig[j] = tuple of EigVec for g_j
    s: dict                      # labels, keys 0..l-1 and "o"
    sbar: dict
    sbar_gcd: int
    gen_x: dict                  # label -> algebra element over field
    gen_y: dict
    gen_coroot: dict             # label -> h-coordinate tuple
    coroot_norm: dict            # label -> <coroot, coroot>
    _block_cache: dict = dc_field(default_factory=dict, repr=False)
    _bracket_cache: dict = dc_field(default_factory=dict, repr=False)

    # -- bookkeeping --------------------------------------------------------

    @property
    def labels(self):
        return list(range(self.tau.folded_rank)) + ["o"]

    @property
    def folded_rank(self):
        return self.tau.folded_rank

    def zeta(self, k: int):
        """zeta_m^k inside the working field."""
        return self.field.zeta((self.field.M // self.m) * k)

    def eigenspace_dims(self) -> dict:
        return {j: len(self.eig[j]) for j in range(self.m)}

    def describe(self) -> str:
        return "%s%d, tau order %d, h = (%s), m = %d" % (
            self.algebra.series, self.algebra.rank, self.tau.order,
            ",".join(str(v) for v in self.h_values), self.m)

    # -- eigen decomposition ------------------------------------------------

    def eigen_coords(self, x: dict) -> dict:
        """Coordinates {(j, idx): coeff} of an algebra element in the
        sigma-eigenbasis."""
        F = self.field
        out = {}
        rem = {k: v for k, v in x.items() if v}
        by_block: dict = {}
        for idx, c in rem.items():
            by_block.setdefault(self._block_of[idx], {})[idx] = c
        for block_id, part in by_block.items():
            idxs, members = self._blocks[block_id]
            mat = [[F.zero] * len(members) for _ in idxs]
            pos = {ix: t for t, ix in enumerate(idxs)}
            for col, ev in enumerate(members):
                for ix, c in ev.vec.items():
                    mat[pos[ix]][col] = c
            rhs = [part.get(ix, F.zero) for ix in idxs]
            sol = solve_dense(mat, rhs, F)
            for col, c in enumerate(sol):
                if c:
                    ev = members[col]
                    out[(ev.j, ev.idx)] = c
        return out

    def eig_elem(self, j, idx) -> dict:
        return self.eig[j % self.m][idx].vec

    def bracket_eigen(self, a, b):
        """Bracket of two eigenbasis vectors, as eigen coordinates, plus
        their invariant-form pairing.  a, b are (j, idx) keys."""
        key = (a, b)
        got = self._bracket_cache.get(key)
        if got is not None:
            return got
        va, vb = self.eig_elem(*a), self.eig_elem(*b)
        br = self.algebra.bracket(va, vb)
        coords = self.eigen_coords(br) if br else {}
        frm = self.algebra.form(va, vb)
        if not isinstance(frm, Fraction):
            pass
        res = (coords, frm)
        self._bracket_cache[key] = res
        return res

    def form_eigen(self, a, b):
        return self.algebra.form(self.eig_elem(*a), self.eig_elem(*b))

    # -- labels and weight sets ----------------------------------------------

    def n_coefficients(self, lam: Weight, c: int) -> dict:
        """The integrality coefficients n_{lambda,i}, exact rationals.

        n_{lambda,i} is the eigenvalue of [x_i[t^{s_i}], y_i[t^{-s_i}]] on a
        level-c highest weight vector of weight lambda: the coroot pairing
        plus the central term s_i*c*<coroot_i, coroot_i>/(2m).
        """
        lam = tuple(Fraction(x) for x in lam)
        if len(lam) != self.folded_rank:
            raise ValidationError("weight has %d coordinates, expected %d"
                                  % (len(lam), self.folded_rank))
        out = {}
        for i in range(self.folded_rank):
            out[i] = lam[i] + Fraction(self.s[i] * c, 1) * self.coroot_norm[i] / (2 * self.m)
        lam_ho = sum(a * x for a, x in zip(self.tau.h_o_coroot, lam))
        out["o"] = lam_ho + Fraction(self.s["o"] * c, 1) * self.coroot_norm["o"] / (2 * self.m)
        return out

    def in_Dc(self, lam: Weight, c: int) -> bool:
        return all(v.denominator == 1 and v >= 0
                   for v in self.n_coefficients(lam, c).values())

    def enumerate_Dc(self, c: int) -> list:
        """All level-c integrable highest weights, sorted lexicographically.

        Search region: writing lambda_i = n_i - sbar_i*c/m with n_i >= 0,
        the condition n_o >= 0 reads sum_i |a_i| lambda_i <= sbar_o*c/m for
        the (strictly negative) coroot coordinates a_i of h_o, which yields
        the per-coordinate bound asserted below.
        """
        if c < 1:
            raise ValidationError("level must be a positive integer")
        l = self.folded_rank
        lo = [Fraction(-self.sbar[i] * c, self.m) for i in range(l)]
        a = [-x for x in self.tau.h_o_coroot]  # positive
        cap = Fraction(self.sbar["o"] * c, self.m)
        out = []

        def rec(prefix):
            i = len(prefix)
            if i == l:
                lam = tuple(prefix)
                ns = self.n_coefficients(lam, c)
                if all(v.denominator == 1 and v >= 0 for v in ns.values()):
                    out.append(lam)
                return
            budget = cap + sum(aj * (-lo[j]) for j, aj in enumerate(a) if j != i)
            hi = budget / a[i]
            v = lo[i]
            while v <= hi:
                rec(prefix + [v])
                v += 1

        rec([])
        out.sort()
        return out

    def zero_in_Dc(self, c: int) -> bool:
        if c < 1:
            raise ValidationError("level must be a positive integer")
        return (self.sbar_gcd * c) % self.m == 0

    # -- Weyl combinatorics of the fixed subalgebra ---------------------------

    def g0_simple_labels(self) -> list:
        return [i for i in self.labels if self.s[i] == 0]

    def _label_root_fw(self, i) -> tuple:
        if i == "o":
            return tuple(-c for c in self.tau.theta0_fw)
        return tuple(self.tau.folded_cartan[j][i] for j in range(self.folded_rank))

    def label_pairing(self, lam, i) -> Fraction:
        """lambda(coroot_i) for a label i of the affine index set."""
        lam = tuple(Fraction(x) for x in lam)
        if i == "o":
            return sum(a * x for a, x in zip(self.tau.h_o_coroot, lam))
        return lam[i]

    def reflect_label(self, lam, i) -> Weight:
        c = self.label_pairing(lam, i)
        root = self._label_root_fw(i)
        return tuple(Fraction(x) - c * r for x, r in zip(lam, root))

    def is_g0_dominant(self, lam) -> bool:
        return all(self.label_pairing(lam, i) >= 0 for i in self.g0_simple_labels())

    def dual_weight(self, mu: Weight) -> Weight:
        """Highest weight of the dual g^sigma-module, -w0(mu)."""
        if not self.is_g0_dominant(mu):
            raise ValidationError("weight is not dominant for g^sigma")
        cur = tuple(-Fraction(x) for x in mu)
        simple = self.g0_simple_labels()
        guard = 0
        while True:
            i = next((i for i in simple if self.label_pairing(cur, i) < 0), None)
            if i is None:
                return cur
            cur = self.reflect_label(cur, i)
            guard += 1
            if guard > 100000:
                raise InternalCheckError("dominance iteration did not terminate")

    def g0_cartan(self):
        """Cartan matrix of the semisimple part of g^sigma, over the labels
        with s_i = 0 (in label order)."""
        labels = self.g0_simple_labels()
        return labels, tuple(
            tuple(int(sum(cc * rr for cc, rr in zip(
                self._coroot_in_folded(a), self._label_root_fw(b))))
                  for b in labels) for a in labels)

    def _coroot_in_folded(self, i):
        if i == "o":
            return self.tau.h_o_coroot
        return tuple(Fraction(1) if t == i else Fraction(0)
                     for t in range(self.folded_rank))

    def weyl_dim(self, lam: Weight) -> int:
        """Dimension of the irreducible g^sigma-module V(lambda)."""
        if not self.is_g0_dominant(lam):
            raise ValidationError("weight is not dominant for g^sigma")
        labels, cm = self.g0_cartan()
        if not labels:
            return 1
        rd0 = build_root_data(cm)
        coords = tuple(self.label_pairing(lam, i) for i in labels)
        return rd0.weyl_dim(coords)

    # -- the realization isomorphism -----------------------------------------

    def realization_map(self, x: dict, j: int):
        """Image of x[t^j], x in L(g, tau)-degree j, under the realization
        isomorphism onto L(g, sigma).

        Returns (terms, central): terms is a list of (eigvec key,
        coefficient, new power (m/r) j + k) over the simultaneous (tau, ad h)
        eigencomponents of x, and central is the degree-zero correction
        (1/m) <h, z> summed over the Cartan components z landing at power 0,
        which makes the map preserve the central extension exactly."""
        r = self.tau.order
        out = []
        central = None
        for (jj, idx), c in self.eigen_coords(x).items():
            ev = self.eig[jj][idx]
            if ev.tau_exp % r != j % r:
                continue
            power = (self.m // r) * j + ev.adh
            out.append(((jj, idx), c, power))
            if power == 0 and ev.adh == 0 and not any(ev.weight):
                h_elem = _hvec_to_elem(self.algebra, self.h_vec)
                val = self.algebra.form(h_elem, ev.vec)
                if val:
                    term = c * val * Fraction(1, self.m)
                    central = term if central is None else central + term
        return out, (central if central is not None else self.field.zero)


def build_automorphism(alg: SimpleLieAlgebra, tau: DiagramAutomorphism,
                       h_values, m: int, field: CycField | None = None
                       ) -> FiniteOrderAutomorphism:
    """Assemble sigma = tau * eps^(ad h) with eps = exp(2 pi i/m)."""
    if tau.algebra is not alg:
        raise ValidationError("tau was built for a different algebra")
    r = tau.order
    if m < 1 or m % r != 0:
        raise ValidationError("m must be a positive multiple of the order of tau")
    h_values = tuple(int(v) for v in h_values)
    if len(h_values) != tau.folded_rank:
        raise ValidationError("h needs %d coordinates (one per folded node)"
                              % tau.folded_rank)
    if any(v < 0 for v in h_values):
        raise ValidationError("alpha_i(h) must be nonnegative integers")
    theta0_h = sum(int(tau.theta0_root[j]) * h_values[j]
                   for j in range(tau.folded_rank))
    if theta0_h > m // r:
        raise ValidationError("theta_0(h) = %d exceeds m/r = %d"
                              % (theta0_h, m // r))

    F = field if field is not None else CycField(m)
    if F.M % m != 0:
        raise ValidationError("working field must contain the m-th roots of unity")

    # h in Cartan coordinates
    l = tau.folded_rank
    mat = [[Fraction(tau.folded_cartan[i][j]) for j in range(l)] for i in range(l)]
    coeffs = solve_dense(mat, [Fraction(v) for v in h_values], QQ)
    h_vec = tuple(sum(coeffs[i] * tau.coroots[i][t] for i in range(l))
                  for t in range(alg.rank))

    def zeta(k):
        return F.zeta((F.M // m) * k)

    # sigma on the Chevalley basis
    def adh_eig(idx):
        gamma = alg.basis_root(idx)
        if gamma is None:
            return 0
        v = _root_pairing_with_coroot(alg, gamma, h_vec)
        if v.denominator != 1:
            raise ValidationError("beta(h) must be an integer for every root")
        return int(v)

    # tau-orbits of basis indices
    dim = alg.dimension
    seen = set()
    blocks = []
    block_of = {}
    for idx in range(dim):
        if idx in seen:
            continue
        orb = [idx]
        nxt = tau.tau_map[idx][0]
        while nxt != idx:
            orb.append(nxt)
            nxt = tau.tau_map[nxt][0]
        seen.update(orb)
        blocks.append(sorted(orb))
    eig_lists = [[] for _ in range(m)]
    stored_blocks = []
    for bid, idxs in enumerate(blocks):
        n = len(idxs)
        pos = {ix: t for t, ix in enumerate(idxs)}
        smat = [[F.zero] * n for _ in range(n)]
        for t, ix in enumerate(idxs):
            jdx, sgn = tau.tau_map[ix]
            smat[pos[jdx]][t] = F.from_fraction(sgn) * zeta(adh_eig(ix))
        members = []
        found = 0
        for j in range(m):
            lamj = zeta(j)
            rows = [[smat[a][b] - (lamj if a == b else F.zero) for b in range(n)]
                    for a in range(n)]
            for vec in nullspace_dense(rows, F):
                gamma = alg.basis_root(idxs[0])
                wt = (tau.restricted_fw(gamma) if gamma is not None
                      else (Fraction(0),) * l)
                k = adh_eig(idxs[0])
                texp_num = (j - k) % m
                if texp_num % (m // r) != 0:
                    raise InternalCheckError("tau exponent not divisible")
                ev = EigVec(j=j, idx=len(eig_lists[j]),
                            vec={idxs[t]: c for t, c in enumerate(vec) if c},
                            weight=wt, adh=k,
                            tau_exp=(texp_num // (m // r)) % r)
                eig_lists[j].append(ev)
                members.append(ev)
                found += 1
        if found != n:
            raise InternalCheckError("eigen decomposition incomplete on a block")
        stored_blocks.append((idxs, members))
        for ix in idxs:
            block_of[ix] = bid

    s = {i: h_values[i] for i in range(l)}
    s["o"] = m // r - theta0_h

    Fr = CycField(r)
    gen_x = {i: {k: F.from_fraction(c) for k, c in tau.x_gens[i].items()}
             for i in range(l)}
    gen_y = {i: {k: F.from_fraction(c) for k, c in tau.y_gens[i].items()}
             for i in range(l)}
    gen_x["o"] = {k: F.embed(c, Fr) for k, c in tau.x_o.items()}
    gen_y["o"] = {k: F.embed(c, Fr) for k, c in tau.y_o.items()}
    gen_coroot = {i: tau.coroots[i] for i in range(l)}
    gen_coroot["o"] = tau.h_o

    coroot_norm = {}
    for lab in list(range(l)) + ["o"]:
        hv = gen_coroot[lab]
        el = _hvec_to_elem(alg, hv)
        coroot_norm[lab] = as_fraction(alg.form(el, el))
    sbar = {}
    for lab in list(range(l)) + ["o"]:
        v = Fraction(s[lab]) * coroot_norm[lab] / 2
        if v.denominator != 1:
            raise InternalCheckError("normalized label is not an integer")
        sbar[lab] = int(v)
    g = 0
    for v in sbar.values():
        g = math.gcd(g, v)
    sigma = FiniteOrderAutomorphism(
        algebra=alg, tau=tau, h_values=h_values, m=m, field=F, h_vec=h_vec,
        eig=tuple(tuple(v) for v in eig_lists), s=s, sbar=sbar, sbar_gcd=g,
        gen_x=gen_x, gen_y=gen_y, gen_coroot=gen_coroot, coroot_norm=coroot_norm)
    sigma._blocks = stored_blocks
    sigma._block_of = block_of

    # sanity: dimensions add up and sigma(x_i) = zeta^{s_i} x_i
    if sum(len(v) for v in eig_lists) != dim:
        raise InternalCheckError("eigenspace dimensions do not sum to dim g")
    for lab in sigma.labels:
        coords = sigma.eigen_coords(gen_x[lab])
        if any(j != s[lab] % m for (j, _) in coords):
            raise InternalCheckError("sigma(x_i) != zeta^{s_i} x_i for label %r" % (lab,))
        coords = sigma.eigen_coords(gen_y[lab])
        if any(j != (-s[lab]) % m for (j, _) in coords):
            raise InternalCheckError("sigma(y_i) != zeta^{-s_i} y_i for label %r" % (lab,))
    return sigma


def automorphism_from_spec(series: str, rank: int, tau_spec: str,
                           h_values, m: int, field=None) -> FiniteOrderAutomorphism:
    """Convenience constructor.  tau_spec: 'id', 'flip' (the order-2 diagram
    flip), 'rot3' (D4 triality), or an explicit 1-indexed permutation like
    '2,1'."""
    alg = build_simple_algebra(series, rank)
    tau_spec = tau_spec.strip().lower()
    if tau_spec in ("id", "1", "identity"):
        perm = tuple(range(rank))
    elif tau_spec == "flip":
        if series.upper() == "A":
            perm = tuple(rank - 1 - i for i in range(rank))
        elif series.upper() == "D":
            perm = tuple(range(rank - 2)) + (rank - 1, rank - 2)
        elif series.upper() == "E" and rank == 6:
            perm = (5, 1, 4, 3, 2, 0)
        else:
            raise ValidationError("no diagram flip for type %s%d" % (series, rank))
    elif tau_spec == "rot3":
        if (series.upper(), rank) != ("D", 4):
            raise ValidationError("triality only exists for D4")
        perm = (2, 1, 3, 0)
    else:
        perm = tuple(int(t) - 1 for t in tau_spec.split(","))
    tau = build_diagram_automorphism(alg, perm)
    if h_values is None:
        h_values = (0,) * tau.folded_rank
    return build_automorphism(alg, tau, h_values, m, field=field)
