"""Finite-dimensional irreducible modules of the fixed subalgebra g^sigma.

V(lambda) is realized as the quotient of the g^sigma-Verma module by the
radical of its contravariant form.  Basis vectors are lowering words in the
simple generators y_i with s_i = 0, selected per weight space by Gram rank;
every coordinate computation goes through exact Gram solves.

The module carries action matrices for each sigma-eigenbasis element of
g_0 = g^sigma, which is what truncated affine modules need at degree zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .cartan import build_root_data
from .errors import InternalCheckError, ValidationError
from .field import as_fraction
from .linalg import Echelon, mat_apply, mat_compose, mat_add, mat_scale, mat_inverse
from .twist import FiniteOrderAutomorphism, Weight, _hvec_to_elem


def _mat_comm(a, b):
    return mat_add(mat_compose(a, b), mat_scale(mat_compose(b, a), Fraction(-1)))


@dataclass
class FiniteModule:
    sigma: FiniteOrderAutomorphism
    lam: Weight
    dim: int
    basis: list                 # lowering words (tuples of labels)
    weights: list               # full fw-coordinate weight per basis vector
    gram: list                  # dense contravariant Gram matrix (Fractions)
    _act: dict = dc_field(default_factory=dict, repr=False)

    def weight_of(self, k):
        return self.weights[k]

    def act_eig(self, idx) -> dict:
        """Column-sparse action matrix of the g_0 eigenbasis vector idx."""
        return self._act[idx]

    def act_elem(self, x: dict) -> dict:
        """Action matrix of an arbitrary element of g_0 (Chevalley coords)."""
        out = {}
        for (j, idx), c in self.sigma.eigen_coords(x).items():
            if j != 0:
                raise ValidationError("element does not belong to g^sigma")
            out = mat_add(out, mat_scale(self._act[idx], c))
        return out


def build_finite_module(sigma: FiniteOrderAutomorphism, lam: Weight) -> FiniteModule:
    lam = tuple(Fraction(x) for x in lam)
    if not sigma.is_g0_dominant(lam):
        raise ValidationError("weight is not dominant for g^sigma")
    labels = sigma.g0_simple_labels()
    F = sigma.field
    alg = sigma.algebra

    # contravariant scale: omega(y_a) = -c_a x_a for the Chevalley involution
    omega = alg.cartan_involution_matrix()
    cscale = {}
    for a in labels:
        img = alg.apply_basis_map(omega, sigma.gen_y[a])
        x = sigma.gen_x[a]
        ratio = None
        keys = set(img) | set(x)
        for k in keys:
            xi, yi = x.get(k, F.zero), img.get(k, F.zero)
            if not xi:
                if yi:
                    ratio = None
                    break
                continue
            r = yi / xi
            if ratio is None:
                ratio = r
            elif ratio != r:
                ratio = None
                break
        if ratio is None:
            raise ValidationError(
                "label %r: omega(y) is not proportional to x; this fixed "
                "subalgebra configuration is outside the supported range" % (a,))
        c_a = -as_fraction(ratio)
        if c_a <= 0:
            raise InternalCheckError("contravariant scale must be positive")
        cscale[a] = c_a

    root_fw = {a: sigma._label_root_fw(a) for a in labels}

    # the sl2-straightening below needs [x_a, y_b] = 0 for distinct labels
    for a in labels:
        for b in labels:
            if a != b and alg.bracket(sigma.gen_x[a], sigma.gen_y[b]):
                raise InternalCheckError("cross bracket [x_a, y_b] nonzero")

    def label_pair(wt, a):
        return sigma.label_pairing(wt, a)

    # expected dimensions per weight from the Weyl machinery
    if labels:
        _, cm0 = sigma.g0_cartan()
        rd0 = build_root_data(cm0)
        from .cartan import weight_multiplicities
        coords0 = tuple(label_pair(lam, a) for a in labels)
        mult0 = weight_multiplicities(rd0, coords0)
    else:
        rd0 = None
        mult0 = {(): 1}

    def proj(wt):
        return tuple(label_pair(wt, a) for a in labels)

    # x_a acting on lowering words: sl2-style straightening
    raise_cache: dict = {}

    def raise_word(a, w):
        key = (a, w)
        got = raise_cache.get(key)
        if got is not None:
            return got
        if not w:
            res = {}
        else:
            b, rest = w[0], w[1:]
            res = {}
            if a == b:
                wt_rest = _word_weight(rest)
                coef = label_pair(wt_rest, a)
                if coef:
                    res[rest] = Fraction(coef)
            for w2, c in raise_word(a, rest).items():
                k2 = (b,) + w2
                res[k2] = res.get(k2, Fraction(0)) + c
            res = {k: v for k, v in res.items() if v}
        raise_cache[key] = res
        return res

    wt_cache: dict = {(): lam}

    def _word_weight(w):
        got = wt_cache.get(w)
        if got is None:
            sub = _word_weight(w[1:])
            got = tuple(s - r for s, r in zip(sub, root_fw[w[0]]))
            wt_cache[w] = got
        return got

    ip_cache: dict = {}

    def ip(u, w):
        """Contravariant pairing of two lowering words (equal weight)."""
        if not u:
            return Fraction(1) if not w else Fraction(0)
        key = (u, w)
        got = ip_cache.get(key)
        if got is not None:
            return got
        a, rest = u[0], u[1:]
        total = Fraction(0)
        for w2, c in raise_word(a, w).items():
            if c:
                total += c * ip(rest, w2)
        total *= cscale[a]
        ip_cache[key] = total
        return total

    # breadth-first basis construction by weight
    basis: list = []
    weights: list = []
    by_weight: dict = {}        # proj(wt) -> list of basis positions
    sel_words: dict = {}        # proj(wt) -> list of selected words
    ech_by_wt: dict = {}

    frontier = [()]
    basis.append(())
    weights.append(lam)
    by_weight[proj(lam)] = [0]
    sel_words[proj(lam)] = [()]
    ech_by_wt[proj(lam)] = None

    while frontier:
        new = []
        for w in frontier:
            wt = _word_weight(w)
            for a in labels:
                nwt = tuple(s - r for s, r in zip(wt, root_fw[a]))
                if proj(nwt) not in mult0:
                    continue
                nw = (a,) + w
                p = proj(nwt)
                cur = sel_words.setdefault(p, [])
                if len(cur) >= mult0[p]:
                    continue
                # Gram row of nw against current selection plus itself
                cand = cur + [nw]
                n = len(cand)
                gm = [[ip(x, y) for y in cand] for x in cand]
                from .linalg import dense_to_rows, sparse_rank
                if sparse_rank(dense_to_rows(gm)) == n:
                    cur.append(nw)
                    basis.append(nw)
                    weights.append(nwt)
                    by_weight.setdefault(p, []).append(len(basis) - 1)
                    new.append(nw)
        frontier = new

    # verify dimensions
    dim = len(basis)
    expected = sum(mult0.values())
    if dim != expected:
        raise InternalCheckError(
            "V(lambda) construction found dim %d, Weyl formula gives %d"
            % (dim, expected))

    gram = [[Fraction(0)] * dim for _ in range(dim)]
    for p, idxs in by_weight.items():
        for i in idxs:
            for j in idxs:
                gram[i][j] = ip(basis[i], basis[j])
    for i in range(dim):
        for j in range(dim):
            if gram[i][j] != gram[j][i]:
                raise InternalCheckError("contravariant Gram is not symmetric")

    mod = FiniteModule(sigma=sigma, lam=lam, dim=dim, basis=basis,
                       weights=weights, gram=gram)

    # coordinates of arbitrary word combinations, by Gram solve per weight
    from .field import QQ
    from .linalg import solve_dense
    pos_of = {w: k for k, w in enumerate(basis)}
    gram_sel = {}
    for p, idxs in by_weight.items():
        g = [[gram[i][j] for j in idxs] for i in idxs]
        gram_sel[p] = (idxs, mat_inverse(g, QQ))

    def coords_of(word_comb: dict) -> dict:
        out: dict = {}
        by_p: dict = {}
        for w, c in word_comb.items():
            by_p.setdefault(proj(_word_weight(w)), {})[w] = c
        for p, part in by_p.items():
            if p not in gram_sel:
                # not a weight of V(lambda): the component vanishes there
                continue
            idxs, ginv = gram_sel[p]
            rhs = [Fraction(0)] * len(idxs)
            for w, c in part.items():
                for t, i in enumerate(idxs):
                    v = ip(basis[i], w)
                    if v:
                        rhs[t] += c * v
            for t, i in enumerate(idxs):
                val = sum(ginv[t][s] * rhs[s] for s in range(len(idxs)))
                if val:
                    out[i] = out.get(i, Fraction(0)) + val
        return {k: v for k, v in out.items() if v}

    # action matrices of the simple generators (rational)
    act_low = {}
    act_raise = {}
    for a in labels:
        low = {}
        rai = {}
        for k, w in enumerate(basis):
            img = coords_of({(a,) + w: Fraction(1)})
            if img:
                low[k] = img
            img = coords_of(dict(raise_word(a, w)))
            if img:
                rai[k] = img
        act_low[a] = low
        act_raise[a] = rai

    # action of every g_0 eigenbasis element
    mod._act = _eigen_actions(sigma, mod, labels, act_low, act_raise)
    return mod


def _eigen_actions(sigma, mod, labels, act_low, act_raise):
    """Action matrices for all eigenbasis vectors of g_0.

    Nonzero-weight vectors are matched against nested brackets of the simple
    generators; weight-zero vectors lie in the Cartan and act diagonally.
    """
    alg = sigma.algebra
    F = sigma.field
    acts: dict = {}

    # spanning bracket words for each nonzero g_0 weight
    span: dict = {}   # weight tuple -> list of (element, matrix)
    frontier = []
    for a in labels:
        wt = tuple(Fraction(x) for x in sigma._label_root_fw(a))
        span.setdefault(wt, []).append((sigma.gen_x[a], act_raise[a]))
        nwt = tuple(-x for x in wt)
        span.setdefault(nwt, []).append((sigma.gen_y[a], act_low[a]))
        frontier.append((wt, sigma.gen_x[a], act_raise[a]))
        frontier.append((nwt, sigma.gen_y[a], act_low[a]))
    base = list(frontier)
    # close under brackets with the simple generators, up to the weight set
    needed = set()
    for ev in sigma.eig[0]:
        if any(ev.weight):
            needed.add(tuple(Fraction(x) for x in ev.weight))
    guard = 0
    while frontier:
        guard += 1
        if guard > 10000:
            raise InternalCheckError("bracket closure did not terminate")
        wt, elem, mat = frontier.pop()
        for bwt, belem, bmat in base:
            nwt = tuple(x + y for x, y in zip(wt, bwt))
            if not any(nwt):
                continue
            if nwt in span and len(span[nwt]) >= 3:
                continue
            nelem = alg.bracket(belem, elem)
            if not nelem:
                continue
            nmat = _mat_comm(bmat, mat)
            span.setdefault(nwt, []).append((nelem, nmat))
            frontier.append((nwt, nelem, nmat))

    one = F.one
    for ev in sigma.eig[0]:
        wt = tuple(Fraction(x) for x in ev.weight)
        if not any(wt):
            # Cartan element: diagonal action by the weight pairing
            hvec = _elem_to_hvec_field(alg, ev.vec, F)
            col = {}
            for k in range(mod.dim):
                val = _eval_weight_on_h(sigma, mod.weights[k], hvec, F)
                if val:
                    col[k] = {k: val}
            acts[ev.idx] = col
            continue
        cands = span.get(wt, [])
        done = False
        for elem, mat in cands:
            ratio = _proportionality(elem, ev.vec, F)
            if ratio is not None:
                acts[ev.idx] = mat_scale(_coerce_mat(mat, F), ratio)
                done = True
                break
        if not done:
            # try a linear combination of the candidates
            combo = _solve_combo(cands, ev.vec, F)
            if combo is None:
                raise InternalCheckError(
                    "could not express a g_0 eigenvector through brackets of "
                    "the simple generators")
            total = {}
            for c, (elem, mat) in zip(combo, cands):
                if c:
                    total = mat_add(total, mat_scale(_coerce_mat(mat, F), c))
            acts[ev.idx] = total
    return acts


def _coerce_mat(mat, F):
    return {c: {r: (F.from_fraction(v) if isinstance(v, (int, Fraction)) else v)
                for r, v in col.items()} for c, col in mat.items()}


def _elem_to_hvec_field(alg, elem, F):
    hvec = [F.zero] * alg.rank
    for idx, c in elem.items():
        if idx < 2 * alg.npos:
            if c:
                raise InternalCheckError("weight-zero eigenvector is not Cartan")
        else:
            hvec[idx - 2 * alg.npos] = c
    return hvec


def _eval_weight_on_h(sigma, wt, hvec_F, F):
    """wt(H) for H in h^tau given by field-valued Cartan coordinates."""
    tau = sigma.tau
    l = tau.folded_rank
    # beta_j(H) = sum_t H_t * cartan[t][rep_j]; then H = sum c_i coroot_i
    # with (folded_cartan^T) c = (beta_j(H))_j, and wt(H) = sum c_i wt_i.
    vals = []
    for j in range(l):
        rep = tau.orbits[j][0]
        v = F.zero
        for t in range(sigma.algebra.rank):
            coef = sigma.algebra.cartan[t][rep]
            if coef:
                v = v + hvec_F[t] * Fraction(coef)
        vals.append(v)
    from .linalg import solve_dense
    mat = [[F.from_fraction(Fraction(tau.folded_cartan[i][j])) for i in range(l)]
           for j in range(l)]
    cs = solve_dense(mat, vals, F)
    out = F.zero
    for i in range(l):
        if cs[i]:
            out = out + cs[i] * Fraction(wt[i])
    return out


def _proportionality(a: dict, b: dict, F):
    """Return r with b = r*a, or None."""
    ratio = None
    for k in set(a) | set(b):
        av = a.get(k, F.zero)
        bv = b.get(k, F.zero)
        av = F.from_fraction(av) if isinstance(av, (int, Fraction)) else av
        bv = F.from_fraction(bv) if isinstance(bv, (int, Fraction)) else bv
        if not av:
            if bv:
                return None
            continue
        r = bv / av
        if ratio is None:
            ratio = r
        elif ratio != r:
            return None
    return ratio


def _solve_combo(cands, target, F):
    if not cands:
        return None
    keys = sorted({k for elem, _ in cands for k in elem} | set(target))
    pos = {k: i for i, k in enumerate(keys)}
    from .linalg import solve_rectangular
    cols = []
    for elem, _ in cands:
        col = {}
        for k, v in elem.items():
            col[pos[k]] = F.from_fraction(v) if isinstance(v, (int, Fraction)) else v
        cols.append(col)
    rhs = {}
    for k, v in target.items():
        rhs[pos[k]] = F.from_fraction(v) if isinstance(v, (int, Fraction)) else v
    try:
        return solve_rectangular(cols, rhs, F)
    except ValueError:
        return None
