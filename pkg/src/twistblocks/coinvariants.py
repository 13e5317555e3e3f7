"""Brute-force covacua dimensions on cyclic covers of the projective line.

The model: Gamma = Z/N acts on the cover P^1 by z -> zeta z, with quotient
coordinate z^N.  Marked orbits sit at the fixed points 0 and infinity
(full stabilizer) and at free orbits {zeta^i a}.  One fresh free orbit u
carries the level-c vacuum module truncated in degree; every marked orbit
carries the finite-dimensional top V(lambda) of its module.  The algebra of
equivariant g-valued functions regular outside the u-orbit is spanned by

    X = x (x) sum_i zeta^{i(J+k)} (z - zeta^i u)^{-k},   sigma(x) = zeta^J x,

for k >= 1, together with the constants g^sigma (x) 1.  X acts on the
vacuum factor through its Laurent expansion at u and on each V-factor by
its value at the point.  The covacua dimension at stage d is

    dim H_{<= d} - dim( span(images) /\ H_{<= d} ),

computed exactly by echelon elimination ordered to clear the degrees > d
first; the sequence over d is reported with a two-step stabilization flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .curve import BlockProblem, CyclicAction, GammaCurve, LocalType
from .errors import ValidationError
from .field import CycField
from .finite_rep import build_finite_module
from .linalg import Echelon, vec_axpy
from .loop_rep import build_integrable_truncation
from .twist import build_automorphism, trivial_diagram_automorphism


@dataclass
class CoinvariantReport:
    dims: list
    stabilized: bool
    value: int | None
    detail: dict = dc_field(default_factory=dict)

    def __str__(self):
        flag = "stabilized" if self.stabilized else "NOT stabilized"
        return "dims=%s (%s%s)" % (self.dims, flag,
                                   ", value=%d" % self.value
                                   if self.value is not None else "")


@dataclass
class P1Leg:
    position: str     # "zero" | "infty" | "free"
    coord: object     # Fraction for free orbits
    local: LocalType
    weight: tuple


def legs_from_problem(problem: BlockProblem):
    curve = problem.curve
    if len(curve.components) != 1 or curve.nodes:
        raise ValidationError("the brute-force oracle needs a single smooth "
                              "genus-0 component")
    if curve.components[0].genus != 0:
        raise ValidationError("the brute-force oracle needs a genus-0 quotient")
    legs = []
    for mk in curve.components[0].markings:
        legs.append((mk.stab_order, mk.char_exponent, mk.weight))
    return legs


def coinvariants_bruteforce(action: CyclicAction, level: int, legs,
                            d_max: int, pole_extra: int = 2,
                            stop_early: bool = True,
                            free_coords=None) -> CoinvariantReport:
    """Coinvariant dimension ladder for marked legs (e, char_exponent,
    weight) on the rotation model; see the module docstring.

    pole_extra tunes the pole-order cap, poles up to d + c + pole_extra at
    stage d.  Never fabricates an answer: the report carries the
    stabilization flag.
    """
    N = action.N
    F = action.field
    c = level
    full = []
    free = []
    for (e, w, wt) in legs:
        local = action.local_type(e, w)
        if e == 1:
            free.append((w, wt, local))
        elif e == N:
            full.append((w, wt, local))
        else:
            raise ValidationError(
                "oracle model supports stabilizer orders 1 and N only")
    if len(full) not in (0, 2) and N > 1:
        raise ValidationError(
            "a cyclic rotation cover has exactly two fixed points; got %d "
            "full-stabilizer legs" % len(full))

    # place the forward leg at 0, the other at infinity
    zero_leg = infty_leg = None
    if full:
        fwd = [t for t in full if not t[2].reversed_]
        rev = [t for t in full if t[2].reversed_]
        if len(full) == 2 and N == 2:
            zero_leg, infty_leg = full[0], full[1]
        elif len(fwd) == 1 and len(rev) == 1:
            zero_leg, infty_leg = fwd[0], rev[0]
        else:
            raise ValidationError(
                "fixed-point legs must pair a forward and a reversed "
                "realization")
    plan = []
    if zero_leg is not None:
        plan.append(P1Leg("zero", None, zero_leg[2], zero_leg[1]))
    if infty_leg is not None:
        plan.append(P1Leg("infty", None, infty_leg[2], infty_leg[1]))
    coords_used = set()
    next_coord = 1
    for t, (w, wt, local) in enumerate(free):
        if free_coords is not None:
            cc = Fraction(free_coords[t])
            if cc in coords_used or cc == 0:
                raise ValidationError("free orbit coordinates must be "
                                      "distinct and nonzero")
            plan.append(P1Leg("free", cc, local, wt))
            coords_used.add(cc)
            continue
        while Fraction(next_coord) in coords_used:
            next_coord += 1
        plan.append(P1Leg("free", Fraction(next_coord), local, wt))
        coords_used.add(Fraction(next_coord))
        next_coord += 1
    u = Fraction(max([abs(cc) for cc in coords_used] + [Fraction(1)]) + 1)

    # module factors
    sigma_rot = action._build_power(1, N) if N > 1 else action._build_power(0, 1)
    tau_triv = trivial_diagram_automorphism(action.algebra)
    sigma_triv = build_automorphism(action.algebra, tau_triv,
                                    (0,) * action.algebra.rank, 1, field=F)
    vmods = []
    for leg in plan:
        base = sigma_rot if leg.position in ("zero", "infty") else sigma_triv
        vmods.append(build_finite_module(base, leg.weight))

    pole_cap = d_max + c + pole_extra
    window = d_max + pole_cap
    zero_wt = (Fraction(0),) * action.algebra.rank
    vac = build_integrable_truncation(sigma_triv, zero_wt, c, window)

    # basis bookkeeping: (degree, hpos, v-indices...)
    vdims = [m.dim for m in vmods]
    layout = []
    index_of = {}
    for d in range(window + 1):
        layer = []
        for hpos in range(vac.layer_dim(d)):
            stack = [()]
            for nd in vdims:
                stack = [t + (i,) for t in stack for i in range(nd)]
            for t in stack:
                index_of[(d, hpos) + t] = (d, len(layer))
                layer.append((hpos,) + t)
        layout.append(layer)

    def zeta(k):
        return F.zeta((F.M // N) * k) if N > 1 else F.one

    # generator descriptions: (x, J, k) with pole order k and the constants
    gens = []
    for k in range(1, pole_cap + 1):
        for j in range(sigma_rot.m):
            for ev in sigma_rot.eig[j]:
                gens.append((ev.vec, j if N > 1 else 0, k))
    for ev in sigma_rot.eig[0]:
        gens.append((ev.vec, 0, 0))

    # per-generator factor actions
    def hpoint_coeffs(J, k):
        """Laurent coefficients of G at u: {power: coeff}."""
        out = {}
        if k == 0:
            out[0] = F.one
            return out
        out[-k] = F.one
        for i in range(1, N):
            b = u * (1 - zeta(i))
            pref = zeta(i * (J + k))
            binom = Fraction(1)
            # (t + b)^{-k} = sum_p binom(-k, p) b^{-k-p} t^p
            for p in range(0, window + 1):
                if p == 0:
                    coef = Fraction(1)
                else:
                    binom *= Fraction(-(k + p - 1), p)
                    coef = binom
                term = pref * coef * _power(b, -k - p, F)
                cur = out.get(p, F.zero)
                cur = cur + term
                if cur:
                    out[p] = cur
                else:
                    out.pop(p, None)
        return out

    def value_at_zero(J, k):
        if k == 0:
            return F.one
        if J % N != 0:
            return F.zero
        return Fraction(N) * _power(-u, -k, F)

    def value_at_free(a, J, k):
        if k == 0:
            return F.one
        tot = F.zero
        for i in range(N):
            tot = tot + zeta(i * (J + k)) * _power(a - zeta(i) * u, -k, F)
        return tot

    def _power(base, expo, F):
        if isinstance(base, Fraction):
            return F.from_fraction(base ** expo)
        if expo >= 0:
            out = F.one
            for _ in range(expo):
                out = out * base
            return out
        inv = F.one / base
        out = F.one
        for _ in range(-expo):
            out = out * inv
        return out

    images = []   # (top_degree_needed, sparse column over (deg,pos))
    nlegs = len(plan)
    for (x, J, k) in gens:
        coeffs = hpoint_coeffs(J, k)
        vals = []
        for li, leg in enumerate(plan):
            if leg.position == "zero":
                vals.append(value_at_zero(J, k))
            elif leg.position == "infty":
                vals.append(F.one if k == 0 else F.zero)
            else:
                vals.append(value_at_free(leg.coord, J, k))
        vacmats = {}
        for d in range(min(d_max, window) + 1):
            for p, cf in coeffs.items():
                nd = d - p
                if nd < 0 or nd > window:
                    continue
                vacmats.setdefault(d, []).append(
                    (nd, cf, vac.elem_matrix(x, p, d)))
        vacts = [m.act_elem(x) if vals[li] else {}
                 for li, m in enumerate(vmods)]
        for d in range(min(d_max, window) + 1):
            if d + k > window:
                continue
            for t, tup in enumerate(layout[d]):
                hpos = tup[0]
                col: dict = {}
                # vacuum factor
                for (nd, cf, mat) in vacmats.get(d, []):
                    mcol = mat.get(hpos)
                    if mcol:
                        for row, v in mcol.items():
                            kk = index_of[(nd, row) + tup[1:]]
                            cur = col.get(kk, F.zero) + cf * v
                            if cur:
                                col[kk] = cur
                            else:
                                col.pop(kk, None)
                # V factors
                for li in range(nlegs):
                    if not vals[li]:
                        continue
                    mat = vacts[li]
                    mcol = mat.get(tup[1 + li])
                    if mcol:
                        for row, v in mcol.items():
                            ntup = tup[1:1 + li] + (row,) + tup[2 + li:]
                            kk = index_of[(d, hpos) + ntup]
                            cur = col.get(kk, F.zero) + vals[li] * v
                            if cur:
                                col[kk] = cur
                            else:
                                col.pop(kk, None)
                if col:
                    images.append((d, k, col))

    # the ladder
    dims = []
    total_below = 0
    for d in range(d_max + 1):
        cap_d = d + c + pole_extra

        def keyfn(ix, dd=d):
            deg, pos = ix
            return (0 if deg > dd else 1, deg, pos)

        ech = Echelon(key=keyfn)
        for (src_d, k, col) in images:
            if src_d <= d and k <= cap_d:
                ech.add(col)
        inside = sum(1 for piv in ech.pivots if piv[0] <= d)
        hdim = sum(len(layout[t]) for t in range(d + 1))
        dims.append(hdim - inside)
        if stop_early and len(dims) >= 2 and dims[-1] == dims[-2]:
            break
    stabilized = len(dims) >= 2 and dims[-1] == dims[-2]
    return CoinvariantReport(dims=dims, stabilized=stabilized,
                             value=dims[-1] if stabilized else None,
                             detail={"window": window, "pole_cap": pole_cap})


def coinvariants_for_problem(problem: BlockProblem, d_max: int,
                             **kw) -> CoinvariantReport:
    return coinvariants_bruteforce(problem.curve.action, problem.curve.level,
                                   legs_from_problem(problem), d_max, **kw)


def oracle_fill_fusion(action: CyclicAction, level: int, signatures, table,
                       d_max=4, pole_extra: int = 2):
    """Fill missing trinion entries by brute force; untwisted signatures go
    through the fusion oracle, twisted ones through coinvariants.  Entries
    are tagged with their provenance; non-stabilized runs raise.

    d_max may be a single degree or a ladder of degrees tried in order
    until the report stabilizes."""
    from .verlinde import verlinde_untwisted
    ladder = (d_max,) if isinstance(d_max, int) else tuple(d_max)
    reports = {}
    for sig in signatures:
        if table.get(sig) is not None:
            continue
        if all(e == 1 for (e, p, w) in sig):
            val = verlinde_untwisted(action.series, action.rank, level, 0,
                                     [w for (e, p, w) in sig])
            table.set(sig, val, source="verlinde")
            continue
        legs = []
        for (e, p, w) in sig:
            # reconstruct a character exponent from the canonical power
            if e == 1:
                legs.append((1, 0, w))
            else:
                winv = (p // (action.N // e)) % e
                legs.append((e, pow(winv, -1, e), w))
        rep = None
        for dm in ladder:
            rep = coinvariants_bruteforce(action, level, legs, dm,
                                          pole_extra=pole_extra)
            if rep.stabilized:
                break
        reports[sig] = rep
        if not rep.stabilized:
            raise ValidationError(
                "oracle did not stabilize for signature %r: dims %s"
                % (sig, rep.dims))
        table.set(sig, rep.value, source="oracle")
    return table, reports
