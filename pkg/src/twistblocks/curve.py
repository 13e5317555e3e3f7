"""Combinatorial Gamma-stable pointed nodal covers and the factorization
recursion for twisted block dimensions.

Curves are modeled on the quotient side: components carry the quotient
genus, marked orbits and node orbits carry (stabilizer order, primitive
tangent character exponent), and a cyclic group Gamma = Z/N acts through a
single automorphism descriptor sigma_0 = phi(gamma_0) in (tau, h, m) form.

The canonical generator at an orbit is the stabilizer element acting on the
local parameter by exp(-2 pi i/e) (equivalently by the primitive character
on the tangent line); orbits whose canonical generator is sigma_0^{-1} are
handled through the dual-weight bijection mu -> mu* rather than a separate
realization.  Degenerations are user-declared; the reduction factors nodes
(non-separating first), pads genus-zero components to three marked orbits
by weight-zero propagation, and bottoms out in trinion signatures looked up
in a fusion table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .chevalley import build_simple_algebra
from .errors import MissingDataError, ValidationError
from .field import CycField
from .twist import (FiniteOrderAutomorphism, Weight, automorphism_from_spec,
                    build_automorphism, build_diagram_automorphism,
                    parse_weight, weight_str)


@dataclass(frozen=True)
class LocalType:
    """Local data at an orbit: stabilizer order e and the power of gamma_0
    giving the canonical generator; `reversed_` marks inverse-generator
    realizations, whose weights are dual-transported."""

    e: int
    power: int
    foa: FiniteOrderAutomorphism
    reversed_: bool

    def key(self):
        return (self.e, self.power)

    def enumerate_Dc(self, c):
        if not self.reversed_:
            return self.foa.enumerate_Dc(c)
        return sorted(self.foa.dual_weight(mu) for mu in self.foa.enumerate_Dc(c))

    def in_Dc(self, lam, c):
        if not self.reversed_:
            return self.foa.in_Dc(lam, c)
        return self.foa.in_Dc(self.foa.dual_weight(lam), c)

    def zero_in_Dc(self, c):
        return self.foa.zero_in_Dc(c)

    def dual_weight(self, mu):
        return self.foa.dual_weight(mu)


class CyclicAction:
    """Gamma = Z/N acting on g through sigma_0, with local-type resolution."""

    def __init__(self, series, rank, tau_spec, h_values, m0, N, field=None):
        if N < 1:
            raise ValidationError("group order must be positive")
        if N % m0 != 0:
            raise ValidationError("sigma_0^N must be 1: m must divide N")
        self.series, self.rank = series, rank
        self.N = N
        self.m0 = m0
        self.tau_spec = tau_spec
        self.h_values = tuple(int(v) for v in (h_values or ()))
        self.field = field or CycField(N if N > 1 else 1)
        if self.field.M % N != 0 and N > 1:
            raise ValidationError("field must contain the N-th roots of unity")
        self._locals: dict = {}
        self.algebra = build_simple_algebra(series, rank)
        # resolve tau once
        probe = automorphism_from_spec(series, rank, tau_spec,
                                       self.h_values or None, m0)
        self.tau_perm = probe.tau.perm
        self.h_values = probe.h_values
        self.sigma0 = self._build_power(1, m0) if m0 > 1 else self._build_power(0, 1)

    def _build_power(self, p, m_local):
        """sigma_0^p in normal form at local order m_local."""
        key = (p % self.N if self.N > 1 else 0, m_local)
        got = self._locals.get(key)
        if got is not None:
            return got
        alg = self.algebra
        r0 = 1
        perm = self.tau_perm
        ident = tuple(range(self.rank))
        cur = perm
        while cur != ident:
            cur = tuple(perm[i] for i in cur)
            r0 += 1
        # tau^p
        perm_p = ident
        for _ in range(p % r0):
            perm_p = tuple(perm[i] for i in perm_p)
        tau_p = build_diagram_automorphism(alg, perm_p)
        # eps_{m0}^{ad p h} = eps_{m_local}^{ad (m_local p / m0) h}
        scale_num = m_local * p
        if self.m0 > 1:
            if scale_num % self.m0 != 0:
                raise ValidationError(
                    "power %d of sigma_0 has no order-%d normal form" % (p, m_local))
            hv = tuple((scale_num // self.m0) * a for a in self.h_values)
        else:
            hv = (0,) * tau_p.folded_rank
        if len(hv) != tau_p.folded_rank:
            raise ValidationError("sigma_0 powers change the folded rank; "
                                  "unsupported local type")
        foa = build_automorphism(alg, tau_p, hv, m_local, field=self.field)
        self._locals[key] = foa
        return foa

    def local_type(self, e: int, char_exponent: int) -> LocalType:
        if e < 1 or self.N % e != 0:
            raise ValidationError("stabilizer order %d must divide |Gamma| = %d"
                                  % (e, self.N))
        w = char_exponent % e
        if e == 1:
            return LocalType(1, 0, self._build_power(0, 1), False)
        from math import gcd
        if gcd(w, e) != 1:
            raise ValidationError(
                "character exponent %d is not primitive modulo %d" % (w, e))
        winv = pow(w, -1, e)
        p = (self.N // e) * winv % self.N
        try:
            return LocalType(e, p, self._build_power(p, e), False)
        except ValidationError:
            pass
        q = (self.N - p) % self.N
        try:
            return LocalType(e, p, self._build_power(q, e), True)
        except ValidationError:
            raise ValidationError(
                "local automorphism sigma_0^%d at stabilizer order %d has no "
                "supported normal form" % (p, e))


@dataclass
class Marking:
    stab_order: int
    char_exponent: int
    weight: Weight
    local: LocalType = None


@dataclass
class NodeRec:
    endpoints: tuple           # (component index, component index)
    stab_order: int
    char_exponent: int         # character on the first branch; other is -w
    local_first: LocalType = None
    local_second: LocalType = None


@dataclass
class Component:
    genus: int
    markings: list
    degenerations: list = dc_field(default_factory=list)


@dataclass
class GammaCurve:
    action: CyclicAction
    components: list
    nodes: list
    level: int

    def clone_shallow(self):
        comps = [Component(genus=c.genus, markings=list(c.markings),
                           degenerations=list(c.degenerations))
                 for c in self.components]
        return GammaCurve(action=self.action, components=comps,
                          nodes=list(self.nodes), level=self.level)


def load_curve_json(data) -> GammaCurve:
    """Build and validate a curve from the documented JSON schema."""
    if isinstance(data, str):
        data = json.loads(data)
    alg = data["algebra"]
    grp = data.get("group", {"order": 1})
    phi = data.get("phi", {"tau": "id", "h": None, "m": 1})
    if isinstance(phi, list):
        if len(phi) != 1:
            raise ValidationError("cyclic groups need exactly one phi descriptor")
        phi = phi[0]
    action = CyclicAction(alg["series"], int(alg["rank"]),
                          phi.get("tau", "id"), phi.get("h"),
                          int(phi.get("m", 1)), int(grp["order"]))
    level = int(data["level"])
    if level < 1:
        raise ValidationError("level must be a positive integer")
    comps = []
    for rec in data.get("components", []):
        markings = []
        for mk in rec.get("markings", []):
            wt = mk.get("weight", "")
            if isinstance(wt, str):
                wt = parse_weight(wt)
            else:
                wt = tuple(Fraction(x) for x in wt)
            markings.append(Marking(stab_order=int(mk.get("stab_order", 1)),
                                    char_exponent=int(mk.get("char_exponent", 0)),
                                    weight=wt))
        comps.append(Component(genus=int(rec.get("genus", 0)),
                               markings=markings,
                               degenerations=list(rec.get("degenerations", []))))
    nodes = []
    for rec in data.get("nodes", []):
        ends = tuple(int(x) for x in rec["endpoints"])
        if len(ends) != 2:
            raise ValidationError("node endpoints must name two components")
        other = rec.get("char_exponent_other")
        e = int(rec.get("stab_order", 1))
        w = int(rec.get("char_exponent", 0))
        if other is not None and (int(other) + w) % e != 0:
            raise ValidationError(
                "node branch characters must be mutually inverse")
        nodes.append(NodeRec(endpoints=ends, stab_order=e, char_exponent=w))
    curve = GammaCurve(action=action, components=comps, nodes=nodes, level=level)
    validate_curve(curve)
    return curve


def validate_curve(curve: GammaCurve, require_weights=True) -> dict:
    """Checks every structural invariant; returns genus bookkeeping."""
    N = curve.action.N
    if not curve.components:
        raise ValidationError("curve needs at least one component")
    for ci, comp in enumerate(curve.components):
        if not comp.markings:
            raise ValidationError(
                "component %d has no marked orbit (condition (*))" % ci)
        if comp.genus < 0:
            raise ValidationError("negative genus on component %d" % ci)
        for mk in comp.markings:
            mk.local = curve.action.local_type(mk.stab_order, mk.char_exponent)
            if require_weights and mk.weight is not None:
                if len(mk.weight) != mk.local.foa.folded_rank:
                    raise ValidationError(
                        "weight %s has wrong rank at a marking on component %d"
                        % (weight_str(mk.weight), ci))
                if not mk.local.in_Dc(mk.weight, curve.level):
                    raise ValidationError(
                        "weight %s is not in D_c at its marking (component %d)"
                        % (weight_str(mk.weight), ci))
    for nd in curve.nodes:
        for e in nd.endpoints:
            if e < 0 or e >= len(curve.components):
                raise ValidationError("node endpoint out of range")
        if nd.stab_order > 1 and nd.char_exponent % nd.stab_order == 0:
            raise ValidationError("node character must be primitive")
        nd.local_first = curve.action.local_type(nd.stab_order, nd.char_exponent)
        nd.local_second = curve.action.local_type(
            nd.stab_order, (-nd.char_exponent) % max(nd.stab_order, 1))
    # cyclic monodromy on genus-zero components
    for ci, comp in enumerate(curve.components):
        if comp.genus != 0:
            continue
        tot = 0
        for mk in comp.markings:
            tot += (N // mk.stab_order) * mk.char_exponent
        for nd in curve.nodes:
            if nd.endpoints[0] == ci:
                tot += (N // nd.stab_order) * nd.char_exponent
            if nd.endpoints[1] == ci:
                tot += (N // nd.stab_order) * (-nd.char_exponent)
        if tot % N != 0:
            raise ValidationError(
                "no cyclic cover: monodromy exponents sum to %d mod %d on "
                "component %d" % (tot % N, N, ci))
    # Riemann-Hurwitz bookkeeping: over each quotient component the smooth
    # cover piece has 2g - 2 = |Gamma|(2g_bar - 2) + sum (|Gamma|/e)(e - 1),
    # so its Euler characteristic must be even (else no cover exists).
    chis = []
    for ci, comp in enumerate(curve.components):
        ram = 0
        for mk in comp.markings:
            ram += (N // mk.stab_order) * (mk.stab_order - 1)
        for nd in curve.nodes:
            for ei in nd.endpoints:
                if ei == ci:
                    ram += (N // nd.stab_order) * (nd.stab_order - 1)
        chi_v = N * (2 - 2 * comp.genus) - ram
        if chi_v % 2 != 0:
            raise ValidationError(
                "no cover exists over component %d: Riemann-Hurwitz gives "
                "odd Euler characteristic %d" % (ci, chi_v))
        chis.append(chi_v)
    cover_nodes = sum(N // nd.stab_order for nd in curve.nodes)
    return {"component_euler": chis,
            "smooth_cover_genus": [1 - x // 2 for x in chis],
            "cover_nodes": cover_nodes}


@dataclass
class BlockProblem:
    curve: GammaCurve
    log: list = dc_field(default_factory=list)

    @property
    def level(self):
        return self.curve.level


def leg_key(local: LocalType, weight: Weight):
    return (local.e, local.power, tuple(Fraction(x) for x in weight))


def trinion_signature(legs):
    return tuple(sorted(legs))


@dataclass
class FusionTable:
    entries: dict = dc_field(default_factory=dict)  # signature -> int
    provenance: dict = dc_field(default_factory=dict)

    def set(self, sig, value, source="user"):
        if value < 0:
            raise ValidationError("fusion values must be nonnegative")
        sig = trinion_signature(sig)
        if sig in self.entries and self.entries[sig] != value:
            raise ValidationError("conflicting fusion values for %r" % (sig,))
        self.entries[sig] = int(value)
        self.provenance[sig] = source

    def get(self, sig):
        return self.entries.get(trinion_signature(sig))

    def to_json(self):
        out = []
        for sig, v in sorted(self.entries.items()):
            legs = [{"stab_order": e, "power": p, "weight": weight_str(w)}
                    for (e, p, w) in sig]
            out.append({"legs": legs, "value": v,
                        "provenance": self.provenance.get(sig, "user")})
        return out

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        table = cls()
        for rec in data:
            legs = []
            for leg in rec["legs"]:
                wt = leg.get("weight", "")
                wt = parse_weight(wt) if isinstance(wt, str) else tuple(
                    Fraction(x) for x in wt)
                legs.append((int(leg["stab_order"]), int(leg.get("power", 0)), wt))
            table.set(legs, int(rec["value"]), rec.get("provenance", "user"))
        return table


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------

def propagate(problem: BlockProblem, comp_index: int, stab_order: int = 1,
              char_exponent: int = 0) -> BlockProblem:
    """Insert a weight-zero marked orbit; requires 0 in D_c at the new
    orbit (automatic at unramified orbits)."""
    curve = problem.curve
    local = curve.action.local_type(stab_order, char_exponent)
    if not local.zero_in_Dc(curve.level):
        raise ValidationError(
            "propagation blocked: 0 not in D_c at the new orbit (m=%d does "
            "not divide sbar*c=%d)" % (local.foa.m,
                                       local.foa.sbar_gcd * curve.level))
    new = curve.clone_shallow()
    zero = (Fraction(0),) * local.foa.folded_rank
    new.components[comp_index].markings.append(
        Marking(stab_order=stab_order, char_exponent=char_exponent,
                weight=zero, local=local))
    return BlockProblem(curve=new, log=problem.log + [
        ("propagate", comp_index, stab_order, char_exponent)])


def normalize_at_node(curve: GammaCurve, node_index: int):
    """Replace a node orbit by two marked orbits with inverse characters.
    Returns (new curve, first-marking ref, second-marking ref); weights are
    attached by factorize."""
    nd = curve.nodes[node_index]
    new = curve.clone_shallow()
    del new.nodes[node_index]
    c1, c2 = nd.endpoints
    m1 = Marking(stab_order=nd.stab_order, char_exponent=nd.char_exponent,
                 weight=None, local=nd.local_first)
    m2 = Marking(stab_order=nd.stab_order,
                 char_exponent=(-nd.char_exponent) % max(nd.stab_order, 1),
                 weight=None, local=nd.local_second)
    new.components[c1].markings.append(m1)
    ref1 = (c1, len(new.components[c1].markings) - 1)
    new.components[c2].markings.append(m2)
    ref2 = (c2, len(new.components[c2].markings) - 1)
    return new, ref1, ref2


def _connected_parts(curve: GammaCurve):
    n = len(curve.components)
    adj = {i: set() for i in range(n)}
    for nd in curve.nodes:
        a, b = nd.endpoints
        adj[a].add(b)
        adj[b].add(a)
    seen = set()
    parts = []
    for s in range(n):
        if s in seen:
            continue
        stack, part = [s], []
        seen.add(s)
        while stack:
            x = stack.pop()
            part.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        parts.append(sorted(part))
    return parts


def _restrict(curve: GammaCurve, comp_idxs):
    remap = {ci: t for t, ci in enumerate(comp_idxs)}
    comps = [curve.components[ci] for ci in comp_idxs]
    nodes = [NodeRec(endpoints=(remap[nd.endpoints[0]], remap[nd.endpoints[1]]),
                     stab_order=nd.stab_order, char_exponent=nd.char_exponent,
                     local_first=nd.local_first, local_second=nd.local_second)
             for nd in curve.nodes
             if nd.endpoints[0] in remap and nd.endpoints[1] in remap]
    return GammaCurve(action=curve.action, components=comps, nodes=nodes,
                      level=curve.level)


def factorize(problem: BlockProblem, node_index: int):
    """One factorization step: children (mu, subproblem list) for
    mu in D_c of the second branch; the first branch carries mu*."""
    curve = problem.curve
    nd = curve.nodes[node_index]
    dc2 = nd.local_second.enumerate_Dc(curve.level)
    children = []
    for mu in dc2:
        new, ref1, ref2 = normalize_at_node(curve, node_index)
        mustar = nd.local_second.dual_weight(mu)
        new.components[ref1[0]].markings[ref1[1]] = Marking(
            stab_order=nd.stab_order, char_exponent=nd.char_exponent,
            weight=mustar, local=nd.local_first)
        new.components[ref2[0]].markings[ref2[1]] = Marking(
            stab_order=nd.stab_order,
            char_exponent=(-nd.char_exponent) % max(nd.stab_order, 1),
            weight=mu, local=nd.local_second)
        parts = _connected_parts(new)
        subs = []
        for part in parts:
            subs.append(BlockProblem(
                curve=_restrict(new, part),
                log=problem.log + [("factorize", node_index, weight_str(mu))]))
        children.append((mu, subs))
    return children


def apply_degenerations(problem: BlockProblem) -> BlockProblem:
    """Materialize every user-declared degeneration as an actual node."""
    curve = problem.curve.clone_shallow()
    log = list(problem.log)
    changed = True
    while changed:
        changed = False
        for ci, comp in enumerate(curve.components):
            if not comp.degenerations:
                continue
            rec = comp.degenerations.pop(0)
            kind = rec.get("type", "handle")
            e = int(rec.get("stab_order", 1))
            w = int(rec.get("char_exponent", 0))
            if kind == "handle":
                if comp.genus < 1:
                    raise ValidationError(
                        "handle degeneration on a genus-0 component")
                comp.genus -= 1
                curve.nodes.append(NodeRec(endpoints=(ci, ci), stab_order=e,
                                           char_exponent=w))
                log.append(("degenerate-handle", ci, e, w))
            elif kind == "split":
                first = sorted(int(x) for x in rec["first"])
                if any(t < 0 or t >= len(comp.markings) for t in first):
                    raise ValidationError("split indices out of range")
                keep = [mk for t, mk in enumerate(comp.markings) if t in first]
                move = [mk for t, mk in enumerate(comp.markings)
                        if t not in first]
                g1 = int(rec.get("genus_first", 0))
                newcomp = Component(genus=comp.genus - g1, markings=move,
                                    degenerations=[])
                comp.genus = g1
                comp.markings = keep
                nci = len(curve.components)
                curve.components.append(newcomp)
                # nodes previously attached to ci keep pointing at ci; the
                # declared split only moves markings
                curve.nodes.append(NodeRec(endpoints=(ci, nci), stab_order=e,
                                           char_exponent=w))
                log.append(("degenerate-split", ci, tuple(first), e, w))
            else:
                raise ValidationError("unknown degeneration type %r" % kind)
            changed = True
    prob = BlockProblem(curve=curve, log=log)
    validate_curve(curve, require_weights=False)
    return prob


def _node_order(curve: GammaCurve):
    """Canonical processing order: non-separating nodes first."""
    def separating(ix):
        test = curve.clone_shallow()
        del test.nodes[ix]
        return len(_connected_parts(test)) > len(_connected_parts(curve))
    keys = []
    for ix in range(len(curve.nodes)):
        nd = curve.nodes[ix]
        keys.append((separating(ix), nd.endpoints, nd.stab_order,
                     nd.char_exponent, ix))
    keys.sort()
    return [k[-1] for k in keys]


def reduce_to_trinions(problem: BlockProblem, node_picker=None):
    """Full reduction to a tree with trinion-signature leaves.

    node_picker optionally overrides the canonical move order (it receives
    the problem and returns a node index); used to check order-independence.
    """
    problem = apply_degenerations(problem)
    return _reduce(problem, node_picker)


def _reduce(problem: BlockProblem, node_picker):
    curve = problem.curve
    if curve.nodes:
        ix = node_picker(problem) if node_picker else _node_order(curve)[0]
        nd = curve.nodes[ix]
        children = factorize(problem, ix)
        return {"move": ("factorize", nd.endpoints, nd.stab_order,
                         nd.char_exponent),
                "children": [
                    {"mu": weight_str(mu),
                     "parts": [_reduce(sub, node_picker) for sub in subs]}
                    for (mu, subs) in children]}
    # smooth pieces: every component must be a genus-0 quotient
    assert len(curve.components) >= 1
    if len(curve.components) > 1:
        # disconnected smooth pieces cannot happen: _restrict splits parts
        raise ValidationError("internal: smooth piece is disconnected")
    comp = curve.components[0]
    if comp.genus > 0:
        raise ValidationError(
            "component of genus %d has no declared degeneration; cannot "
            "reduce to trinions" % comp.genus)
    prob = problem
    while len(prob.curve.components[0].markings) < 3:
        prob = propagate(prob, 0, 1, 0)
    comp = prob.curve.components[0]
    if len(comp.markings) > 3:
        # canonical balanced split: peel off the first two marked orbits
        # across a node whose cyclic monodromy balances both sides (such a
        # nodal degeneration always exists for cyclic covers)
        from math import gcd
        N = prob.curve.action.N
        s = sum((N // mk.stab_order) * mk.char_exponent
                for mk in comp.markings[:2]) % N
        g0 = gcd(N, s)
        e = N // g0
        w = ((-s // g0) % e) if e > 1 else 0
        new = prob.curve.clone_shallow()
        c0 = new.components[0]
        keep = c0.markings[:2]
        move = c0.markings[2:]
        c0.markings = keep
        new.components.append(Component(genus=0, markings=move,
                                        degenerations=[]))
        new.nodes.append(NodeRec(endpoints=(0, len(new.components) - 1),
                                 stab_order=e, char_exponent=w))
        validate_curve(new, require_weights=False)
        return _reduce(BlockProblem(curve=new,
                                    log=prob.log + [("auto-split", e, w)]),
                       node_picker)
    legs = [leg_key(mk.local, mk.weight) for mk in comp.markings]
    return {"leaf": trinion_signature(legs), "log": prob.log}


def tree_leaves(tree) -> list:
    if "leaf" in tree:
        return [tree["leaf"]]
    out = []
    for ch in tree["children"]:
        for part in ch["parts"]:
            out.extend(tree_leaves(part))
    return out


def evaluate_tree(tree, table: FusionTable) -> int:
    missing = [sig for sig in tree_leaves(tree) if table.get(sig) is None]
    if missing:
        uniq = sorted(set(missing))
        raise MissingDataError(
            "missing fusion entries for %d signatures" % len(uniq), uniq)
    return _eval(tree, table)


def _eval(tree, table):
    if "leaf" in tree:
        return table.get(tree["leaf"])
    total = 0
    for ch in tree["children"]:
        prod = 1
        for part in ch["parts"]:
            prod *= _eval(part, table)
            if prod == 0:
                break
        total += prod
    return total


def _problem_key(curve: GammaCurve):
    comps = tuple(
        (c.genus, tuple(sorted(leg_key(mk.local, mk.weight)
                               for mk in c.markings)))
        for c in curve.components)
    nodes = tuple(sorted((nd.endpoints, nd.stab_order, nd.char_exponent)
                         for nd in curve.nodes))
    return (curve.level, comps, nodes)


def _auto_split(problem: BlockProblem) -> BlockProblem:
    """Split off the first two marked orbits of a >3-marked genus-0
    component across the balanced cyclic node (deterministic)."""
    from math import gcd
    comp = problem.curve.components[0]
    N = problem.curve.action.N
    s = sum((N // mk.stab_order) * mk.char_exponent
            for mk in comp.markings[:2]) % N
    g0 = gcd(N, s)
    e = N // g0
    w = ((-s // g0) % e) if e > 1 else 0
    new = problem.curve.clone_shallow()
    c0 = new.components[0]
    keep, move = c0.markings[:2], c0.markings[2:]
    c0.markings = keep
    new.components.append(Component(genus=0, markings=move, degenerations=[]))
    nd = NodeRec(endpoints=(0, len(new.components) - 1), stab_order=e,
                 char_exponent=w)
    nd.local_first = new.action.local_type(e, w)
    nd.local_second = new.action.local_type(e, (-w) % max(e, 1))
    new.nodes.append(nd)
    return BlockProblem(curve=new, log=problem.log + [("auto-split", e, w)])


def _walk(problem: BlockProblem, leaf_fn, combine_parts, combine_children,
          memo, node_picker=None):
    """Shared recursion over the factorization moves.

    leaf_fn(signature) -> value; combine_parts(list) folds a disjoint union;
    combine_children(list of (mu, value)) folds the node sum."""
    key = _problem_key(problem.curve)
    if memo is not None and key in memo:
        return memo[key]
    curve = problem.curve
    if curve.nodes:
        ix = node_picker(problem) if node_picker else _node_order(curve)[0]
        vals = []
        for mu, subs in factorize(problem, ix):
            parts = [_walk(sub, leaf_fn, combine_parts, combine_children,
                           memo, node_picker) for sub in subs]
            vals.append((mu, combine_parts(parts)))
        out = combine_children(vals)
    else:
        comp = curve.components[0]
        if comp.genus > 0:
            raise ValidationError(
                "component of genus %d has no declared degeneration; cannot "
                "reduce to trinions" % comp.genus)
        prob = problem
        while len(prob.curve.components[0].markings) < 3:
            prob = propagate(prob, 0, 1, 0)
        if len(prob.curve.components[0].markings) > 3:
            out = _walk(_auto_split(prob), leaf_fn, combine_parts,
                        combine_children, memo, node_picker)
        else:
            comp = prob.curve.components[0]
            out = leaf_fn(trinion_signature(
                [leg_key(mk.local, mk.weight) for mk in comp.markings]))
    if memo is not None:
        memo[key] = out
    return out


def collect_leaf_signatures(problem: BlockProblem) -> set:
    problem = apply_degenerations(problem)
    sigs = set()

    def leaf(sig):
        sigs.add(sig)
        return 0

    _walk(problem, leaf, lambda parts: 0, lambda vals: 0, memo={})
    return sigs


def dimension(problem: BlockProblem, table: FusionTable,
              node_picker=None) -> int:
    """Block dimension by the factorization recursion.

    Subproblems repeat across the summation branches, so the evaluation is
    memoized on a canonical problem key; a custom node_picker disables the
    memo (used to check order independence)."""
    problem = apply_degenerations(problem)
    missing = set()

    def leaf(sig):
        v = table.get(sig)
        if v is None:
            missing.add(sig)
            return 0
        return v

    def parts(vals):
        p = 1
        for v in vals:
            p *= v
        return p

    def children(vals):
        return sum(v for (_, v) in vals)

    memo = {} if node_picker is None else None
    out = _walk(problem, leaf, parts, children, memo, node_picker)
    if missing:
        raise MissingDataError("missing fusion entries for %d signatures"
                               % len(missing), sorted(missing))
    return out


def fill_with_verlinde(signatures, table: FusionTable, action: CyclicAction,
                       level: int):
    """Fill missing trinion values whose legs are all unramified with the
    untwisted fusion numbers.  (A cover with trivial stabilizers restricts
    to a disjoint union of |Gamma| copies permuted simply transitively;
    equivariant functions are the functions on one copy, so the block equals
    the untwisted one.)"""
    from .verlinde import verlinde_untwisted
    if isinstance(signatures, dict) and "leaf" in signatures or (
            isinstance(signatures, dict) and "children" in signatures):
        signatures = tree_leaves(signatures)
    for sig in signatures:
        if table.get(sig) is not None:
            continue
        if all(e == 1 for (e, p, w) in sig):
            val = verlinde_untwisted(action.series, action.rank, level,
                                     0, [w for (e, p, w) in sig])
            table.set(sig, val, source="verlinde")
    return table
