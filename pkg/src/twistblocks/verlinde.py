"""Untwisted Verlinde dimensions by iterated fusion recursion.

Fusion coefficients come from the Kac-Walton alcove folding of classical
tensor product multiplicities (all exact integer arithmetic; no S-matrix
numerics).  Higher genus and more points reduce by

  N_g(lambda_vec) = sum_mu N_{g-1}(lambda_vec, mu, mu*)
  N_0(l1, l2, l3, ..., ls) = sum_mu N_0(l1, l2, mu) N_0(mu*, l3, ..., ls)

with the 3-point base case N_0(a, b, c) = fusion multiplicity, 2-point
delta_{b,a*}, 1-point delta_{a,0}.
"""

from __future__ import annotations

from fractions import Fraction

from .cartan import (RootData, fusion_coefficients, level, level_weights,
                     root_data_of_type)
from .errors import ValidationError


class FusionRing:
    """Level-c fusion data for a simple type, with memoized products."""

    def __init__(self, series: str, rank: int, c: int):
        if c < 1:
            raise ValidationError("level must be a positive integer")
        self.rd = root_data_of_type(series, rank)
        self.c = c
        self.weights = level_weights(self.rd, c)
        self._prod: dict = {}

    def check_weight(self, lam):
        lam = tuple(Fraction(x) for x in lam)
        if not all(x >= 0 and x.denominator == 1 for x in lam):
            raise ValidationError("weight %r is not dominant integral" % (lam,))
        if level(self.rd, lam) > self.c:
            raise ValidationError("weight %r exceeds level %d" % (lam, self.c))
        return lam

    def dual(self, lam):
        return self.rd.dualize(lam)

    def product(self, a, b) -> dict:
        a, b = self.check_weight(a), self.check_weight(b)
        key = (a, b)
        got = self._prod.get(key)
        if got is None:
            got = fusion_coefficients(self.rd, self.c, a, b)
            self._prod[key] = got
        return got

    def three_point(self, a, b, c) -> int:
        """dim of genus-0 blocks with weights (a, b, c)."""
        prod = self.product(a, b)
        return prod.get(self.dual(self.check_weight(c)), 0)


def verlinde_untwisted(series: str, rank: int, c: int, genus: int,
                       weights) -> int:
    """Dimension of the untwisted block space: genus g, marked weights."""
    ring = FusionRing(series, rank, c)
    lams = tuple(ring.check_weight(w) for w in weights)
    memo: dict = {}

    def dim(g, ws):
        ws = tuple(sorted(ws))
        key = (g, ws)
        got = memo.get(key)
        if got is not None:
            return got
        if g > 0:
            total = 0
            for mu in ring.weights:
                total += dim(g - 1, ws + (mu, ring.dual(mu)))
        elif len(ws) == 0:
            total = 1
        elif len(ws) == 1:
            total = 1 if not any(ws[0]) else 0
        elif len(ws) == 2:
            total = 1 if ws[1] == ring.dual(ws[0]) else 0
        elif len(ws) == 3:
            total = ring.three_point(*ws)
        else:
            # V(w1, w2, w3, ...) = sum_nu N_{w1 w2}^nu V(nu, w3, ...)
            total = 0
            for nu, mult in ring.product(ws[0], ws[1]).items():
                total += mult * dim(0, (nu,) + ws[2:])
        memo[key] = total
        return total

    return dim(genus, lams)
