"""Exact cyclotomic arithmetic.

All coefficient arithmetic in the package runs over Q(zeta_M) for some fixed
M, with zeta_M the primitive M-th root of unity exp(2*pi*i/M).  Elements are
stored as coordinate vectors in the power basis 1, zeta, ..., zeta^(phi(M)-1)
reduced modulo the M-th cyclotomic polynomial, with Fraction coordinates.
There is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


def _poly_trim(p):
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _poly_mul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(_poly_trim(out))

def _poly_divmod(p, q):
    """Divide polynomials with exact Fraction arithmetic; q must be nonzero."""
    p = list(p)
    q = _poly_trim(tuple(q))
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    out = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    lead = q[-1]
    for k in range(len(p) - len(q), -1, -1):
        coeff = p[k + len(q) - 1] / lead
        if coeff != 0:
            out[k] = coeff
            for j, b in enumerate(q):
                p[k + j] -= coeff * b
    return tuple(_poly_trim(out)), tuple(_poly_trim(p))


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int):
    """Coefficients of the M-th cyclotomic polynomial, constant term first."""
    if M == 1:
        return (Fraction(-1), Fraction(1))
    num = [Fraction(0)] * (M + 1)
    num[0], num[M] = Fraction(-1), Fraction(1)
    den = (Fraction(1),)
    for d in range(1, M):
        if M % d == 0:
            den = _poly_mul(den, cyclotomic_poly(d))
    quo, rem = _poly_divmod(tuple(num), den)
    assert not rem
    return quo


class Cyc:
    """An element of Q(zeta_M), immutable."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.field.M != self.field.M:
                raise TypeError("mixed cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_fraction(Fraction(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyc(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.field._mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self):
        return self.field._inv(self)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coords == o.coords

    def __hash__(self):
        return hash((self.field.M, self.coords))

    def __bool__(self):
        return any(c != 0 for c in self.coords)

    def as_fraction(self) -> Fraction:
        """The element as a rational; raises if it is not rational."""
        if any(c != 0 for c in self.coords[1:]):
            raise ValueError("element is not rational: %r" % (self,))
        return self.coords[0]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                terms.append("%s*z%d^%d" % (c, self.field.M, i))
        return "(" + (" + ".join(terms) if terms else "0") + ")"


class CycField:
    """The field Q(zeta_M).  For M <= 2 plain Fractions are used instead."""

    def __init__(self, M: int):
        if M < 1:
            raise ValueError("M must be >= 1")
        self.M = M
        phi = cyclotomic_poly(M)
        self.degree = len(phi) - 1
        self.phi = phi
        # zeta^k for k in [degree, 2*degree-2] reduced into the power basis
        self._red = []
        if self.degree >= 1:
            base = [-c for c in phi[:-1]]  # zeta^degree
            cur = list(base)
            for _ in range(self.degree - 1):
                self._red.append(tuple(cur))
                nxt = [Fraction(0)] + cur
                carry = nxt.pop()
                if carry != 0:
                    for i in range(self.degree):
                        nxt[i] += carry * base[i]
                cur = nxt
        self.zero = self.from_fraction(Fraction(0))
        self.one = self.from_fraction(Fraction(1))

    @property
    def rational(self) -> bool:
        return self.degree == 1

    def from_fraction(self, q) -> "Cyc | Fraction":
        q = Fraction(q)
        if self.degree == 1:
            return q
        return Cyc(self, (q,) + (Fraction(0),) * (self.degree - 1))

    def zeta(self, k: int = 1):
        """zeta_M^k as a field element."""
        k %= self.M
        if self.degree == 1:
            # M in {1, 2}: zeta is 1 or -1
            return Fraction(1) if (self.M == 1 or k == 0) else Fraction(-1)
        vec = [Fraction(0)] * self.degree
        if k < self.degree:
            vec[k] = Fraction(1)
            return Cyc(self, tuple(vec))
        out = Cyc(self, tuple(vec))
        base = self.zeta(1)
        acc = self.one
        for _ in range(k):
            acc = acc * base
        return acc

    def _mul(self, a: Cyc, b: Cyc) -> Cyc:
        d = self.degree
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a.coords):
            if x == 0:
                continue
            for j, y in enumerate(b.coords):
                if y != 0:
                    conv[i + j] += x * y
        out = conv[:d]
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c != 0:
                red = self._red[k - d]
                for i in range(d):
                    out[i] += c * red[i]
        return Cyc(self, tuple(out))

    def _inv(self, a: Cyc) -> Cyc:
        if not a:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid for gcd(a(x), phi(x)) = 1
        r0, r1 = self.phi, _poly_trim(a.coords)
        s0, s1 = (), (Fraction(1),)
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            qs1 = _poly_mul(q, s1)
            n = max(len(s0), len(qs1))
            s = tuple(_poly_trim([(s0[i] if i < len(s0) else Fraction(0))
                                  - (qs1[i] if i < len(qs1) else Fraction(0))
                                  for i in range(n)]))
            r0, r1, s0, s1 = r1, r, s1, s
        assert r1, "phi is squarefree, gcd must be a unit"
        c = r1[0]
        inv = [x / c for x in s1]
        inv = inv[: self.degree] + [Fraction(0)] * max(0, self.degree - len(inv))
        # reduce in case deg(s1) >= degree (cannot happen for Euclid, but be safe)
        return Cyc(self, tuple(inv[: self.degree]))

    def embed(self, x, sub: "CycField"):
        """Embed an element of a subfield Q(zeta_m), m | M, into this field."""
        if sub.M == self.M:
            return x
        if self.M % sub.M != 0:
            raise ValueError("not a subfield")
        if isinstance(x, (int, Fraction)):
            return self.from_fraction(Fraction(x))
        step = self.M // sub.M
        out = self.zero
        for i, c in enumerate(x.coords):
            if c != 0:
                out = out + self.zeta(step * i) * c
        return out

    def __repr__(self):
        return "CycField(%d)" % self.M

    def __eq__(self, other):
        return isinstance(other, CycField) and other.M == self.M

    def __hash__(self):
        return hash(("CycField", self.M))


QQ = CycField(1)


def as_fraction(x) -> Fraction:
    """Coerce a field element known to be rational into a Fraction."""
    if isinstance(x, Cyc):
        return x.as_fraction()
    return Fraction(x)
