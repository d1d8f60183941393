"""Exact scalar arithmetic for loop-weight computations.

Three interchangeable backends:

* generic  -- rational functions in the loop weight d with integer
  coefficients, always kept in lowest terms;
* special  -- the exact real field Q(delta) where delta = 2*cos(pi/(ell+2))
  is the special loop weight at level ell;
* float    -- plain machine floats for cross-checks.

Quantum integers [m] satisfy [0]=0, [1]=1, [m+1] = d[m] - [m-1].
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import PoleAtSpecialValue

# ---------------------------------------------------------------------------
# integer polynomial helpers (little-endian coefficient lists)
# ---------------------------------------------------------------------------


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                  for i in range(n)])


def _psub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
                  for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _pdivmod_q(a, b):
    """Divide with Fraction arithmetic; returns (quotient, remainder)."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = a[:]
    while len(_trim(r)) >= len(b):
        r = _trim(r)
        k = len(r) - len(b)
        coef = r[-1] / b[-1]
        q[k] = coef
        for i in range(len(b)):
            r[k + i] -= coef * b[i]
        r = r[:-1]
    return _trim(q), _trim(r)


def _pcontent(a):
    g = 0
    for x in a:
        g = math.gcd(g, abs(x))
    return g or 1


def _pprimitive(a):
    c = _pcontent(a)
    return [x // c for x in a] if c > 1 else list(a)


def _pprem(a, b):
    """Integer pseudo-remainder of a by b (a scaled by powers of lc(b))."""
    r = _trim(a)
    db, lb = len(b) - 1, b[-1]
    while r and len(r) - 1 >= db:
        k = len(r) - 1 - db
        lead = r[-1]
        r = [lb * c for c in r]
        for i in range(len(b)):
            r[k + i] -= lead * b[i]
        r = _trim(r[:-1])
    return r


def _pgcd(a, b):
    """Primitive gcd of two integer polynomials (positive leading coeff)."""
    a, b = _trim(a), _trim(b)
    if not a:
        g = list(b)
    elif not b:
        g = list(a)
    else:
        x, y = _pprimitive(a), _pprimitive(b)
        if len(y) > len(x):
            x, y = y, x
        while y:
            r = _pprem(x, y)
            x, y = y, _pprimitive(r)
        g = x
    g = _trim(g)
    if g and g[-1] < 0:
        g = [-c for c in g]
    return g or [1]


def _peval_frac(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _peval_float(a, x):
    acc = 0.0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _pstr(a, var="d"):
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(f"{c}")
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            s = "-" if c < 0 else ""
            pw = var if i == 1 else f"{var}^{i}"
            terms.append(f"{s}{mag}{pw}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += t if t.startswith("-") else "+" + t
    return out


# ---------------------------------------------------------------------------
# generic backend: rational functions of the loop weight
# ---------------------------------------------------------------------------


class RationalFunc:
    """Rational function of the loop weight with integer coefficients.

    Kept in lowest terms; the denominator content is 1 and its leading
    coefficient is positive, so representations are canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1,), _normalized=False):
        if isinstance(num, int):
            num = [num] if num else []
        if isinstance(den, int):
            den = [den]
        num, den = _trim(num), _trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _normalized and den != [1]:
            if not num:
                den = [1]
            else:
                g = _pgcd(num, den)
                if len(g) > 1 or g[0] != 1:
                    num, _ = _pdivmod_q(num, g)
                    num = [int(c) for c in num]
                    den, _ = _pdivmod_q(den, g)
                    den = [int(c) for c in den]
                cn, cd = _pcontent(num), _pcontent(den)
                g = math.gcd(cn, cd)
                if g > 1:
                    num = [c // g for c in num]
                    den = [c // g for c in den]
                if den[-1] < 0:
                    num = [-c for c in num]
                    den = [-c for c in den]
        elif den == [1]:
            den = [1]
        self.num = tuple(num)
        self.den = tuple(den)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunc):
            return other
        if isinstance(other, int):
            return RationalFunc(other)
        if isinstance(other, Fraction):
            return RationalFunc([other.numerator], [other.denominator])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == (1,) and o.den == (1,):
            return RationalFunc(_padd(self.num, o.num), [1], _normalized=True)
        return RationalFunc(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)),
            _pmul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc([-c for c in self.num], list(self.den),
                            _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == (1,) and o.den == (1,):
            return RationalFunc(_pmul(self.num, o.num), [1], _normalized=True)
        return RationalFunc(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunc(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def __pow__(self, k):
        out = RationalFunc(1)
        base = self
        if k < 0:
            base, k = RationalFunc(1) / self, -k
        for _ in range(k):
            out = out * base
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        if self.den == (1,):
            return _pstr(self.num)
        return f"({_pstr(self.num)})/({_pstr(self.den)})"

    # -- evaluation ---------------------------------------------------------

    def eval_float(self, d):
        den = _peval_float(self.den, d)
        return _peval_float(self.num, d) / den

    def eval_fraction(self, d):
        den = _peval_frac(self.den, Fraction(d))
        if den == 0:
            raise ZeroDivisionError("pole at the requested rational value")
        return _peval_frac(self.num, Fraction(d)) / den


D_GENERIC = RationalFunc([0, 1])
ONE = RationalFunc(1)
ZERO = RationalFunc(0)


@lru_cache(maxsize=None)
def quantum_int(m):
    """Quantum integer [m] as a polynomial in the loop weight."""
    if m < 0:
        raise ValueError("quantum integer index must be nonnegative")
    if m == 0:
        return ZERO
    if m == 1:
        return ONE
    return D_GENERIC * quantum_int(m - 1) - quantum_int(m - 2)


# ---------------------------------------------------------------------------
# special backend: Q(delta), delta = 2cos(pi/(ell+2))
# ---------------------------------------------------------------------------


def _cyclotomic(n):
    """Integer coefficients of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = _pdivmod_q(poly, _cyclotomic(d))
            assert not r
            poly = [int(c) for c in q]
    return poly


def minimal_polynomial(ell):
    """Minimal polynomial (little-endian, integer, monic) of 2cos(pi/(ell+2))."""
    m = 2 * (ell + 2)
    phi = _cyclotomic(m)
    n = len(phi) - 1  # = euler phi(m), even for m >= 3
    half = n // 2
    # phi is palindromic; rewrite z^(-half) * phi(z) in y = z + 1/z using
    # z^k + z^(-k) = C_k(y), C_0 = 2, C_1 = y, C_k = y C_{k-1} - C_{k-2}.
    cheb = [[2], [0, 1]]
    for _ in range(2, half + 1):
        cheb.append(_psub(_pmul([0, 1], cheb[-1]), cheb[-2]))
    out = [phi[half]]
    for k in range(1, half + 1):
        out = _padd(out, [phi[half + k] * c for c in cheb[k]])
    return out


class SpecialField:
    """The real field Q(delta) for the special loop weight at level ell."""

    _cache = {}

    def __new__(cls, ell):
        if ell in cls._cache:
            return cls._cache[ell]
        self = super().__new__(cls)
        self.ell = ell
        self.minpoly = minimal_polynomial(ell)
        self.degree = len(self.minpoly) - 1
        self.delta_float = 2.0 * math.cos(math.pi / (ell + 2))
        cls._cache[ell] = self
        return self

    def element(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        c = c[:self.degree] + [Fraction(0)] * max(0, self.degree - len(c))
        if len(coeffs) > self.degree:
            c = self._reduce([Fraction(x) for x in coeffs])
        return FieldElement(self, tuple(c))

    def _reduce(self, coeffs):
        c = list(coeffs)
        mp = self.minpoly
        while len(c) > self.degree:
            k = len(c) - 1 - self.degree
            lead = c[-1]
            for i in range(len(mp)):
                c[k + i] -= lead * mp[i]
            c.pop()
        return c + [Fraction(0)] * (self.degree - len(c))

    @property
    def zero(self):
        return self.element([0])

    @property
    def one(self):
        return self.element([1])

    @property
    def delta(self):
        if self.degree == 1:
            # delta is rational (ell = 1: delta = 1)
            return self.element([Fraction(-self.minpoly[0], self.minpoly[1])])
        return self.element([0, 1])

    def quantum_int(self, m):
        a, b = self.zero, self.one  # [0], [1]
        if m == 0:
            return a
        for _ in range(m - 1):
            a, b = b, self.delta * b - a
        return b

    def __repr__(self):
        return f"SpecialField(ell={self.ell})"


class FieldElement:
    """Element of Q(delta) stored on the power basis of delta."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in
                                              zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in
                                              zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = self.field.degree
        if n == 1:
            return FieldElement(self.field,
                                (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return FieldElement(self.field, tuple(self.field._reduce(prod)))

    __rmul__ = __mul__

    def inverse(self):
        if not any(self.coeffs):
            raise ZeroDivisionError("inverse of zero field element")
        # extended Euclid in Q[x] against the minimal polynomial
        mp = [Fraction(c) for c in self.field.minpoly]
        a = _trim(list(self.coeffs))
        r0, r1 = mp, a
        s0, s1 = [], [Fraction(1)]
        while True:
            q, r = _pdivmod_q(r0, r1)
            if not r:
                break
            s = _psub(s0, _pmul(q, s1))
            r0, r1, s0, s1 = r1, r, s1, s
        lead = r1[-1]
        inv = [c / lead for c in s1]
        return FieldElement(self.field, tuple(self.field._reduce(inv)))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k):
        out = self.field.one
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash((id(self.field), self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __float__(self):
        return _peval_float([float(c) for c in self.coeffs],
                            self.field.delta_float)

    def __repr__(self):
        return _pstr([c for c in self.coeffs], var="delta") \
            if self.field.degree > 1 else str(self.coeffs[0])


# ---------------------------------------------------------------------------
# backend bridging
# ---------------------------------------------------------------------------


def specialize(x, ell):
    """Map a generic scalar into Q(delta) at the level-ell special weight.

    Raises PoleAtSpecialValue when the denominator vanishes there.
    """
    field = SpecialField(ell)
    if isinstance(x, (int, Fraction)):
        return field.element([x])
    delta = field.delta
    den = field.zero
    for c in reversed(x.den):
        den = den * delta + field.element([c])
    if not den:
        raise PoleAtSpecialValue(
            f"denominator {_pstr(list(x.den))} vanishes at level {ell}")
    num = field.zero
    for c in reversed(x.num):
        num = num * delta + field.element([c])
    return num * den.inverse()


def to_float(x, d=None):
    """Evaluate any backend scalar as a machine float."""
    if isinstance(x, RationalFunc):
        if d is None:
            raise ValueError("generic scalar needs a numeric loop weight")
        return x.eval_float(d)
    if isinstance(x, FieldElement):
        return float(x)
    if isinstance(x, Fraction):
        return float(x)
    return float(x)


def special_weight(ell):
    """The special loop weight 2cos(pi/(ell+2)) as an exact field element."""
    return SpecialField(ell).delta


def serialize_scalar(x):
    """Canonical string form of an exact scalar."""
    if isinstance(x, Fraction):
        return str(x)
    return repr(x)
