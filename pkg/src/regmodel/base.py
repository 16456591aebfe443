"""Exact arithmetic: extended rationals, p-adic valuations, dense polynomials
over an arbitrary field, finite fields with factorization, rational function
fields and a single algebraic layer on top of them.

Every field handle exposes ``zero``, ``one``, ``__call__`` (coercion),
``extension(psi)`` and ``char``.  Elements overload the arithmetic operators,
so the polynomial class below is generic over all of them.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from functools import lru_cache
from math import gcd as igcd

from sympy import factorint, isprime


class TowerTooDeep(ValueError):
    """Raised when a residue field would need a second algebraic layer."""


# ---------------------------------------------------------------------------
# Extended rationals


class Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign):
        self.sign = sign

    def __repr__(self):
        return "INF" if self.sign > 0 else "NEG_INF"

    def __str__(self):
        return "inf" if self.sign > 0 else "-inf"

    def __hash__(self):
        return hash(("inf", self.sign))

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.sign == self.sign

    def __neg__(self):
        return NEG_INF if self.sign > 0 else INF

    def __add__(self, other):
        if isinstance(other, Infinity) and other.sign != self.sign:
            raise ArithmeticError("inf + (-inf) is undefined")
        return self

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Infinity):
            return INF if other.sign == self.sign else NEG_INF
        if other == 0:
            raise ArithmeticError("0 * inf is undefined")
        return self if other > 0 else -self

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Infinity):
            raise ArithmeticError("inf / inf is undefined")
        return self * (1 if other > 0 else -1)

    def _cmp(self, other):
        if isinstance(other, Infinity):
            return (self.sign > other.sign) - (self.sign < other.sign)
        return self.sign

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0


INF = Infinity(1)
NEG_INF = Infinity(-1)


def is_inf(a):
    return isinstance(a, Infinity)


def ext(a):
    """Coerce to an extended rational: Fraction, INF or NEG_INF."""
    if isinstance(a, Infinity):
        return a
    if isinstance(a, str):
        s = a.strip()
        if s in ("inf", "+inf", "oo"):
            return INF
        if s == "-inf":
            return NEG_INF
        return Fraction(s)
    return Fraction(a)


def fmt_q(a):
    """Rationals as "a/b" strings, infinity as "inf"."""
    if isinstance(a, Infinity):
        return str(a)
    a = Fraction(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def ceil_q(a):
    a = Fraction(a)
    return -((-a.numerator) // a.denominator)


def floor_q(a):
    a = Fraction(a)
    return a.numerator // a.denominator


# ---------------------------------------------------------------------------
# p-adic valuation on Q


def _vint(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valp(q, p):
    """Exponent of p in the rational q; valp(0) is +inf."""
    q = Fraction(q)
    if q == 0:
        return INF
    return Fraction(_vint(q.numerator, p) - _vint(q.denominator, p))


def unit_part(q, p):
    """q / p^valp(q)."""
    q = Fraction(q)
    k = int(valp(q, p))
    return q / Fraction(p) ** k


# ---------------------------------------------------------------------------
# Generic dense polynomials


class Poly:
    """Dense univariate polynomial over a field handle.  Immutable."""

    __slots__ = ("field", "c", "_hash")

    def __init__(self, field, coeffs=()):
        coeffs = [field(a) for a in coeffs]
        zero = field.zero
        while coeffs and coeffs[-1] == zero:
            coeffs.pop()
        self.field = field
        self.c = tuple(coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, field, coeffs):
        # coeffs already trimmed and coerced
        obj = object.__new__(cls)
        obj.field = field
        obj.c = tuple(coeffs)
        obj._hash = None
        return obj

    @classmethod
    def _trim(cls, field, coeffs):
        zero = field.zero
        n = len(coeffs)
        while n and coeffs[n - 1] == zero:
            n -= 1
        return cls._raw(field, coeffs[:n])

    @classmethod
    def x(cls, field):
        return cls._raw(field, (field.zero, field.one))

    @classmethod
    def const(cls, field, a):
        a = field(a)
        return cls._raw(field, () if a == field.zero else (a,))

    @classmethod
    def monomial(cls, field, deg, a=None):
        a = field.one if a is None else field(a)
        return cls._raw(field, (field.zero,) * deg + (a,))

    # -- basic accessors
    @property
    def degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def deg(self):
        """Degree with -1 for the zero polynomial (handy in loops)."""
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lc(self):
        return self.c[-1] if self.c else self.field.zero

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.field.zero

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def is_monic(self):
        return bool(self.c) and self.c[-1] == self.field.one

    def is_const(self):
        return len(self.c) <= 1

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        try:
            return self.c == Poly.const(self.field, other).c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.c)
        return self._hash

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.const(self.field, other)

    # -- ring operations
    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, bi in enumerate(b):
            out[i] = out[i] + bi
        return Poly._trim(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            a = self.field(other)
            if a == self.field.zero:
                return Poly._raw(self.field, ())
            return Poly._raw(self.field, [x * a for x in self.c])
        if not self.c or not other.c:
            return Poly._raw(self.field, ())
        zero = self.field.zero
        out = [zero] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == zero:
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly._trim(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, a):
        return self * a

    def __divmod__(self, other):
        other = self._coerce(other)
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        dq = len(rem) - len(other.c)
        if dq < 0:
            return Poly._raw(self.field, ()), self
        inv = self.field.one / other.c[-1]
        q = [self.field.zero] * (dq + 1)
        m = len(other.c) - 1
        for k in range(dq, -1, -1):
            coef = rem[k + m] * inv
            q[k] = coef
            if coef != self.field.zero:
                for j, b in enumerate(other.c):
                    rem[k + j] = rem[k + j] - coef * b
        return Poly._trim(self.field, q), Poly._trim(self.field, rem[:m])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r.c:
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self):
        if not self.c:
            return self
        inv = self.field.one / self.c[-1]
        return Poly._raw(self.field, [a * inv for a in self.c])

    def derivative(self):
        return Poly._trim(self.field, [a * i for i, a in enumerate(self.c)][1:])

    def __call__(self, x):
        """Horner evaluation; x may be anything that mixes with coefficients."""
        acc = None
        for a in reversed(self.c):
            acc = a if acc is None else acc * x + a
        if acc is None:
            return self.field.zero if not isinstance(x, Poly) else Poly._raw(x.field, ())
        return acc

    def compose(self, g):
        acc = Poly._raw(g.field, ())
        for a in reversed(self.c):
            acc = acc * g + a
        return acc

    def map_coeffs(self, fn, field):
        return Poly(field, [fn(a) for a in self.c])

    def pow_mod(self, e, m):
        result = Poly.const(self.field, 1)
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result

    def shift_up(self, k):
        """Multiply by X^k."""
        if not self.c:
            return self
        return Poly._raw(self.field, (self.field.zero,) * k + self.c)

    # -- printing
    def to_str(self, var="x"):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == self.field.zero:
                continue
            s = self.field.elt_str(a)
            neg = s.startswith("-") and not _needs_parens(s[1:])
            if neg:
                s = s[1:]
            if i == 0:
                body = s
            else:
                mono = var if i == 1 else f"{var}^{i}"
                if s == "1":
                    body = mono
                elif _needs_parens(s):
                    body = f"({s})*{mono}"
                else:
                    body = f"{s}*{mono}"
            terms.append(("-" if neg else "+", body))
        out = terms[0][1] if terms[0][0] == "+" else "-" + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str("x")

    def __repr__(self):
        return f"Poly({self.to_str('x')})"


def _needs_parens(s):
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > 0:
            return True
    return False


def poly_gcd(a, b):
    """Monic gcd."""
    while b.c:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a, b):
    """Returns (g, s, t) with s*a + t*b = g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.const(F, 1), Poly._raw(F, ())
    t0, t1 = Poly._raw(F, ()), Poly.const(F, 1)
    while r1.c:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.c:
        return r0, s0, t0
    inv = F.one / r0.lc()
    return r0 * inv, s0 * inv, t0 * inv


def inverse_mod(a, m):
    g, s, _ = poly_xgcd(a % m, m)
    if g.deg() != 0:
        raise ZeroDivisionError("not invertible modulo the given polynomial")
    return s % m


def resultant(f, g):
    """Resultant of two polynomials over a field (Euclidean recursion)."""
    F = f.field
    if not f.c or not g.c:
        return F.zero
    df, dg = f.deg(), g.deg()
    if dg == 0:
        return g.c[0] ** df
    if df == 0:
        return f.c[0] ** dg
    r = f % g
    if not r.c:
        return F.zero
    sign = -F.one if (df * dg) % 2 else F.one
    return sign * g.lc() ** (df - r.deg()) * resultant(g, r)


def is_squarefree(f):
    return poly_gcd(f, f.derivative()).deg() == 0


# ---------------------------------------------------------------------------
# The rational field


class RationalField:
    """Q with Fraction elements."""

    char = 0
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, (int, str)):
            return Fraction(a)
        raise TypeError(f"cannot coerce {a!r} into Q")

    def elt_str(self, a):
        return fmt_q(a)

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def qpoly(coeffs):
    """Polynomial over Q from low-to-high coefficients."""
    return Poly(QQ, coeffs)


QX = Poly.x(QQ)


def qpoly_content_primitive(f):
    """Split f over Q as content * primitive integer polynomial (positive leading)."""
    if not f.c:
        return Fraction(0), f
    den = 1
    for a in f.c:
        den = den * a.denominator // igcd(den, a.denominator)
    ints = [int(a * den) for a in f.c]
    g = 0
    for a in ints:
        g = igcd(g, a)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), Poly(QQ, [Fraction(a, g) for a in ints])


# ---------------------------------------------------------------------------
# Finite fields


def _seeded_rng(*parts):
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def _fp_poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mulmod(a, b, m, p):
    # a, b reduced lists; m monic list
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _fp_reduce(out, m, p)


def _fp_reduce(out, m, p):
    d = len(m) - 1
    for k in range(len(out) - 1, d - 1, -1):
        c = out[k] % p
        if c:
            base = k - d
            for j in range(d):
                out[base + j] -= c * m[j]
        out[k] = 0
    return _fp_poly_trim([x % p for x in out[:d]])


def _fp_inv_poly(a, m, p):
    # inverse of a modulo the irreducible m over F_p
    r0, r1 = list(m), list(a)
    s0, s1 = [], [1]
    while r1:
        # r0 = q*r1 + r
        q = []
        r = list(r0)
        inv = pow(r1[-1], p - 2, p)
        while len(r) >= len(r1) and r:
            c = r[-1] * inv % p
            shift = len(r) - len(r1)
            q_len = shift + 1
            if len(q) < q_len:
                q += [0] * (q_len - len(q))
            q[shift] = c
            for j, y in enumerate(r1):
                r[shift + j] = (r[shift + j] - c * y) % p
            _fp_poly_trim(r)
        qs = [0] * (len(q) + len(s1))
        for i, x in enumerate(q):
            for j, y in enumerate(s1):
                qs[i + j] += x * y
        ns = [0] * max(len(s0), len(qs))
        for i, x in enumerate(s0):
            ns[i] += x
        for i, x in enumerate(qs):
            ns[i] -= x
        s0, s1 = s1, _fp_poly_trim([x % p for x in ns])
        r0, r1 = r1, r
    # r0 is a nonzero constant
    c = pow(r0[0], p - 2, p)
    return _fp_poly_trim([x * c % p for x in s0])


class FFElem:
    __slots__ = ("F", "v")

    def __init__(self, F, v):
        self.F = F
        self.v = v  # tuple of ints, length <= d, trimmed

    def __eq__(self, other):
        if isinstance(other, FFElem):
            return self.v == other.v and self.F.p == other.F.p
        if isinstance(other, int):
            return self.v == self.F(other).v
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def _co(self, other):
        if isinstance(other, FFElem):
            return other
        return self.F(other)

    def __add__(self, other):
        other = self._co(other)
        p = self.F.p
        a, b = self.v, other.v
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = (out[i] + y) % p
        return FFElem(self.F, tuple(_fp_poly_trim(out)))

    __radd__ = __add__

    def __neg__(self):
        p = self.F.p
        return FFElem(self.F, tuple((-x) % p for x in self.v))

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        other = self._co(other)
        F = self.F
        return FFElem(F, tuple(_fp_mulmod(list(self.v), list(other.v), F.modulus, F.p)))

    __rmul__ = __mul__

    def inverse(self):
        if not self.v:
            raise ZeroDivisionError("inverse of zero in a finite field")
        F = self.F
        if F.d == 1:
            return FFElem(F, (pow(self.v[0], F.p - 2, F.p),))
        return FFElem(F, tuple(_fp_inv_poly(list(self.v), F.modulus, F.p)))

    def __truediv__(self, other):
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.F.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self):
        return not self.v

    def coords(self):
        return tuple(self.v) + (0,) * (self.F.d - len(self.v))

    def sort_key(self):
        return tuple(reversed(self.coords()))

    def __repr__(self):
        return self.F.elt_str(self)


class FiniteField:
    """F_{p^d} = F_p[s]/(modulus), modulus monic irreducible (checked)."""

    def __init__(self, p, modulus=None, check=True):
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        if modulus is None:
            modulus = (0, 1)
        modulus = tuple(int(a) % p for a in modulus)
        if not modulus or modulus[-1] != 1:
            raise ValueError("modulus must be monic")
        self.p = p
        self.modulus = list(modulus)
        self.d = len(modulus) - 1
        self.q = p**self.d
        self.char = p
        self.zero = FFElem(self, ())
        self.one = FFElem(self, (1,)) if self.d >= 1 else None
        if self.d < 1:
            raise ValueError("modulus must have positive degree")
        if check and self.d > 1 and not _fp_is_irreducible(self.modulus, p):
            raise ValueError("modulus is not irreducible")

    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, tuple(self.modulus)))

    def __repr__(self):
        if self.d == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.d})"

    def __call__(self, a):
        if isinstance(a, FFElem):
            if a.F == self:
                return a
            if a.F.p == self.p and len(a.v) <= 1:
                return FFElem(self, a.v)
            raise TypeError("element of a different finite field")
        if isinstance(a, Fraction):
            if a.denominator % self.p == 0:
                raise ZeroDivisionError("denominator divisible by p")
            a = a.numerator * pow(a.denominator, self.p - 2, self.p)
        if isinstance(a, int):
            a %= self.p
            return FFElem(self, (a,) if a else ())
        if isinstance(a, (tuple, list)):
            v = [int(x) % self.p for x in a]
            v = _fp_reduce(v, self.modulus, self.p) if len(v) > self.d else _fp_poly_trim(v)
            return FFElem(self, tuple(v))
        raise TypeError(f"cannot coerce {a!r} into {self!r}")

    def gen(self):
        return self((0, 1)) if self.d > 1 else self(-self.modulus[0])

    def elt_str(self, a):
        if self.d == 1:
            return str(a.v[0]) if a.v else "0"
        if not a.v:
            return "0"
        parts = []
        for i in range(len(a.v) - 1, -1, -1):
            c = a.v[i]
            if not c:
                continue
            mono = "" if i == 0 else ("s" if i == 1 else f"s^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        s = " + ".join(parts)
        return f"({s})" if len(parts) > 1 else s

    def elements(self):
        from itertools import product

        for v in product(range(self.p), repeat=self.d):
            yield self(list(v))

    def random_element(self, rng):
        return self([rng.randrange(self.p) for _ in range(self.d)])

    def from_coords(self, coords):
        return self(list(coords))

    def frobenius_power(self, a, k):
        return a ** (self.p**k)

    def sqrt_p(self, a):
        """The unique p-th root of a."""
        return a ** (self.q // self.p)

    def extension(self, psi):
        return finite_extension(self, psi)

    def poly(self, coeffs):
        return Poly(self, coeffs)


def _fp_is_irreducible(m, p):
    """Rabin test for a monic polynomial over F_p (list low-to-high)."""
    n = len(m) - 1
    if n <= 1:
        return n == 1
    F = FiniteField(p)
    f = Poly(F, m)
    return _is_irreducible(f)


def gf(p, d=1):
    """F_{p^d} with the lexicographically least monic irreducible modulus."""
    return FiniteField(p, _least_irreducible(p, d), check=False)


@lru_cache(maxsize=None)
def _least_irreducible(p, d):
    if d == 1:
        return (0, 1)
    from itertools import product

    F = FiniteField(p)
    for tail in product(range(p), repeat=d):
        coeffs = tuple(reversed(tail)) + (1,)
        if coeffs[0] == 0:
            continue
        if _is_irreducible(Poly(F, coeffs)):
            return coeffs
    raise AssertionError("no irreducible polynomial found")


def _xq_powers(f, q):
    x = Poly.x(f.field)
    return x.pow_mod(q, f)


def _is_irreducible(f):
    """Rabin irreducibility test over a finite field."""
    F = f.field
    n = f.deg()
    if n <= 0:
        return False
    if n == 1:
        return True
    f = f.monic()
    q = F.q
    x = Poly.x(F)
    # x^(q^k) mod f for each k needed
    primes = list(factorint(n))
    h = x
    powers = {}
    for k in range(1, n + 1):
        h = h.pow_mod(q, f)
        powers[k] = h
    if powers[n] != x % f:
        return False
    for r in primes:
        k = n // r
        if poly_gcd(f, powers[k] - x).deg() != 0:
            return False
    return True


def is_irreducible(f):
    """Irreducibility test for polynomials over finite fields, rational
    function fields (binomials and linear only) and Q (via sympy)."""
    F = f.field
    if isinstance(F, FiniteField):
        return _is_irreducible(f)
    if f.deg() == 1:
        return True
    return len(factor(f)) == 1 and factor(f)[0][1] == 1


def _sqf_decomposition(f):
    """Squarefree decomposition over a finite field: list of (g, mult)."""
    F = f.field
    p = F.p
    out = []
    f = f.monic()

    def rec(f, mult):
        if f.deg() <= 0:
            return
        df = f.derivative()
        if df.is_zero():
            # f = g(x^p), take p-th roots of coefficients
            g = Poly(F, [F.sqrt_p(f.c[i]) for i in range(0, len(f.c), p)])
            rec(g, mult * p)
            return
        c = poly_gcd(f, df)
        w = f.exact_div(c)
        i = 1
        while w.deg() > 0:
            y = poly_gcd(w, c)
            z = w.exact_div(y)
            if z.deg() > 0:
                out.append((z.monic(), i * mult))
            i += 1
            w = y
            c = c.exact_div(y)
        if c.deg() > 0:
            g = Poly(F, [F.sqrt_p(c.c[i]) for i in range(0, len(c.c), p)])
            rec(g, mult * p)

    rec(f, 1)
    return out


def _ddf(f):
    """Distinct-degree factorization of a monic squarefree polynomial."""
    F = f.field
    x = Poly.x(F)
    out = []
    h = x
    i = 0
    while f.deg() >= 2 * (i + 1):
        i += 1
        h = h.pow_mod(F.q, f)
        g = poly_gcd(f, h - x)
        if g.deg() > 0:
            out.append((g, i))
            f = f.exact_div(g)
            h = h % f
    if f.deg() > 0:
        out.append((f, f.deg()))
    return out


def _edf(f, d, rng):
    """Equal-degree splitting (Cantor-Zassenhaus); returns monic factors."""
    F = f.field
    n = f.deg()
    if n == d:
        return [f.monic()]
    q = F.q
    while True:
        a = Poly(F, [F.random_element(rng) for _ in range(n)])
        if a.deg() <= 0:
            continue
        if F.p == 2:
            # trace map from F_{q^d} down to F_2
            k = F.d * d
            t = a % f
            s = t
            for _ in range(k - 1):
                t = (t * t) % f
                s = s + t
            g = poly_gcd(f, s)
        else:
            g = poly_gcd(f, a.pow_mod((q**d - 1) // 2, f) - 1)
        if 0 < g.deg() < n:
            return _edf(g, d, rng) + _edf(f.exact_div(g), d, rng)


def _poly_key(f):
    return tuple(tuple(reversed(a.coords())) for a in reversed(f.c))


def ff_factor(g):
    """Factor a nonzero polynomial over a finite field into monic irreducibles.

    Returns a list of (factor, multiplicity) sorted by degree then
    coefficients.  Randomness in the splitting step is seeded from the input.
    """
    if g.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    F = g.field
    rng = _seeded_rng(F.p, tuple(F.modulus), tuple(a.v for a in g.c))
    result = []
    for h, mult in _sqf_decomposition(g):
        for part, d in _ddf(h):
            for fac in _edf(part, d, rng):
                result.append((fac, mult))
    merged = {}
    for fac, m in result:
        merged[fac] = merged.get(fac, 0) + m
    return sorted(merged.items(), key=lambda fm: (fm[0].deg(), _poly_key(fm[0])))


def ff_roots(g):
    return sorted(
        (-fac.c[0] for fac, _ in ff_factor(g) if fac.deg() == 1),
        key=lambda a: a.sort_key(),
    )


class FieldEmbedding:
    """An embedding k -> K of fields, with K = k(rho).

    ``decompose(c)`` writes c in K as a polynomial in rho with coefficients
    in k, of degree below [K:k].
    """

    def __init__(self, source, target, image_fn, rho, degree, decompose_fn):
        self.source = source
        self.target = target
        self._image = image_fn
        self.rho = rho
        self.degree = degree
        self._decompose = decompose_fn

    def __call__(self, a):
        return self._image(a)

    def decompose(self, c):
        return self._decompose(self.target(c))

    def poly_image(self, f):
        return Poly(self.target, [self(a) for a in f.c])


def identity_extension(field, root):
    return FieldEmbedding(field, field, lambda a: field(a), root, 1, lambda c: [c])


def _fp_solve_square(cols, p):
    """Inverse of the square matrix whose columns are given, over F_p."""
    n = len(cols)
    rows = [[cols[j][i] % p for j in range(n)] + [1 if k == i else 0 for k in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if rows[r][c])
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = pow(rows[c][c], p - 2, p)
        rows[c] = [x * inv % p for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[c])]
    return [row[n:] for row in rows]


@lru_cache(maxsize=None)
def finite_extension(k, psi):
    """Adjoin a root of the monic irreducible psi (over the finite field k).

    The result is a flat field F_p[s]/(H) with H the least irreducible of the
    total degree; returns a FieldEmbedding from k.
    """
    psi = psi.monic()
    f = psi.deg()
    if f == 1:
        return identity_extension(k, -psi.c[0])
    D = k.d * f
    K = FiniteField(k.p, _least_irreducible(k.p, D), check=False)
    # embed k via a root of its modulus
    if k.d == 1:
        beta = None
    else:
        beta = ff_roots(Poly(K, k.modulus))[0]

    def image(a, K=K, beta=beta):
        a = k(a)
        if beta is None:
            return K(a.v[0] if a.v else 0)
        acc = K.zero
        for c in reversed(a.coords()):
            acc = acc * beta + c
        return acc

    psi_K = Poly(K, [image(a) for a in psi.c])
    rho = ff_roots(psi_K)[0]
    # basis image(s^a) * rho^j, column-major by j then a
    cols = []
    basis_k = [k((0,) * a + (1,)) for a in range(k.d)]
    rho_pows = [K.one]
    for _ in range(1, f):
        rho_pows.append(rho_pows[-1] * rho)
    for j in range(f):
        for b in basis_k:
            cols.append(list((image(b) * rho_pows[j]).coords()))
    inv = _fp_solve_square(cols, k.p)

    def decompose(c, inv=inv):
        coords = c.coords()
        sol = [sum(inv[i][j] * coords[j] for j in range(D)) % k.p for i in range(D)]
        return [k(sol[j * k.d:(j + 1) * k.d]) for j in range(f)]

    return FieldEmbedding(k, K, image, rho, f, decompose)


# ---------------------------------------------------------------------------
# Rational function fields and one algebraic layer


class RatFunc:
    __slots__ = ("F", "num", "den")

    def __init__(self, F, num, den):
        self.F = F
        self.num = num
        self.den = den

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        try:
            o = self.F(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _co(self, other):
        return other if isinstance(other, RatFunc) and other.F == self.F else self.F(other)

    def __add__(self, other):
        if isinstance(other, (Poly, AlgElem)):
            return NotImplemented
        o = self._co(other)
        if self.den == o.den:
            return self.F.make(self.num + o.num, self.den)
        return self.F.make(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.F, -self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, (Poly, AlgElem)):
            return NotImplemented
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def __mul__(self, other):
        if isinstance(other, (Poly, AlgElem)):
            return NotImplemented
        o = self._co(other)
        return self.F.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return self.F.make(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, (Poly, AlgElem)):
            return NotImplemented
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.F, self.num**e, self.den**e)

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.deg() == 0

    def __call__(self, a):
        return self.num(a) / self.den(a)

    def __repr__(self):
        return self.F.elt_str(self)


class RatFuncField:
    """k(t) for a field handle k.  Elements are reduced num/den, den monic."""

    def __init__(self, k, var="t"):
        self.k = k
        self.var = var
        self.char = k.char
        self.zero = RatFunc(self, Poly(k, ()), Poly.const(k, 1))
        self.one = RatFunc(self, Poly.const(k, 1), Poly.const(k, 1))

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and self.k == other.k and self.var == other.var

    def __hash__(self):
        return hash(("RatFuncField", self.k, self.var))

    def __repr__(self):
        return f"{self.k!r}({self.var})"

    def make(self, num, den):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return self.zero
        g = poly_gcd(num, den)
        if g.deg() > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.lc()
        if lc != self.k.one:
            inv = self.k.one / lc
            num = num * inv
            den = den * inv
        return RatFunc(self, num, den)

    def __call__(self, a):
        if isinstance(a, RatFunc):
            if a.F == self:
                return a
            raise TypeError("rational function over a different field")
        if isinstance(a, Poly):
            return self.make(Poly(self.k, a.c), Poly.const(self.k, 1))
        return self.make(Poly.const(self.k, a), Poly.const(self.k, 1))

    def gen(self):
        return self.make(Poly.x(self.k), Poly.const(self.k, 1))

    def const(self, a):
        return self(self.k(a))

    def elt_str(self, a):
        n = a.num.to_str(self.var)
        if a.den.deg() == 0:
            return n
        d = a.den.to_str(self.var)
        if _needs_parens(n) or n.startswith("-"):
            n = f"({n})"
        if _needs_parens(d) or "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def extension(self, psi):
        psi = psi.monic()
        if psi.deg() == 1:
            return identity_extension(self, -psi.c[0])
        E = AlgExtField(self, psi)
        return FieldEmbedding(
            self, E, lambda a: E.from_base(a), E.gen(), psi.deg(), lambda c: list(c.c) + [self.zero] * (psi.deg() - len(c.c))
        )


class AlgElem:
    __slots__ = ("E", "c")

    def __init__(self, E, coeffs):
        self.E = E
        self.c = coeffs  # tuple of base elements, length exactly deg h

    def __eq__(self, other):
        if isinstance(other, AlgElem):
            return self.c == other.c
        try:
            return self.c == self.E(other).c
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def _co(self, other):
        return other if isinstance(other, AlgElem) else self.E(other)

    def __add__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        o = self._co(other)
        return AlgElem(self.E, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.E, tuple(-a for a in self.c))

    def __sub__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) - self

    def as_poly(self):
        return Poly(self.E.base, self.c)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        o = self._co(other)
        return self.E.from_poly(self.as_poly() * o.as_poly())

    __rmul__ = __mul__

    def inverse(self):
        if all(a == self.E.base.zero for a in self.c):
            raise ZeroDivisionError("inverse of zero")
        return self.E.from_poly(inverse_mod(self.as_poly(), self.E.modulus))

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return NotImplemented
        return self * self._co(other).inverse()

    def __rtruediv__(self, other):
        return self._co(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.E.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_zero(self):
        return all(a == self.E.base.zero for a in self.c)

    def __repr__(self):
        return self.E.elt_str(self)


class AlgExtField:
    """base[s]/(h) for a rational function field base and h irreducible."""

    def __init__(self, base, modulus, var="s"):
        if not isinstance(base, RatFuncField):
            raise TowerTooDeep("algebraic layers sit directly over a rational function field")
        self.base = base
        self.modulus = modulus.monic()
        self.n = self.modulus.deg()
        self.var = var
        self.char = base.char
        self.zero = AlgElem(self, (base.zero,) * self.n)
        self.one = AlgElem(self, (base.one,) + (base.zero,) * (self.n - 1))

    def __eq__(self, other):
        return isinstance(other, AlgExtField) and self.base == other.base and self.modulus == other.modulus

    def __hash__(self):
        return hash(("AlgExt", self.base, self.modulus))

    def __repr__(self):
        return f"{self.base!r}[{self.var}]/({self.modulus.to_str(self.var)})"

    def from_poly(self, f):
        r = Poly(self.base, f.c) % self.modulus
        return AlgElem(self, tuple(r.c) + (self.base.zero,) * (self.n - len(r.c)))

    def from_base(self, a):
        return AlgElem(self, (self.base(a),) + (self.base.zero,) * (self.n - 1))

    def __call__(self, a):
        if isinstance(a, AlgElem):
            if a.E == self:
                return a
            raise TypeError("element of a different algebraic extension")
        if isinstance(a, Poly) and a.field == self.base:
            return self.from_poly(a)
        return self.from_base(a)

    def gen(self):
        return self.from_poly(Poly.x(self.base))

    def elt_str(self, a):
        return "(" + a.as_poly().to_str(self.var) + ")"

    def extension(self, psi):
        psi = psi.monic()
        if psi.deg() == 1:
            return identity_extension(self, -psi.c[0])
        raise TowerTooDeep("residue field tower deeper than one algebraic layer over F_q(t)")


# ---------------------------------------------------------------------------
# Factorization dispatch


def factor(f):
    """Monic irreducible factorization over the supported fields.

    Finite fields: full factorization.  Q: via sympy.  Rational function
    fields F_q(t): linear polynomials and binomials T^m - c.
    """
    F = f.field
    if isinstance(F, FiniteField):
        return ff_factor(f)
    if F == QQ:
        return q_factor(f)
    if f.deg() <= 0:
        return []
    if f.deg() == 1:
        return [(f.monic(), 1)]
    if isinstance(F, RatFuncField) and isinstance(F.k, FiniteField):
        f = f.monic()
        m = f.deg()
        if all(a == F.zero for a in f.c[1:m]):
            if f.c[0] == F.zero:
                return [(Poly.x(F), m)]
            return binomial_factor(F, m, -f.c[0])
        sqf = _ratfunc_general_factor(f)
        if sqf is not None:
            return sqf
    raise NotImplementedError(f"factorization over {F!r} of {f}")


def _ratfunc_general_factor(f):
    # t-power times binomial in disguise: f = T^k * (T^m' - c)
    F = f.field
    k = 0
    while f.c[k] == F.zero:
        k += 1
    if k == 0:
        return None
    rest = Poly(F, f.c[k:])
    out = [(Poly.x(F), k)] + factor(rest)
    return sorted(out, key=lambda fm: fm[0].deg())


def q_factor(f):
    """Monic irreducible factors over Q via sympy."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(a.numerator, a.denominator) * x**i for i, a in enumerate(f.c))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for g, m in facs:
        coeffs = sympy.Poly(g, x).all_coeffs()[::-1]
        p = Poly(QQ, [Fraction(int(sympy.numer(c)), int(sympy.denom(c))) for c in coeffs]).monic()
        if p.deg() > 0:
            out.append((p, m))
    return sorted(out, key=lambda fm: (fm[0].deg(), tuple(fm[0].c)))


def binomial_factor(F, m, c):
    """Factor T^m - c over F = F_q(t), c nonzero.

    Writes c = u * prod P_i^{a_i} with u a constant, g = gcd(m, a_i) and
    B = prod P_i^{a_i/g}.  Then T^m - c = prod over irreducible factors mu(U)
    of U^g - u of B^{deg mu} * mu(T^{m/g} / B), each irreducible when p does
    not divide m.
    """
    k = F.k
    c = F(c)
    lead = c.num.lc() / c.den.lc()
    num_f = ff_factor(c.num) if c.num.deg() > 0 else []
    den_f = ff_factor(c.den) if c.den.deg() > 0 else []
    parts = [(P, a) for P, a in num_f] + [(P, -a) for P, a in den_f]
    g = m
    for _, a in parts:
        g = igcd(g, abs(a))
    B = F.one
    for P, a in parts:
        B = B * F(P) ** (a // g)
    mp = m // g
    mus = ff_factor(Poly.monomial(k, g) - lead)
    out = []
    Tm = Poly.monomial(F, mp)
    for mu, _ in mus:
        d = mu.deg()
        acc = Poly(F, ())
        for i, a in enumerate(mu.c):
            acc = acc + (Tm**i) * (F(a) * B ** (d - i))
        out.append((acc.monic(), 1))
    return sorted(out, key=lambda fm: (fm[0].deg(), repr(fm[0])))


# ---------------------------------------------------------------------------
# Linear algebra and integrality


def linear_solve(field, vectors, target):
    """Coefficients c with sum c_i * vectors[i] = target, or None.

    ``vectors`` is a list of vectors (each a sequence of field elements).
    """
    n = len(target)
    if any(len(v) != n for v in vectors):
        raise ValueError("inconsistent dimensions")
    m = len(vectors)
    zero = field.zero
    rows = [[field(vectors[j][i]) for j in range(m)] + [field(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, n) if rows[i][col] != zero), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.one / rows[r][col]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(n):
            if i != r and rows[i][col] != zero:
                fac = rows[i][col]
                rows[i] = [a - fac * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    for i in range(r, n):
        if rows[i][m] != zero:
            return None
    sol = [zero] * m
    for i, col in enumerate(pivots):
        sol[col] = rows[i][m]
    return sol


class Substitution:
    """x -> p^(-k) * x + c, with the scale factor recorded."""

    def __init__(self, p, k, c=Fraction(0)):
        self.p = p
        self.k = k
        self.c = Fraction(c)

    def is_identity(self):
        return self.k == 0 and self.c == 0

    def __repr__(self):
        return f"Substitution(x -> {self.p}^{-self.k}*x + {fmt_q(self.c)})"


def make_integral(f, p):
    """Rescale a monic f so that g(x) = p^(k deg f) f(p^-k x) is p-integral."""
    if not f.is_monic():
        raise ValueError("make_integral expects a monic polynomial")
    d = f.deg()
    k = 0
    for i, a in enumerate(f.c[:-1]):
        v = valp(a, p)
        if not is_inf(v) and v < 0:
            k = max(k, ceil_q(-v / (d - i)))
    g = Poly(QQ, [a * Fraction(p) ** (k * (d - i)) for i, a in enumerate(f.c)])
    return Substitution(p, k), g


def elt_key(a):
    """Deterministic sort key for field elements and polynomials."""
    if isinstance(a, Fraction):
        return (a,)
    if isinstance(a, int):
        return (Fraction(a),)
    if isinstance(a, FFElem):
        return tuple(reversed(a.coords()))
    if isinstance(a, RatFunc):
        return (elt_key(a.num), elt_key(a.den))
    if isinstance(a, AlgElem):
        return tuple(elt_key(c) for c in reversed(a.c))
    if isinstance(a, Poly):
        return (a.deg(),) + tuple(elt_key(c) for c in reversed(a.c))
    raise TypeError(f"no sort key for {a!r}")
