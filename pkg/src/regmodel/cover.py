"""Integral differentials on the superelliptic curve y^n = f(x).

The forms are written as g * eta with eta = dx / y^(n-1) and g in the span of
the monomial basis.  For each component v of a regular model of the line we
extend v to the function field of the curve, find a w-reduced basis, and read
off the lattice of forms that are integral along the components above v.
The answer is the intersection of these lattices.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd

from .base import (
    QQ,
    FFElem,
    FiniteField,
    Poly,
    RatFunc,
    RatFuncField,
    ceil_q,
    fmt_q,
    linear_solve,
    poly_gcd,
    valp,
)
from .maclane import FunctionFieldBase, approximants
from .plmodel import DivisorSpec, alg31
from .sheaf import order_dx

log = logging.getLogger(__name__)

QX = RatFuncField(QQ, "x")


class CurveError(ValueError):
    """Input violating the standing assumptions on y^n = f(x)."""


class SuperellipticCurve:
    def __init__(self, p, n, f):
        if n < 2:
            raise CurveError("n must be at least 2")
        if gcd(n, p) != 1:
            raise CurveError(f"n={n} is not invertible mod p={p}")
        if f.field != QQ or not f.is_monic():
            raise CurveError("f must be a monic polynomial over Q")
        if any(a and valp(a, p) < 0 for a in f.c):
            raise CurveError(f"f is not integral at p={p}")
        self.p, self.n, self.f = p, n, f
        self.r = f.deg()
        if self.r < 3:
            raise CurveError("f must have degree at least 3")
        m = 0
        while f.c[m] == 0:
            m += 1
        self.m = m
        g = Poly(QQ, f.c[m:])
        if g.deg() > 0 and poly_gcd(g, g.derivative()).deg() > 0:
            raise CurveError("f has a multiple factor other than a power of x")
        if m >= n:
            raise CurveError("the power of x in f must be below n")
        if not self.interior_points():
            raise CurveError("the curve has genus 0")

    def interior_points(self):
        """(i, j) strictly inside the Newton polygon of y^n - f, sorted by (j, i)."""
        n, r, m = self.n, self.r, self.m
        return [
            (i, j)
            for j in range(1, n)
            for i in range(1, r + 1)
            if m * (n - j) < n * i < r * (n - j)
        ]

    @property
    def genus(self):
        return len(self.interior_points())

    def radical_factors(self):
        from .base import factor

        out = [g for g, _ in factor(self.f)]
        return out

    def __repr__(self):
        return f"y^{self.n} = {self.f.to_str('x')} over Q_{self.p}"


class YFieldElem:
    """sum a_i y^i with a_i in Q(x), i < n, modulo y^n = f."""

    __slots__ = ("curve", "c")

    def __init__(self, curve, coeffs):
        coeffs = [QX(a) for a in coeffs]
        if len(coeffs) > curve.n:
            raise ValueError("too many coefficients")
        coeffs += [QX.zero] * (curve.n - len(coeffs))
        self.curve = curve
        self.c = tuple(coeffs)

    @classmethod
    def monomial(cls, curve, i, j):
        c = [QX.zero] * curve.n
        c[j] = QX(Poly.monomial(QQ, i))
        return cls(curve, c)

    @classmethod
    def y_power(cls, curve, k):
        n = curve.n
        q, r = divmod(k, n)
        c = [QX.zero] * n
        c[r] = QX(curve.f) ** q
        return cls(curve, c)

    def __add__(self, other):
        return YFieldElem(self.curve, [a + b for a, b in zip(self.c, other.c)])

    def __sub__(self, other):
        return YFieldElem(self.curve, [a - b for a, b in zip(self.c, other.c)])

    def __neg__(self):
        return YFieldElem(self.curve, [-a for a in self.c])

    def scale(self, a):
        return YFieldElem(self.curve, [a * b for b in self.c])

    def __mul__(self, other):
        if not isinstance(other, YFieldElem):
            return self.scale(QX(other))
        n = self.curve.n
        F = QX(self.curve.f)
        out = [QX.zero] * n
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            for j, b in enumerate(other.c):
                if b.is_zero():
                    continue
                k = i + j
                if k >= n:
                    out[k - n] = out[k - n] + a * b * F
                else:
                    out[k] = out[k] + a * b
        return YFieldElem(self.curve, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, YFieldElem) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def is_zero(self):
        return all(a.is_zero() for a in self.c)

    def as_poly(self):
        """As a polynomial in y over Q(x)."""
        return Poly(QX, self.c)

    def d_dx(self):
        """Derivative along d/dx, using y'/y = f'/(n f)."""
        f = QX(self.curve.f)
        ratio = QX(self.curve.f.derivative()) / (f * self.curve.n)
        out = []
        for i, a in enumerate(self.c):
            da = QX.make(
                a.num.derivative() * a.den - a.num * a.den.derivative(), a.den * a.den
            )
            out.append(da + a * ratio * i)
        return YFieldElem(self.curve, out)

    def coords(self, points):
        """Coordinates on the monomials x^(i-1) y^(j-1) for (i, j) in points."""
        index = {(i - 1, j - 1): k for k, (i, j) in enumerate(points)}
        vec = [Fraction(0)] * len(points)
        for j, a in enumerate(self.c):
            if a.is_zero():
                continue
            if a.den.deg() != 0:
                raise ValueError("element is not polynomial in x")
            for i, c in enumerate(a.num.c):
                if c:
                    if (i, j) not in index:
                        raise ValueError(f"monomial x^{i} y^{j} outside the basis")
                    vec[index[(i, j)]] = c
        return vec

    def __str__(self):
        parts = []
        for j, a in enumerate(self.c):
            if a.is_zero():
                continue
            s = QX.elt_str(a)
            if j == 0:
                parts.append(s)
                continue
            ys = "y" if j == 1 else f"y^{j}"
            if s == "1":
                parts.append(ys)
            elif s == "-1":
                parts.append("-" + ys)
            elif a.den.deg() == 0 and len([c for c in a.num.c if c]) == 1:
                parts.append(f"{s}*{ys}")
            else:
                parts.append(f"({s})*{ys}")
        if not parts:
            return "0"
        out = parts[0]
        for t in parts[1:]:
            out += " - " + t[1:] if t.startswith("-") else " + " + t
        return out

    __repr__ = __str__


def kbasis(curve):
    """Monomials x^(i-1) y^(j-1) giving a basis of differentials via eta."""
    return [YFieldElem.monomial(curve, i - 1, j - 1) for i, j in curve.interior_points()]


# ---------------------------------------------------------------------------
# Extensions of valuations


class ExtValuation:
    """An extension w of a type II valuation v to the function field of the curve."""

    def __init__(self, v, curve, point):
        self.v = v
        self.curve = curve
        self.point = point
        self.wy = v.value(curve.f) / curve.n
        self.e = point.e // v.e

    def value(self, g):
        return self.point.value(g.as_poly())

    def residue(self, g, delta):
        return self.point.residue(g.as_poly(), delta)

    @property
    def e_total(self):
        """Denominator of the value group of w, with w(p) = 1."""
        return self.point.e

    def __repr__(self):
        return f"w over {self.v}: w(y)={fmt_q(self.wy)}, e={self.e}"


def _value_group_index(v, wy):
    b = wy.denominator
    E = v.e * b // gcd(v.e, b)
    return E // v.e


def extend_valuation(v, curve):
    """The extension of v along the lexicographically least residual branch."""
    fbase = FunctionFieldBase(v)
    y = Poly.x(QX)
    G = y ** curve.n - Poly.const(QX, QX(curve.f))
    pts = approximants(G, fbase, irreducible=True, first_only=True)
    w = ExtValuation(v, curve, pts[0])
    idx = _value_group_index(v, w.wy)
    if idx != w.e:
        log.warning("ramification %s differs from the value group index %s at %s", w.e, idx, v)
    return w


def w_of_eta(v, w, curve, vdx=None):
    """w(eta) for eta = dx / y^(n-1), in the normalization of the tables."""
    vdx = order_dx(v) if vdx is None else vdx
    return vdx + w.e - 1 - (curve.n - 1) * w.wy


# ---------------------------------------------------------------------------
# Reduced bases


def _components(r):
    if isinstance(r, RatFunc):
        return [r]
    if isinstance(r, FFElem):
        return [r]
    return list(r.c)


def fp_vectors(residues, p):
    """F_p-coordinate vectors of residue field elements.

    Rational function components are first multiplied by a common
    denominator, which does not change linear relations.
    """
    comps = [_components(r) for r in residues]
    if all(isinstance(c, FFElem) for cs in comps for c in cs):
        return [[a for c in cs for a in c.coords()] for cs in comps]
    den = None
    for cs in comps:
        for c in cs:
            den = c.den if den is None else den * c.den.exact_div(poly_gcd(den, c.den))
    polys = [[(c.num * den).exact_div(c.den) for c in cs] for cs in comps]
    width = max((q.deg() + 1 for ps in polys for q in ps), default=1)
    return [[a for q in ps for i in range(width) for a in q[i].coords()] for ps in polys]


def find_relation(vectors, p):
    """A nontrivial F_p-relation among the vectors (list of ints), or None."""
    F = FiniteField(p)
    for j in range(len(vectors)):
        sol = linear_solve(F, vectors[:j], vectors[j])
        if sol is not None:
            coeffs = [int(c.v[0]) if c.v else 0 for c in sol]
            return coeffs + [p - 1] + [0] * (len(vectors) - j - 1)
    return None


def _sym(c, p):
    c %= p
    return c - p if 2 * c > p else c


def is_reduced(w, basis):
    """Residue test: in each value class mod Z the residues are independent."""
    p = w.curve.p
    vals = [w.value(b) for b in basis]
    classes = {}
    for j, val in enumerate(vals):
        classes.setdefault(val - (val.numerator // val.denominator), []).append(j)
    for delta, idx in classes.items():
        res = [w.residue(basis[j].scale(Fraction(1, p) ** int(vals[j] - delta)), delta) for j in idx]
        if find_relation(fp_vectors(res, p), p) is not None:
            return False
    return True


def reduced_basis(w, basis):
    """A w-reduced basis of the same Q-span."""
    p = w.curve.p
    B = list(basis)
    while True:
        vals = [w.value(b) for b in B]
        classes = {}
        for j, val in enumerate(vals):
            classes.setdefault(val - (val.numerator // val.denominator), []).append(j)
        changed = False
        for delta in sorted(classes):
            idx = classes[delta]
            shifts = [int(vals[j] - delta) for j in idx]
            res = [w.residue(B[j].scale(Fraction(1, p) ** s), delta) for j, s in zip(idx, shifts)]
            rel = find_relation(fp_vectors(res, p), p)
            if rel is None:
                continue
            nz = [k for k, c in enumerate(rel) if c % p]
            k0 = max(nz, key=lambda k: (shifts[k], idx[k]))
            inv = pow(rel[k0], -1, p)
            new = None
            for k in nz:
                c = _sym(rel[k] * inv, p) if k != k0 else 1
                term = B[idx[k]].scale(Fraction(c) * Fraction(p) ** (shifts[k0] - shifts[k]))
                new = term if new is None else new + term
            B[idx[k0]] = new
            changed = True
            break
        if not changed:
            return B


def module_basis(w, bound, basis):
    """Generators p^k_i f_i of {g : w(g) >= bound} for a reduced basis."""
    p = w.curve.p
    out = []
    for f in basis:
        k = ceil_q(bound - w.value(f))
        out.append(f.scale(Fraction(p) ** k))
    return out


# ---------------------------------------------------------------------------
# p-local lattices


def _canon_rep(a, k, p):
    """Representative of a modulo p^k Z_(p) in p^v * [0, p^(k-v))."""
    if a == 0:
        return Fraction(0)
    v = valp(a, p)
    if v >= k:
        return Fraction(0)
    u = a / Fraction(p) ** v
    mod = p ** (k - v)
    s = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return Fraction(p) ** v * s


def hnf_p(cols, dim, p):
    """Canonical Z_(p)-basis: upper triangular, diagonal p^k, reduced entries."""
    # work on reversed coordinates so that column j ends at row j
    rem = [list(map(Fraction, reversed(c))) for c in cols]
    out = []
    for r in range(dim):
        cand = [c for c in rem if c[r] != 0]
        if not cand:
            raise ValueError("lattice does not have full rank")
        piv = min(cand, key=lambda c: valp(c[r], p))
        rem = [c for c in rem if c is not piv]
        k = valp(piv[r], p)
        scale = Fraction(p) ** k / piv[r]
        piv = [a * scale for a in piv]
        for c in rem:
            if c[r] != 0:
                q = c[r] / piv[r]
                for i in range(dim):
                    c[i] -= q * piv[i]
        out.append(piv)
    for j in range(dim):
        for i in range(j + 1, dim):
            a = out[j][i]
            if a == 0:
                continue
            k = valp(out[i][i], p)
            q = (a - _canon_rep(a, k, p)) / out[i][i]
            if q:
                out[j] = [x - q * y for x, y in zip(out[j], out[i])]
    return tuple(tuple(reversed(c)) for c in reversed(out))


def _inverse(M):
    """Inverse of a square matrix of Fractions given as rows."""
    n = len(M)
    rows = [list(r) + [Fraction(int(i == k)) for k in range(n)] for i, r in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if rows[r][c] != 0)
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [a * inv for a in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
    return [r[n:] for r in rows]


class DiffLattice:
    """A full-rank Z_(p)-lattice in Q^g, kept in canonical form."""

    def __init__(self, p, gens, labels=None):
        gens = [list(map(Fraction, g)) for g in gens]
        self.p = p
        self.dim = len(gens[0]) if gens else 0
        self.labels = labels
        self.cols = hnf_p(gens, self.dim, p)

    def __eq__(self, other):
        return isinstance(other, DiffLattice) and self.p == other.p and self.cols == other.cols

    def __hash__(self):
        return hash(self.cols)

    def _coords(self, vec):
        # cols are the columns of B; solve B c = vec
        B = [[self.cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        inv = _inverse(B)
        return [sum(inv[i][k] * Fraction(vec[k]) for k in range(self.dim)) for i in range(self.dim)]

    def contains(self, vec):
        return all(c == 0 or valp(c, self.p) >= 0 for c in self._coords(vec))

    def dual(self):
        B = [[self.cols[j][i] for j in range(self.dim)] for i in range(self.dim)]
        inv = _inverse(B)
        # columns of inv^T are the rows of inv
        return DiffLattice(self.p, inv, self.labels)

    def __add__(self, other):
        return DiffLattice(self.p, list(self.cols) + list(other.cols), self.labels)

    def intersect(self, other):
        if self.p != other.p or self.dim != other.dim:
            raise ValueError("lattices in different ambients")
        return (self.dual() + other.dual()).dual()

    def __repr__(self):
        return f"DiffLattice(p={self.p}, cols={[[fmt_q(a) for a in c] for c in self.cols]})"


def intersect_lattices(L1, L2):
    return L1.intersect(L2)


def lattice_of(curve, elems):
    pts = curve.interior_points()
    return DiffLattice(curve.p, [g.coords(pts) for g in elems], pts)


def elems_of(curve, lattice):
    pts = curve.interior_points()
    out = []
    for col in lattice.cols:
        c = [QX.zero] * curve.n
        for (i, j), a in zip(pts, col):
            if a:
                c[j - 1] = c[j - 1] + QX(Poly.monomial(QQ, i - 1, a))
        out.append(YFieldElem(curve, c))
    return out


# ---------------------------------------------------------------------------
# Pipeline


class ValuationRow:
    def __init__(self, v, w, vdx, weta, reduced, module):
        self.v = v
        self.w = w
        self.vdx = vdx
        self.weta = weta
        self.reduced = reduced
        self.module = module

    @property
    def wy(self):
        return self.w.wy

    @property
    def e(self):
        return self.w.e


class IntegralBasisResult:
    def __init__(self, curve, model, rows, lattice):
        self.curve = curve
        self.model = model
        self.rows = rows
        self.lattice = lattice
        self.basis = elems_of(curve, lattice)

    def forms(self):
        eta = "dx/y" if self.curve.n == 2 else f"dx/y^{self.curve.n - 1}"
        return [f"({b})*{eta}" for b in self.basis]


def process_valuation(v, curve, kb=None):
    kb = kb or kbasis(curve)
    w = extend_valuation(v, curve)
    vdx = order_dx(v)
    weta = w_of_eta(v, w, curve, vdx)
    red = reduced_basis(w, kb)
    mod = module_basis(w, -weta, red)
    return ValuationRow(v, w, vdx, weta, red, mod)


def integral_basis(curve, order=None, model=None):
    """Lattice of integral differential forms g * eta, with per-valuation data."""
    if model is None:
        model = alg31(DivisorSpec(curve.p, curve.radical_factors(), include_infinity=False))
    kb = kbasis(curve)
    vals = list(model.finite)
    if order is not None:
        vals = [vals[i] for i in order]
    rows = []
    L = None
    for v in vals:
        row = process_valuation(v, curve, kb)
        rows.append(row)
        Lv = lattice_of(curve, row.module)
        L = Lv if L is None else L.intersect(Lv)
    return IntegralBasisResult(curve, model, rows, L)


__all__ = [
    "CurveError",
    "DiffLattice",
    "ExtValuation",
    "IntegralBasisResult",
    "SuperellipticCurve",
    "YFieldElem",
    "extend_valuation",
    "integral_basis",
    "intersect_lattices",
    "is_reduced",
    "kbasis",
    "lattice_of",
    "module_basis",
    "process_valuation",
    "reduced_basis",
    "w_of_eta",
]
