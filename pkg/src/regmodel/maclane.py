"""MacLane inductive valuations over a discretely valued base field.

A valuation is stored as its minimal augmentation chain
``[v0, v(phi_1)=lam_1, ..., v(phi_n)=lam_n]``.  The engine only talks to the
base through :class:`ValuedBase`, so the same code runs over (Q, v_p) for the
projective line and over (Q(x), v) when extending to a cover.

Residues at level k live in kappa_k[t_k, 1/t_k] where kappa_k is the constant
field and t_k the reduction of the generator witness
``phi_k^h_k / M_{k-1}(h_k lam_k)``.  Monomials are exponent tuples
``(a, b_1, ..., b_k)`` standing for ``pi^a * prod phi_i^b_i``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .base import (
    INF,
    NEG_INF,
    QQ,
    FiniteField,
    Poly,
    RatFunc,
    RatFuncField,
    elt_key,
    ext,
    factor,
    fmt_q,
    is_inf,
    is_irreducible,
    valp,
)


class ValuedBase:
    """A field with a discrete valuation, normalized so values lie in (1/e)Z."""

    field = None
    e = 1
    pi = None
    residue_field = None
    var = "x"

    def val(self, a):
        raise NotImplementedError

    def reduce(self, a):
        raise NotImplementedError

    def lift(self, r):
        raise NotImplementedError

    def elt_str(self, a):
        return self.field.elt_str(a)


class PAdicBase(ValuedBase):
    """(Q, v_p) with residue field F_p."""

    def __init__(self, p, var="x"):
        self.p = p
        self.field = QQ
        self.e = 1
        self.pi = Fraction(p)
        self.residue_field = FiniteField(p)
        self.var = var

    def __eq__(self, other):
        return isinstance(other, PAdicBase) and other.p == self.p and other.var == self.var

    def __hash__(self):
        return hash(("padic", self.p, self.var))

    def __repr__(self):
        return f"(Q, v_{self.p})"

    def val(self, a):
        return valp(a, self.p)

    def reduce(self, a):
        a = Fraction(a)
        if a and valp(a, self.p) < 0:
            raise ValueError("reduction of an element of negative value")
        return self.residue_field(a)

    def lift(self, r):
        r = self.residue_field(r)
        a = r.v[0] if r.v else 0
        # symmetric representative, so t - (p-1) lifts to x + 1
        return Fraction(a - self.p if 2 * a > self.p else a)


class FunctionFieldBase(ValuedBase):
    """(Q(x), v) for a finite inductive valuation v, used to extend v to y."""

    def __init__(self, v, var="y"):
        if v.is_infinite:
            raise ValueError("the base valuation must be finite")
        self.v = v
        self.field = RatFuncField(v.base.field, v.base.var)
        self.e = v.e
        self.pi = v.uniformizer_elt()
        self.residue_field = v.residue_field()
        self.var = var

    def __eq__(self, other):
        return isinstance(other, FunctionFieldBase) and other.var == self.var and other.v == self.v

    def __hash__(self):
        return hash(("ffbase", self.v, self.var))

    def __repr__(self):
        return f"(Q(x), {self.v})"

    def val(self, a):
        return self.v.value(a)

    def reduce(self, a):
        return self.v.reduce_elt(a)

    def lift(self, r):
        return self.v.lift_elt(r)


@lru_cache(maxsize=1 << 16)
def _expand(f, phi):
    out = []
    while f.c:
        f, r = divmod(f, phi)
        out.append(r)
    return tuple(out)


def phi_expansion(f, phi):
    """Coefficients f_i of deg < deg(phi) with f = sum f_i phi^i."""
    if not phi.is_monic() or phi.deg() < 1:
        raise ValueError("expansion needs a monic polynomial of positive degree")
    return list(_expand(f, phi))


def lower_hull(points):
    """Lower convex hull of (x, y) points with distinct x, sorted by x."""
    hull = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it is on or above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


class Segment:
    __slots__ = ("ja", "jb", "lam")

    def __init__(self, ja, jb, lam):
        self.ja, self.jb, self.lam = ja, jb, lam

    @property
    def length(self):
        return self.jb - self.ja

    def __repr__(self):
        return f"Segment({self.ja}..{self.jb}, slope {fmt_q(self.lam)})"


class _Level:
    __slots__ = ("phi", "lam", "E", "h", "psi", "emb", "kappa", "Mh")


class Monomial:
    """pi^a * prod phi_i^b_i for a fixed valuation, with its value."""

    def __init__(self, val, exps):
        self.v = val
        self.exps = tuple(exps)

    @property
    def value(self):
        return self.v._mon_value(self.exps)

    def to_elt(self):
        """As a rational function over the base field."""
        return self.v._mon_elt(self.exps)

    def __repr__(self):
        parts = []
        a = self.exps[0]
        if a:
            parts.append(f"{self.v.base.elt_str(self.v.base.pi)}^{a}")
        for i, b in enumerate(self.exps[1:], start=1):
            if b:
                parts.append(f"({self.v.steps[i - 1][0].to_str(self.v.base.var)})^{b}")
        return "*".join(parts) or "1"


class InductiveValuation:
    """A MacLane (pseudo)valuation in minimal chain form."""

    def __init__(self, base, steps=()):
        self.base = base
        self.steps = tuple((phi, ext(lam)) for phi, lam in steps)
        self.n = len(self.steps)
        self._vcache = {}
        for i, (_phi, lam) in enumerate(self.steps):
            if is_inf(lam) and i != self.n - 1:
                raise ValueError("only the last step may have infinite value")
        self.levels = [None] * (self.n + 1)
        self._build_levels()

    # -- construction ------------------------------------------------------

    def _build_levels(self):
        lv0 = _Level()
        lv0.phi = Poly.x(self.base.field)
        lv0.lam = Fraction(0)
        lv0.E = self.base.e
        lv0.h = 1
        lv0.kappa = self.base.residue_field
        lv0.emb = None
        lv0.psi = None
        lv0.Mh = None
        self.levels[0] = lv0
        for k in range(1, self.n + 1):
            phi, lam = self.steps[k - 1]
            prev = self.levels[k - 1]
            lv = _Level()
            lv.phi = phi
            lv.lam = lam
            # residual polynomial of phi_k over mu_{k-1}
            psi, _ = self._residual(k - 1, phi)
            lv.psi = psi.monic()
            lv.emb = prev.kappa.extension(lv.psi)
            lv.kappa = lv.emb.target
            if is_inf(lam):
                lv.E = prev.E
                lv.h = None
                lv.Mh = None
            else:
                den = lam.denominator
                E = prev.E * den // _gcd(prev.E, den)
                lv.E = E
                lv.h = E // prev.E
                self.levels[k] = lv
                lv.Mh = self._canon(k - 1, lv.h * lam)
            self.levels[k] = lv

    @property
    def is_infinite(self):
        return self.n > 0 and is_inf(self.steps[-1][1])

    @property
    def e(self):
        """Denominator of the value group: v(F^*) = (1/e) Z."""
        return self.levels[self.n].E

    def prefix(self, k):
        return InductiveValuation(self.base, self.steps[:k])

    def predecessors(self):
        """The valuations v_0, ..., v_{n-1} of the minimal chain."""
        return [self.prefix(k) for k in range(self.n)]

    def minimal_chain(self):
        return list(self.steps)

    def signature(self):
        return tuple((phi.deg(), lam) for phi, lam in self.steps)

    def augment(self, phi, lam, check=True):
        """[self, v(phi) = lam], normalized to minimal form."""
        lam = ext(lam)
        if self.is_infinite:
            raise ValueError("cannot augment an infinite pseudovaluation")
        if not isinstance(phi, Poly):
            raise TypeError("key must be a polynomial")
        if check and not self.is_key(phi):
            raise ValueError(f"{phi.to_str(self.base.var)} is not a key polynomial for {self}")
        cur = self.value(phi)
        if lam < cur:
            raise ValueError("augmentation value below the current value")
        if lam == cur:
            return self
        if self.n >= 1 and phi.deg() == self.steps[-1][0].deg():
            return InductiveValuation(self.base, self.steps[:-1] + ((phi, lam),))
        return InductiveValuation(self.base, self.steps + ((phi, lam),))

    # -- values ------------------------------------------------------------

    def _val(self, k, f):
        if not f.c:
            return INF
        key = (k, f)
        hit = self._vcache.get(key)
        if hit is not None:
            return hit
        if k == 0:
            best = INF
            for a in f.c:
                if a != self.base.field.zero:
                    v = self.base.val(a)
                    if v < best:
                        best = v
        else:
            lv = self.levels[k]
            if is_inf(lv.lam):
                best = self._val(k - 1, f % lv.phi)
            else:
                best = INF
                for j, fj in enumerate(_expand(f, lv.phi)):
                    if fj.c:
                        v = self._val(k - 1, fj) + j * lv.lam
                        if v < best:
                            best = v
        self._vcache[key] = best
        return best

    def _as_poly(self, f):
        if isinstance(f, Poly):
            return f
        return Poly.const(self.base.field, f)

    def value(self, f):
        """Value of a polynomial, base constant or rational function."""
        if isinstance(f, RatFunc) and isinstance(f.num, Poly) and f.num.field == self.base.field:
            vn = self._val(self.n, f.num)
            vd = self._val(self.n, f.den)
            if is_inf(vd):
                if is_inf(vn):
                    raise ValueError("0/0 under an infinite pseudovaluation")
                return NEG_INF
            return vn - vd
        return self._val(self.n, self._as_poly(f))

    def __call__(self, f):
        return self.value(f)

    def expansion_values(self, f):
        """[(j, value of f_j phi_n^j)] over the phi_n-expansion of f."""
        lv = self.levels[self.n]
        return [
            (j, self._val(self.n - 1, fj) + j * lv.lam)
            for j, fj in enumerate(_expand(f, lv.phi))
            if fj.c
        ]

    def newton_polygon(self, f, phi):
        """Lower hull segments of the phi-Newton polygon of f under self.

        A vanishing constant coefficient gives a leading segment of slope inf.
        """
        coeffs = _expand(f, phi)
        pts = [(j, self.value(fj)) for j, fj in enumerate(coeffs) if fj.c]
        segs = []
        if not coeffs[0].c:
            segs.append(Segment(0, pts[0][0], INF))
        hull = lower_hull(pts)
        for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
            segs.append(Segment(x1, x2, Fraction(y1 - y2) / (x2 - x1)))
        return segs

    def principal_segments(self, f, phi):
        base = self.value(phi)
        return [s for s in self.newton_polygon(f, phi) if s.lam > base]

    # -- monomials ---------------------------------------------------------

    def _mon_value(self, mon):
        v = Fraction(mon[0], self.base.e)
        for i, b in enumerate(mon[1:], start=1):
            if b:
                v += b * self.levels[i].lam
        return v

    def _canon(self, k, gamma):
        """Exponents of the canonical monomial M_k(gamma), 0 <= b_i < h_i."""
        gamma = Fraction(gamma)
        exps = [0] * (k + 1)
        for i in range(k, 0, -1):
            lv = self.levels[i]
            if lv.h > 1:
                G = gamma * lv.E
                L = lv.lam * lv.E
                if G.denominator != 1:
                    raise ValueError(f"{fmt_q(gamma)} is not in the value group")
                b = (int(G) * pow(int(L), -1, lv.h)) % lv.h
                exps[i] = b
                gamma -= b * lv.lam
        a = gamma * self.base.e
        if a.denominator != 1:
            raise ValueError("value not in the value group")
        exps[0] = int(a)
        return tuple(exps)

    def canonical_monomial(self, gamma):
        return Monomial(self, self._canon(self.n, gamma) if not self.is_infinite else self._canon(self.n - 1, gamma))

    def _mon_elt(self, mon):
        R = RatFuncField(self.base.field, self.base.var)
        acc = R(Poly.const(self.base.field, self.base.pi ** mon[0]))
        for i, b in enumerate(mon[1:], start=1):
            if b:
                acc = acc * R(self.steps[i - 1][0]) ** b
        return acc

    # -- reduction ---------------------------------------------------------

    def _eval_laurent(self, k, L):
        """Map a Laurent polynomial in t_{k-1} over kappa_{k-1} into kappa_k."""
        lv = self.levels[k]
        emb, rho = lv.emb, lv.emb.rho
        acc = lv.kappa.zero
        for e, c in L.items():
            acc = acc + emb(c) * rho**e
        return acc

    def _red(self, k, A, mon):
        """Reduction of A * mon (value >= 0) as {exp: coeff} in t_k over kappa_k."""
        if not A.c:
            return {}
        kappa = self.levels[k].kappa
        zero = kappa.zero
        out = {}
        if k == 0:
            pa = self.base.pi ** mon[0]
            for i, c in enumerate(A.c):
                if c != self.base.field.zero:
                    r = self.base.reduce(c * pa)
                    if r != zero:
                        out[i] = r
            return out
        lv = self.levels[k]
        prev = mon[:k]
        shift = self._mon_value(prev)
        if is_inf(lv.lam):
            if len(mon) > k and mon[k]:
                raise ValueError("key exponent at an infinite level")
            r = A % lv.phi
            v = self._val(k - 1, r) + shift
            if v > 0:
                return {}
            if v < 0:
                raise ValueError("reduction of an element of negative value")
            z = self._eval_laurent(k, self._red(k - 1, r, prev))
            return {0: z} if z != zero else {}
        c = mon[k] if len(mon) > k else 0
        for j, Aj in enumerate(_expand(A, lv.phi)):
            if not Aj.c:
                continue
            v = self._val(k - 1, Aj) + (j + c) * lv.lam + shift
            if v > 0:
                continue
            if v < 0:
                raise ValueError("reduction of an element of negative value")
            q, r = divmod(j + c, lv.h)
            if r:
                raise AssertionError("value-zero term off the residue lattice")
            m2 = tuple(prev[i] + q * lv.Mh[i] for i in range(k))
            z = self._eval_laurent(k, self._red(k - 1, Aj, m2))
            if z != zero:
                s = out.get(q, zero) + z
                if s == zero:
                    out.pop(q, None)
                else:
                    out[q] = s
        return out

    def _residual(self, k, f):
        """Residual polynomial of f at level k: (poly over kappa_k, t-order).

        At level 0 nothing is stripped; above it the t-power is removed.
        """
        g = self._val(k, f)
        if is_inf(g):
            raise ValueError("residual polynomial of zero")
        mon = tuple(-a for a in self._canon(k, g))
        L = self._red(k, f, mon)
        kappa = self.levels[k].kappa
        if k == 0:
            top = max(L)
            return Poly(kappa, [L.get(i, kappa.zero) for i in range(top + 1)]), 0
        lo, hi = min(L), max(L)
        return Poly(kappa, [L.get(i, kappa.zero) for i in range(lo, hi + 1)]), lo

    def residual_polynomial(self, f):
        """Residual polynomial of f at the top level (unit normalization is internal)."""
        if self.is_infinite:
            raise ValueError("residual polynomials need a finite valuation")
        return self._residual(self.n, self._as_poly(f))[0]

    @property
    def kappa(self):
        return self.levels[self.n].kappa

    def residue_field(self):
        """k(v) = kappa_n(t)."""
        return RatFuncField(self.kappa, "t")

    def generator_witness(self):
        """u with reduction the transcendental generator t of the residue ring."""
        R = RatFuncField(self.base.field, self.base.var)
        if self.n == 0:
            return R(Poly.x(self.base.field))
        lv = self.levels[self.n]
        return R(lv.phi) ** lv.h / self._mon_elt(lv.Mh)

    def generator_monomial(self):
        lv = self.levels[self.n]
        if self.n == 0:
            return None
        return Monomial(self, tuple(-a for a in lv.Mh) + (lv.h,))

    def uniformizer(self):
        """Monomial of value 1/e with all key exponents nonnegative."""
        if self.is_infinite:
            raise ValueError("infinite pseudovaluations have no uniformizer")
        return Monomial(self, self._canon(self.n, Fraction(1, self.e)))

    def uniformizer_elt(self):
        return self.uniformizer().to_elt()

    def _laurent_to_ratfunc(self, L):
        K = self.residue_field()
        kappa = self.kappa
        if not L:
            return K.zero
        lo = min(L)
        num = Poly(kappa, [L.get(i, kappa.zero) for i in range(lo, max(L) + 1)])
        if lo >= 0:
            return K(num.shift_up(lo))
        return K.make(num, Poly.monomial(kappa, -lo))

    def reduce_elt(self, f):
        """Image in k(v) of an element of value >= 0 (polynomial or rational function)."""
        if self.is_infinite:
            raise ValueError("reduction needs a finite valuation")
        if isinstance(f, RatFunc) and isinstance(f.num, Poly) and f.num.field == self.base.field:
            num, den = f.num, f.den
        else:
            num, den = self._as_poly(f), Poly.const(self.base.field, 1)
        vd = self._val(self.n, den)
        vn = self._val(self.n, num)
        if vn < vd:
            raise ValueError("element has negative value")
        if vn > vd:
            return self.residue_field().zero
        mon = tuple(-a for a in self._canon(self.n, vd))
        return self._laurent_to_ratfunc(self._red(self.n, num, mon)) / self._laurent_to_ratfunc(
            self._red(self.n, den, mon)
        )

    def reduce_monomial(self, mon):
        """Reduction of a value-zero monomial, in k(v)."""
        one = Poly.const(self.base.field, 1)
        return self._laurent_to_ratfunc(self._red(self.n, one, tuple(mon)))

    # -- lifting -----------------------------------------------------------

    def _glift(self, k, P, gamma):
        """Polynomial L of value >= gamma (= gamma if P != 0) whose residue
        relative to M_k(gamma) is the polynomial P in t_k over kappa_k."""
        F = self.base.field
        if k == 0:
            out = [self.base.lift(a) for a in P.c]
            scale = self.base.pi ** int(Fraction(gamma) * self.base.e)
            return Poly(F, [a * scale for a in out])
        lv = self.levels[k]
        mon = self._canon(k, gamma)
        b = mon[k]
        gamma1 = Fraction(gamma) - b * lv.lam
        base_mon = mon[:k]
        out = Poly(F, ())
        for j, Pj in enumerate(P.c):
            if Pj == lv.kappa.zero:
                continue
            delta = gamma1 - j * lv.h * lv.lam
            target = tuple(base_mon[i] - j * lv.Mh[i] for i in range(k))
            Lj = self._clift(k, Pj, delta, target)
            out = out + Lj * lv.phi ** (b + j * lv.h)
        return out

    def _clift(self, k, c, delta, mon):
        """Polynomial A with deg A < deg phi_k, value delta at level k-1 and
        red_{k-1}(A / mon) mapping to c in kappa_k."""
        lv = self.levels[k]
        prevk = self.levels[k - 1].kappa
        can = self._canon(k - 1, delta)
        ratio = tuple(a - b for a, b in zip(can, mon))
        one = Poly.const(self.base.field, 1)
        eps = self._eval_laurent(k, self._red(k - 1, one, ratio))
        coeffs = lv.emb.decompose(c / eps)
        return self._glift(k - 1, Poly(prevk, coeffs), delta)

    def lift_elt(self, r):
        """A rational function of value 0 reducing to r in k(v)."""
        K = self.residue_field()
        r = K(r)
        R = RatFuncField(self.base.field, self.base.var)
        if r == K.zero:
            return R.zero
        num = self._glift(self.n, r.num, 0)
        den = self._glift(self.n, r.den, 0)
        return R(num) / R(den)

    def lift_to_key(self, psi):
        """A key polynomial whose residual polynomial is the monic irreducible psi."""
        psi = psi.monic()
        if self.is_infinite:
            raise ValueError("no key polynomials for an infinite pseudovaluation")
        if not is_irreducible(psi):
            raise ValueError("residual polynomial to lift is reducible")
        F = self.base.field
        if self.n == 0:
            return Poly(F, [self.base.lift(a) for a in psi.c])
        lv = self.levels[self.n]
        if psi.deg() == 1 and psi.c[0] == lv.kappa.zero:
            return lv.phi
        D = psi.deg()
        out = lv.phi ** (lv.h * D)
        for j in range(D):
            cj = psi.c[j]
            if cj == lv.kappa.zero:
                continue
            mon = tuple((D - j) * a for a in lv.Mh)
            Lj = self._clift(self.n, cj, (D - j) * lv.h * lv.lam, mon)
            out = out + Lj * lv.phi ** (lv.h * j)
        return out

    # -- key polynomials and equivalence -----------------------------------

    def is_key(self, phi):
        if not isinstance(phi, Poly) or phi.deg() < 1 or not phi.is_monic():
            return False
        if self.is_infinite:
            return False
        if self._val(0, phi) < 0:
            return False
        if self.n == 0:
            R, _ = self._residual(0, phi)
            return R.deg() == phi.deg() and is_irreducible(R)
        lv = self.levels[self.n]
        if phi.deg() == lv.phi.deg() and self.value(phi - lv.phi) > lv.lam:
            return True
        vals = self.expansion_values(phi)
        m = min(v for _, v in vals)
        J = [j for j, v in vals if v == m]
        if J[0] != 0 or J[-1] * lv.phi.deg() != phi.deg():
            return False
        R, _ = self._residual(self.n, phi)
        return R.deg() * lv.h == J[-1] and is_irreducible(R)

    def is_equivalent(self, f, g):
        if f.is_zero() or g.is_zero():
            raise ValueError("equivalence is defined for nonzero polynomials")
        return self.value(f - g) > self.value(f)

    def v_divides(self, phi, f):
        """Whether the key phi divides f in the graded algebra of self."""
        if f.is_zero():
            raise ValueError("zero polynomial")
        if self.n >= 1:
            lv = self.levels[self.n]
            if phi.deg() == lv.phi.deg() and self.value(phi - lv.phi) > lv.lam:
                vals = self.expansion_values(f)
                m = min(v for _, v in vals)
                return [j for j, v in vals if v == m][0] > 0
        psi, _ = self._residual(self.n, phi)
        R, _ = self._residual(self.n, f)
        return (R % psi.monic()).is_zero()

    # -- order -------------------------------------------------------------

    def leq(self, other):
        """self <= other, decided on the keys of the minimal chain."""
        if getattr(other, "base", None) != self.base:
            raise ValueError("valuations over different bases")
        return all(other.value(phi) >= lam for phi, lam in self.steps)

    def __eq__(self, other):
        if not isinstance(other, InductiveValuation):
            return NotImplemented
        if self.base != other.base or self.signature() != other.signature():
            return False
        return self.leq(other) and other.leq(self)

    def __hash__(self):
        return hash(self.signature())

    def __str__(self):
        parts = ["v0"]
        for phi, lam in self.steps:
            parts.append(f"v({phi.to_str(self.base.var)})={fmt_q(lam)}")
        return "[" + ", ".join(parts) + "]"

    __repr__ = __str__

    def chain_json(self):
        return [[phi.to_str(self.base.var), fmt_q(lam)] for phi, lam in self.steps]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def gauss(base):
    """The Gauss valuation: minimum of the coefficient values."""
    return InductiveValuation(base, ())


def from_chain(base, chain):
    """Build [v0, v(phi_1)=lam_1, ...] through checked augmentations."""
    v = gauss(base)
    for phi, lam in chain:
        v = v.augment(phi, lam)
    return v


# ---------------------------------------------------------------------------
# Infinite pseudovaluations and approximants


class InfinitePoint:
    """The infinite pseudovaluation of an irreducible factor xi over the
    completion, for a base-irreducible polynomial F.

    ``exact`` points have xi = F and carry the full chain ending in inf.
    Otherwise ``approx`` is a finite valuation [mu, phi = lam] with
    deg phi = deg xi that is refined on demand.
    """

    def __init__(self, F, approx, exact, index=0):
        self.F = F
        self.approx = approx
        self.exact = exact
        self.index = index
        self.base = approx.base

    @property
    def degree(self):
        return self.approx.steps[-1][0].deg()

    @property
    def stem(self):
        """The immediate predecessor mu_{s-1}."""
        return self.approx.prefix(self.approx.n - 1)

    def predecessors(self):
        return self.approx.predecessors()

    def refine(self):
        if self.exact:
            return
        cur = self.approx
        R = cur.residual_polynomial(self.F)
        phi = cur.lift_to_key(R.monic())
        segs = cur.principal_segments(self.F, phi)
        self.approx = cur.augment(phi, segs[0].lam, check=False)

    def key_and_bound(self):
        phi, lam = self.approx.steps[-1]
        return phi, lam

    def _poly_value(self, g):
        if g.is_zero():
            return INF
        if self.exact:
            return self.approx.value(g)
        if (g % self.F).is_zero():
            return INF
        while True:
            stem = self.stem
            phi, lam = self.approx.steps[-1]
            coeffs = _expand(g, phi)
            c0 = stem.value(coeffs[0]) if coeffs[0].c else INF
            lower = INF
            for j, gj in enumerate(coeffs[1:], start=1):
                if gj.c:
                    lower = min(lower, stem.value(gj) + j * lam)
            if c0 < lower:
                return c0
            self.refine()

    def value(self, f):
        if isinstance(f, RatFunc) and isinstance(f.num, Poly) and f.num.field == self.base.field:
            vn, vd = self._poly_value(f.num), self._poly_value(f.den)
            if is_inf(vd):
                if is_inf(vn):
                    raise ValueError("0/0 under an infinite pseudovaluation")
                return NEG_INF
            return vn - vd
        if not isinstance(f, Poly):
            f = Poly.const(self.base.field, f)
        return self._poly_value(f)

    def __call__(self, f):
        return self.value(f)

    def residue(self, g, delta):
        """Residue of g / M(delta) in the residue field of the point; needs value(g) >= delta."""
        val = self._poly_value(g)
        ap = self.approx
        s = ap.n
        if val > delta:
            return ap.levels[s].kappa.zero
        if val < delta:
            raise ValueError("element has value below the requested level")
        g0 = g % ap.steps[-1][0]
        mon = tuple(-a for a in ap._canon(s - 1, delta))
        return ap._eval_laurent(s, ap._red(s - 1, g0, mon))

    @property
    def e(self):
        """Denominator of the value group of the point."""
        return self.stem.e

    def value_of_xi(self, w):
        """w(xi) for a finite valuation w above the stem."""
        if self.exact:
            return w.value(self.F) if self.approx.steps[-1][0] == self.F else w.value(self.approx.steps[-1][0])
        while True:
            phi, lam = self.approx.steps[-1]
            val = w.value(phi)
            if val < lam:
                return val
            self.refine()

    def chain_steps(self):
        steps = list(self.approx.steps[:-1])
        phi = self.approx.steps[-1][0]
        return steps + [(phi, INF)]

    def leq(self, other):
        return self == other

    def __eq__(self, other):
        if not isinstance(other, InfinitePoint):
            return NotImplemented
        return self.F == other.F and self.index == other.index

    def __hash__(self):
        return hash((self.F, self.index))

    def __str__(self):
        parts = ["v0"]
        for phi, lam in self.approx.steps[:-1]:
            parts.append(f"v({phi.to_str(self.base.var)})={fmt_q(lam)}")
        last = self.approx.steps[-1][0]
        if self.exact:
            parts.append(f"v({last.to_str(self.base.var)})=inf")
        else:
            parts.append(f"v(~{last.to_str(self.base.var)})=inf")
        return "[" + ", ".join(parts) + "]"

    __repr__ = __str__

    def chain_json(self):
        out = [[phi.to_str(self.base.var), fmt_q(lam)] for phi, lam in self.approx.steps[:-1]]
        out.append([self.approx.steps[-1][0].to_str(self.base.var), "inf"])
        return out


def _sorted_factors(R):
    return sorted(factor(R), key=lambda fm: elt_key(fm[0]))


def approximants(f, base, irreducible=False, first_only=False):
    """One InfinitePoint per irreducible factor of f over the completion.

    f must be monic, integral and squarefree.  Over Q the polynomial is first
    split over Q; pass ``irreducible=True`` when f is known to be irreducible
    over the base field.  ``first_only`` stops at the branch reached through
    the lexicographically least residual factors.
    """
    F0 = base.field
    if not f.is_monic():
        raise ValueError("approximants need a monic polynomial")
    g0 = gauss(base)
    if g0.value(f) < 0:
        raise ValueError("approximants need an integral polynomial")
    if f.deg() < 1:
        return []
    from .base import poly_gcd

    if poly_gcd(f, f.derivative()).deg() > 0:
        raise ValueError("approximants need a squarefree polynomial")
    if F0 == QQ and not irreducible:
        facs = [g for g, _ in factor(f)]
    else:
        facs = [f]
    out = []
    for F in facs:
        out.extend(_branches(F, base, first_only))
    return out


def _branches(F, base, first_only=False):
    g0 = gauss(base)
    out = []
    R, _ = g0._residual(0, F)
    for psi, _ in _sorted_factors(R):
        _explore(g0, g0.lift_to_key(psi), F, out, first_only)
        if first_only and out:
            break
    return out


def _explore(mu, phi, F, out, first_only=False):
    for seg in mu.principal_segments(F, phi):
        if first_only and out:
            return
        if is_inf(seg.lam):
            out.append(InfinitePoint(F, mu.augment(phi, INF, check=False), True, len(out)))
            continue
        mu2 = mu.augment(phi, seg.lam, check=False)
        facs = _sorted_factors(mu2.residual_polynomial(F))
        if len(facs) == 1 and facs[0][1] == 1:
            psi = facs[0][0]
            if seg.length * phi.deg() == F.deg():
                out.append(InfinitePoint(F, mu2.augment(F, INF), True, len(out)))
            else:
                phi2 = mu2.lift_to_key(psi)
                lam2 = mu2.principal_segments(F, phi2)[0].lam
                out.append(InfinitePoint(F, mu2.augment(phi2, lam2, check=False), False, len(out)))
        else:
            for psi, _ in facs:
                _explore(mu2, mu2.lift_to_key(psi), F, out, first_only)
                if first_only and out:
                    return
