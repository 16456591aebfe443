"""Order of vanishing of dx along the component of a type II valuation.

The component is cut out by a defining system (t1, t2): a uniformizer and a
generator of the residue field.  Their relation F(t1, t2) = 0 is found by
elimination, and v(dx) follows from the partial derivatives of F.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .base import QQ, RatFuncField

QX = RatFuncField(QQ, "x")
_X, T1, T2 = sympy.symbols("x T1 T2")


class DefiningSystem:
    def __init__(self, v, t1, t2, F=None):
        self.v = v
        self.t1 = t1
        self.t2 = t2
        self.F = F

    def __repr__(self):
        return f"DefiningSystem(t1={self.t1}, t2={self.t2}, F={self.F_str()})"

    def F_str(self):
        return None if self.F is None else str(self.F.as_expr())


def defining_system(v):
    """(t1, t2) from the valuation's uniformizer and generator witness."""
    if v.is_infinite:
        raise ValueError("defining systems exist only for finite valuations")
    ds = DefiningSystem(v, v.uniformizer_elt(), v.generator_witness())
    ds.F = defining_polynomial(ds)
    return ds


def _to_sympy(poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * _X**i for i, c in enumerate(poly.c))


def _eval_at(F, t1, t2):
    """F(t1, t2) as an element of Q(x)."""
    acc = QX.zero
    for (a, b), c in F.terms():
        acc = acc + QX(Fraction(int(c.p), int(c.q))) * t1**a * t2**b
    return acc


def defining_polynomial(ds):
    """Primitive irreducible F in Z[T1, T2] with F(t1, t2) = 0."""
    t1, t2 = QX(ds.t1), QX(ds.t2)
    r1 = sympy.expand(T1 * _to_sympy(t1.den) - _to_sympy(t1.num))
    r2 = sympy.expand(T2 * _to_sympy(t2.den) - _to_sympy(t2.num))
    if sympy.degree(r1, _X) == 0:
        res = r1
    elif sympy.degree(r2, _X) == 0:
        res = r2
    else:
        res = sympy.resultant(r1, r2, _X)
    _, facs = sympy.factor_list(sympy.expand(res), T1, T2)
    cands = []
    for g, _m in facs:
        P = sympy.Poly(g, T1, T2)
        if P.total_degree() == 0:
            continue
        if _eval_at(P, t1, t2).is_zero():
            cands.append(P)
    if not cands:
        raise AssertionError("elimination lost the relation between t1 and t2")
    F = min(cands, key=lambda P: (P.total_degree(), str(P.as_expr())))
    _, F = F.clear_denoms()
    F = F.primitive()[1]
    if F.LC(order="lex") < 0:
        F = -F
    return F


def _deriv(a):
    """d/dx of an element of Q(x)."""
    a = QX(a)
    num = a.num.derivative() * a.den - a.num * a.den.derivative()
    return QX.make(num, a.den * a.den)


def order_dx(v, ds=None):
    """v(dx) for the component E_v, in the normalization v(p) = 1."""
    ds = ds or defining_system(v)
    F = ds.F
    FT2 = F.diff(T2)
    if not FT2.is_zero:
        return v.value(_eval_at(FT2, ds.t1, ds.t2)) - v.value(_deriv(ds.t1))
    # on F = 0, dt1/F_T2 = -dt2/F_T1
    FT1 = F.diff(T1)
    if FT1.is_zero:
        raise AssertionError("both partial derivatives of F vanish")
    return v.value(_eval_at(FT1, ds.t1, ds.t2)) - v.value(_deriv(ds.t2))


def order_dx_both(v, ds):
    """Both partial-derivative formulas, None where a partial vanishes."""
    F = ds.F
    out = []
    for var, t in ((T2, ds.t1), (T1, ds.t2)):
        D = F.diff(var)
        out.append(None if D.is_zero else v.value(_eval_at(D, ds.t1, ds.t2)) - v.value(_deriv(t)))
    return tuple(out)


__all__ = ["DefiningSystem", "defining_polynomial", "defining_system", "order_dx", "order_dx_both", "T1", "T2"]
