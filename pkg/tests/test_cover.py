import random
from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from helpers import rng_for
from regmodel.base import qpoly, valp
from regmodel.cover import (
    QX,
    CurveError,
    DiffLattice,
    SuperellipticCurve,
    YFieldElem,
    integral_basis,
    intersect_lattices,
    is_reduced,
    kbasis,
    lattice_of,
    module_basis,
    reduced_basis,
    w_of_eta,
)
from regmodel.cover import _value_group_index
from regmodel.sheaf import order_dx

x = qpoly([0, 1])
Q = Fraction
EX1 = (3, 4, (x**2 + 81) * ((x - 1) ** 2 - 27))
EX2 = (2, 3, (x**3 - 16) * ((x + 2) ** 2 + 8) * ((x + 2) ** 2 - 8))
GOOD = (5, 2, x**3 + 1)
EXAMPLES = {"ex1": EX1, "ex2": EX2, "good": GOOD}
_cache = {}


def result(name):
    if name not in _cache:
        _cache[name] = integral_basis(SuperellipticCurve(*EXAMPLES[name]))
    return _cache[name]


def test_curve_validation():
    with pytest.raises(CurveError):
        SuperellipticCurve(2, 2, x**3 + 1)
    with pytest.raises(CurveError):
        SuperellipticCurve(3, 2, (x - 1) ** 2 * (x + 1))
    with pytest.raises(CurveError):
        SuperellipticCurve(3, 2, x**2 + 1)
    with pytest.raises(CurveError):
        SuperellipticCurve(3, 2, 2 * x**3 + 1)
    with pytest.raises(CurveError):
        SuperellipticCurve(3, 2, x**4)


def test_kbasis_examples():
    assert [str(b) for b in kbasis(SuperellipticCurve(*EX1))] == ["1", "x", "y"]
    assert [str(b) for b in kbasis(SuperellipticCurve(*EX2))] == ["1", "x", "x^2", "x^3", "y", "x*y"]
    assert [str(b) for b in kbasis(SuperellipticCurve(*GOOD))] == ["1"]


@pytest.mark.parametrize("n,r", [(2, 3), (2, 4), (2, 5), (3, 4), (3, 6), (4, 4), (5, 3), (6, 4), (4, 6)])
def test_genus_formula(n, r):
    # f squarefree with f(0) != 0: g = ((n-1)(r-1) - gcd(n, r) + 1) / 2
    f = qpoly([1])
    for a in range(1, r + 1):
        f = f * (x - a * 7)
    C = SuperellipticCurve(7 if gcd(7, n) == 1 else 11, n, f)
    assert C.genus == ((n - 1) * (r - 1) - gcd(n, r) + 1) // 2


def test_extension_data():
    C = SuperellipticCurve(*EX2)
    for row in result("ex2").rows:
        assert C.n * row.wy == row.v.value(C.f)


def test_good_reduction():
    R = result("good")
    assert [str(b) for b in R.basis] == ["1"]
    assert [str(r.v) for r in R.rows] == ["[v0]"]
    assert R.rows[0].weta == 0


def test_module_basis_trivial_bound():
    R = result("ex1")
    row = R.rows[0]
    assert module_basis(row.w, 0, row.reduced) == row.reduced


def _rows_param():
    return [("ex1", k) for k in range(6)] + [("ex2", k) for k in range(9)] + [("good", 0)]


@pytest.mark.property
@pytest.mark.parametrize("name,k", _rows_param())
def test_reduced_basis_random_coefficients(name, k):
    row = result(name).rows[k]
    w, B = row.w, row.reduced
    p = w.curve.p
    vals = [w.value(b) for b in B]
    rng = rng_for("reduced", name, k)
    for _ in range(500):
        a = [Q(rng.randint(-30, 30) * p ** rng.randint(0, 3), rng.choice([1, 1, 7, p])) for _ in B]
        if not any(a):
            continue
        g = None
        for c, b in zip(a, B):
            g = b.scale(c) if g is None else g + b.scale(c)
        assert w.value(g) == min(valp(c, p) + val for c, val in zip(a, vals) if c)


@pytest.mark.parametrize("name,k", _rows_param())
def test_reduced_basis_idempotent(name, k):
    row = result(name).rows[k]
    assert is_reduced(row.w, row.reduced)
    again = reduced_basis(row.w, row.reduced)
    assert [row.w.value(b) for b in again] == [row.w.value(b) for b in row.reduced]


@pytest.mark.parametrize("name,k", _rows_param())
def test_shortcut_consistency(name, k):
    row = result(name).rows[k]
    w, v, C = row.w, row.v, row.w.curve
    rng = rng_for("shortcut", name, k)
    checked = 0
    for _ in range(200):
        coeffs = []
        for _i in range(C.n):
            if rng.random() < 0.4:
                coeffs.append(QX.zero)
                continue
            cs = [Q(rng.randint(-9, 9) * C.p ** rng.randint(0, 3)) for _ in range(rng.randint(1, 4))]
            coeffs.append(QX(qpoly(cs)))
        if all(c.is_zero() for c in coeffs):
            continue
        terms = [v.value(c.num) + i * w.wy for i, c in enumerate(coeffs) if not c.is_zero()]
        if len(set(terms)) != len(terms):
            continue
        assert w.value(YFieldElem(C, coeffs)) == min(terms)
        checked += 1
    assert checked > 20


@pytest.mark.property
@pytest.mark.parametrize("name,k", _rows_param())
def test_ramification_shift(name, k):
    row = result(name).rows[k]
    v, w, C = row.v, row.w, row.w.curve
    e = w.e
    # e agrees with the index of the value group generated by w(y)
    assert e == _value_group_index(v, w.wy)
    # the v-uniformizer is a unit times Pi^e for some Pi of value 1/(e_v e)
    ev = v.e
    t1 = QX(v.uniformizer_elt())
    sol = next(
        (int(a), b)
        for b in range(C.n)
        for a in [(Q(1, ev * e) - b * w.wy) * ev]
        if a.denominator == 1
    )
    Pi = YFieldElem(C, [QX.zero] * sol[1] + [t1 ** sol[0]])
    assert w.value(Pi) == Q(1, ev * e)
    assert w.value(YFieldElem(C, [t1])) == e * w.value(Pi)
    # w(dx) - v(dx) = e - 1 in the table normalization
    wdx = w_of_eta(v, w, C, row.vdx) + (C.n - 1) * w.wy
    assert wdx - order_dx(v) == e - 1


def _rand_lattice(rng, p, d):
    gens = []
    for _ in range(d + rng.randint(0, 2)):
        gens.append([Q(rng.randint(-4, 4) * rng.choice([1, 1, 5, 7]), 1) * Q(p) ** rng.randint(-1, 2) for _ in range(d)])
    for i in range(d):
        e = [Q(0)] * d
        e[i] = Q(p) ** rng.randint(-1, 2)
        gens.append(e)
    return DiffLattice(p, gens)


@pytest.mark.property
@pytest.mark.parametrize("p,d,seed", [(p, d, s) for p in (2, 3) for d in (2, 3) for s in range(4)])
def test_intersection_brute_force(p, d, seed):
    rng = rng_for("lattice", p, d, seed)
    L1, L2 = _rand_lattice(rng, p, d), _rand_lattice(rng, p, d)
    I = intersect_lattices(L1, L2)
    assert I == intersect_lattices(L2, L1)
    K = 2 if p == 2 else 1
    span = range(-(p ** (2 * K)) // 2, p ** (2 * K) // 2 + 1)
    step = Q(1, p**K)
    hits = 0
    for c in product(span, repeat=d):
        vec = [ci * step for ci in c]
        inside = L1.contains(vec) and L2.contains(vec)
        hits += inside
        assert I.contains(vec) == inside
    assert hits > 1


def test_intersection_examples():
    p = 3
    A = DiffLattice(p, [[p, 0], [0, 1]])
    B = DiffLattice(p, [[1, 0], [0, p]])
    assert A.intersect(B) == DiffLattice(p, [[p, 0], [0, p]])
    assert A.intersect(A) == A


@pytest.mark.property
def test_canonical_form_is_basis_independent():
    rng = random.Random(7)
    for _ in range(50):
        p, d = rng.choice([2, 3, 5]), rng.choice([2, 3])
        L = _rand_lattice(rng, p, d)
        # unimodular change of basis over Z_(p)
        cols = [list(c) for c in L.cols]
        for _ in range(5):
            i, j = rng.sample(range(d), 2)
            m = rng.randint(-3, 3)
            cols[i] = [a + m * b for a, b in zip(cols[i], cols[j])]
        u = rng.choice([1, -1, 2 if p != 2 else 3])
        cols[0] = [a * u for a in cols[0]]
        assert DiffLattice(p, cols) == L


@pytest.mark.property
@pytest.mark.parametrize("name", ["ex1", "ex2"])
def test_order_invariance(name):
    C = SuperellipticCurve(*EXAMPLES[name])
    base = result(name)
    k = len(base.rows)
    rng = rng_for("order", name)
    orders = [list(reversed(range(k)))]
    for _ in range(2):
        o = list(range(k))
        rng.shuffle(o)
        orders.append(o)
    for o in orders:
        assert integral_basis(C, order=o, model=base.model).lattice == base.lattice


def test_per_valuation_lattices_contain_final():
    R = result("ex1")
    C = R.curve
    for row in R.rows:
        Lv = lattice_of(C, row.module)
        assert all(Lv.contains(col) for col in R.lattice.cols)
