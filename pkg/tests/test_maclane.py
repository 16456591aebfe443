from fractions import Fraction

import pytest

from helpers import random_qpoly, random_valuation, rng_for
from regmodel.base import INF, Poly, qpoly
from regmodel.berktree import lt
from regmodel.maclane import InfinitePoint, PAdicBase, approximants, from_chain, gauss

x = qpoly([0, 1])
B2, B3, B5 = PAdicBase(2), PAdicBase(3), PAdicBase(5)
F2 = x**2 + 4 * x - 4  # (x+2)^2 - 8


def test_gauss_value():
    v = gauss(B3)
    assert v.value(9 * x**2 + 3) == 1
    assert v.value(qpoly([Fraction(1, 3), 9])) == -1
    assert v.value(qpoly([])) == INF


def test_augmented_values():
    v = gauss(B2).augment(x + 2, Fraction(3, 2))
    assert v.e == 2
    assert v.value(x) == 1
    assert v.value(F2) == 3
    assert v.is_key(F2)
    w = v.augment(F2, 4)
    assert w.value(x**2 + 4 * x + 12) == 4
    assert w.value(x**3 - 16) == 3


def test_is_key_rejects():
    v = gauss(B2).augment(x + 2, Fraction(3, 2))
    assert not v.is_key(x**2 + 4 * x + 8)
    assert not v.is_key(2 * x + 1)
    assert not gauss(B3).is_key(x**2 + 1 - 1)  # x^2 is reducible mod 3


def test_same_degree_key_replaces_step():
    v = gauss(B3).augment(x - 1, 1)
    w = v.augment(x + 8, 3)
    assert w.n == 1 and w.value(x - 1) == 2


def test_newton_polygon():
    v = gauss(B3)
    segs = v.newton_polygon((x - 3) * (x - 9), x)
    assert sorted(s.lam for s in segs) == [1, 2]


def test_uniformizer_and_witness():
    v = from_chain(B2, [(x + 2, Fraction(3, 2)), (F2, 4)])
    assert v.value(v.uniformizer_elt()) == Fraction(1, v.e)
    u = v.generator_witness()
    assert v.value(u) == 0
    K = v.residue_field()
    assert v.reduce_elt(u) == K(Poly.x(v.kappa))


def test_lift_to_key_roundtrip():
    v = gauss(B3).augment(x - 1, Fraction(3, 2))
    K = v.kappa
    psi = Poly(K, [K(1), K(0), K(1)])  # t^2 + 1, irreducible over F_3
    phi = v.lift_to_key(psi)
    assert v.is_key(phi) and phi.deg() == 4
    R = v.residual_polynomial(phi)
    assert R.monic() == psi


def test_approximants_split_and_inert():
    (pt,) = approximants(x**2 - 3, B3, irreducible=True)
    assert pt.value(x**2 - 3) == INF and pt.e == 2
    pts = approximants(x**2 - 1, B5)
    assert len(pts) == 2
    assert all(isinstance(p, InfinitePoint) for p in pts)
    (q,) = approximants(x**2 + 1, B3, irreducible=True)
    assert q.degree == 2


def test_chain_json():
    v = from_chain(B2, [(x + 2, Fraction(3, 2))])
    assert v.chain_json() == [["x + 2", "3/2"]]
    assert str(v) == "[v0, v(x + 2)=3/2]"


CHAINS = [(p, seed) for seed in range(20) for p in [(2, 3, 5)[seed % 3]]]


@pytest.mark.property
@pytest.mark.parametrize("p,seed", CHAINS)
def test_valuation_axioms(p, seed):
    rng = rng_for("axioms", p, seed)
    v = random_valuation(rng, p, rng.randint(1, 3))
    for _ in range(1000):
        f = random_qpoly(rng, p, rng.randint(0, 6))
        g = random_qpoly(rng, p, rng.randint(0, 6))
        a, b = v.value(f), v.value(g)
        assert v.value(f * g) == a + b
        s = v.value(f + g)
        assert s >= min(a, b)
        if a != b:
            assert s == min(a, b)


@pytest.mark.property
@pytest.mark.parametrize("p,seed", CHAINS)
def test_minimal_chain_and_predecessors(p, seed):
    rng = rng_for("chain", p, seed)
    v = random_valuation(rng, p, rng.randint(1, 4))
    preds = v.predecessors() + [v]
    for k in range(1, len(preds)):
        u, w = preds[k - 1], preds[k]
        phi, lam = w.steps[-1]
        assert u.is_key(phi)
        assert u.value(phi) < lam
        assert lt(u, w)
        if k >= 2:
            assert phi.deg() > u.steps[-1][0].deg()
        assert w.e % u.e == 0
    # values only increase along the chain
    f = random_qpoly(rng, p, 5)
    vals = [u.value(f) for u in preds]
    assert vals == sorted(vals)
