"""Shared generators for the property suites."""

from __future__ import annotations

import random
from fractions import Fraction

from regmodel.base import QQ, Poly, is_irreducible, qpoly
from regmodel.maclane import PAdicBase, gauss


def random_valuation(rng, p, depth, max_degree=6):
    """A random finite inductive valuation over Q_p with at most depth steps."""
    v = gauss(PAdicBase(p))
    for _ in range(depth):
        K = v.kappa
        cur = v.steps[-1][0].deg() if v.n else 1
        d = rng.choice([1, 1, 2]) if cur * 2 * max(1, v.levels[v.n].h if v.n else 1) <= max_degree else 1
        psi = None
        for _try in range(50):
            cs = [K(rng.randrange(p)) for _ in range(d)] + [K(1)]
            cand = Poly(K, cs)
            if v.n and d == 1 and cand.c[0] == K.zero:
                continue
            if is_irreducible(cand):
                psi = cand
                break
        if psi is None:
            break
        phi = v.lift_to_key(psi)
        if phi.deg() > max_degree:
            break
        lam = v.value(phi) + Fraction(rng.randint(1, 5), rng.choice([1, 1, 2, 3, 4]))
        v = v.augment(phi, lam)
    return v


def random_qpoly(rng, p, deg, spread=3):
    """Random polynomial with coefficients of mixed p-adic size."""
    cs = []
    for _ in range(deg + 1):
        num = rng.randint(-9, 9) * p ** rng.randint(0, spread)
        den = rng.choice([1, 1, 1, p, 2 if p != 2 else 3])
        cs.append(Fraction(num, den))
    if not any(cs):
        cs[0] = Fraction(1)
    return qpoly(cs)


def rng_for(*parts):
    return random.Random("/".join(map(str, parts)))


__all__ = ["QQ", "random_qpoly", "random_valuation", "rng_for"]
