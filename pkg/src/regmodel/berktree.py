"""Points of the Berkovich line as MacLane (pseudo)valuations, and finite trees of them.

Type II points are finite :class:`InductiveValuation` objects, type I points
are :class:`InfinitePoint` objects.  The set of points below any given point is
a chain, which is what makes infima and tree edges computable.
"""

from __future__ import annotations

import json

from .base import INF, is_inf
from .maclane import InductiveValuation, InfinitePoint, _expand, approximants, gauss


def kind(point):
    return "TypeI" if isinstance(point, InfinitePoint) else "TypeII"


def leq(a, b):
    """a <= b in the partial order of pseudovaluations."""
    if isinstance(a, InfinitePoint):
        return isinstance(b, InfinitePoint) and a == b
    return a.leq(b)


def lt(a, b):
    return leq(a, b) and not points_equal(a, b)


def points_equal(a, b):
    if isinstance(a, InfinitePoint) != isinstance(b, InfinitePoint):
        return False
    return a == b


def _walk(base, steps, w):
    """Largest u on the chain [v0, steps] with u <= w; flag True if all of it is."""
    u = gauss(base)
    for phi, lam in steps:
        s = w.value(phi)
        if s < lam:
            return u.augment(phi, s, check=False), False
        u = InductiveValuation(base, u.steps + ((phi, lam),))
    return u, True


def inf(v, w):
    """The infimum of two points over the same base."""
    if v.base != w.base:
        raise ValueError("points over different bases")
    if points_equal(v, w):
        return v
    if isinstance(v, InfinitePoint):
        u, full = _walk(v.base, v.stem.steps, w)
        if not full:
            return u
        t = v.value_of_xi(w)
        if is_inf(t):
            return v
        phi = v.approx.steps[-1][0]
        return v.stem.augment(phi, t, check=False)
    u, full = _walk(v.base, v.steps, w)
    return v if full else u


def _point_of(g, base):
    pts = approximants(g, base, irreducible=True)
    if len(pts) != 1 or not pts[0].exact:
        raise ValueError(
            f"{g.to_str(base.var)} is reducible over the completion; "
            "select one branch from approximants() and pass its point instead"
        )
    return pts[0]


def min_discoid_element(g, t, base, point=None):
    """Minimal valuation v with v(g) >= t, found on the approximant chain of g."""
    if t < 0:
        raise ValueError("discoid radius must be nonnegative")
    point = point or _point_of(g, base)
    steps = point.chain_steps()
    u = gauss(base)
    if u.value(g) >= t:
        return u
    for phi, lam in steps:
        nxt = u.augment(phi, lam, check=False) if not is_inf(lam) else None
        if nxt is not None and nxt.value(g) < t:
            u = nxt
            continue
        # the g-value along [u, phi = s] is min_j (a_j + j s), increasing in s
        s_star = u.value(phi)
        for j, gj in enumerate(_expand(g, phi)):
            if j and gj.c:
                s_star = max(s_star, (t - u.value(gj)) / j)
        return u.augment(phi, s_star, check=False)
    raise AssertionError("discoid bound never reached")


def same_residue_class(v, w1, w2):
    """Whether w1 and w2 (both above v) lie in the same residue class of v."""
    for w in (w1, w2):
        if not lt(v, w):
            raise ValueError(f"{w} is not strictly above {v}")
    return lt(v, inf(w1, w2))


class ResidueClass:
    """The residue class D_v(phi) of a type II point v."""

    def __init__(self, v, phi):
        self.v = v
        self.phi = phi

    def __eq__(self, other):
        return isinstance(other, ResidueClass) and self.v == other.v and self.v.is_equivalent(self.phi, other.phi)

    def __hash__(self):
        return hash((self.v, self.phi.deg()))

    def contains(self, w):
        return lt(self.v, w) and w.value(self.phi) > self.v.value(self.phi)

    def __repr__(self):
        return f"D_{self.v}({self.phi.to_str(self.v.base.var)})"


def residue_class_of(v, w):
    if not lt(v, w):
        raise ValueError(f"{w} is not strictly above {v}")
    keys = [phi for phi, _ in (w.chain_steps() if isinstance(w, InfinitePoint) else w.steps)]
    for phi in keys:
        if v.is_key(phi) and w.value(phi) > v.value(phi):
            return ResidueClass(v, phi)
    raise AssertionError("no key separates the points")


def _dedupe(points):
    out = []
    for p in points:
        if not any(points_equal(p, q) for q in out):
            out.append(p)
    return out


def inf_closure(points):
    pts = _dedupe(points)
    extra = [inf(a, b) for i, a in enumerate(pts) for b in pts[i + 1:]]
    return _dedupe(pts + extra)


def node_key(p):
    steps = p.chain_steps() if isinstance(p, InfinitePoint) else p.steps
    return (
        len(steps),
        tuple((phi.deg(), 1 if is_inf(lam) else 0, 0 if is_inf(lam) else lam) for phi, lam in steps),
        str(p),
    )


class ValuationTree:
    """Finite set of points with the edges of its Hasse diagram."""

    def __init__(self, nodes):
        self.nodes = sorted(_dedupe(nodes), key=node_key)
        self.edges = []
        self.parent = {}
        for j, w in enumerate(self.nodes):
            below = [i for i, u in enumerate(self.nodes) if i != j and lt(u, w)]
            if not below:
                continue
            top = below[0]
            for i in below[1:]:
                if lt(self.nodes[top], self.nodes[i]):
                    top = i
            self.parent[j] = top
            self.edges.append((top, j))
        self.edges.sort()

    @property
    def roots(self):
        return [i for i in range(len(self.nodes)) if i not in self.parent]

    def children(self, i):
        return [b for a, b in self.edges if a == i]

    def index(self, p):
        for i, q in enumerate(self.nodes):
            if points_equal(p, q):
                return i
        raise KeyError(str(p))

    def to_json_obj(self):
        return {
            "nodes": [n.chain_json() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
        }

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=2)

    def __len__(self):
        return len(self.nodes)


def build_tree(points):
    return ValuationTree(inf_closure(points))


def is_inf_closed(points):
    return all(any(points_equal(inf(a, b), c) for c in points) for a in points for b in points)


__all__ = [
    "INF",
    "ResidueClass",
    "ValuationTree",
    "build_tree",
    "inf",
    "inf_closure",
    "is_inf_closed",
    "kind",
    "leq",
    "lt",
    "min_discoid_element",
    "points_equal",
    "residue_class_of",
    "same_residue_class",
]
