"""Regular models of the projective line with a normal crossing divisor.

A model is represented by a finite, inf-closed, predecessor-closed set of
MacLane (pseudo)valuations.  ``alg31`` builds it from a branch divisor and
``verify_regularity`` rechecks the local criteria independently.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import floor, gcd

from .base import QQ, valp
from .berktree import ValuationTree, inf, inf_closure, points_equal, residue_class_of
from .maclane import InductiveValuation, InfinitePoint, PAdicBase, approximants, gauss


# ---------------------------------------------------------------------------
# N-paths


def _lcm(a, b):
    return a * b // gcd(a, b)


def is_N_step(t1, t2, N):
    """t2 - t1 == N / (lcm(N, c1) * lcm(N, c2)) with c_i the reduced denominators."""
    t1, t2 = Fraction(t1), Fraction(t2)
    return t2 - t1 == Fraction(N, _lcm(N, t1.denominator) * _lcm(N, t2.denominator))


def _simplest_between(x, y):
    """The rational of least denominator in the open interval (x, y); y=None is +inf."""
    n = floor(x) + 1
    if y is None or n < y:
        return Fraction(n)
    fl = floor(x)
    xr, yr = x - fl, y - fl
    inner = _simplest_between(1 / yr, None if xr == 0 else 1 / xr)
    return fl + 1 / inner


def _farey_path(x, y):
    # N-steps become Farey adjacencies after scaling by N; every path from x
    # to y must pass the simplest rational strictly between them
    if y.numerator * x.denominator - x.numerator * y.denominator == 1:
        return [x, y]
    z = _simplest_between(x, y)
    return _farey_path(x, z)[:-1] + _farey_path(z, y)


def shortest_N_path(lam, lam2, N):
    """Shortest strictly increasing list lam = t_0 < ... < t_k = lam2 of N-steps."""
    lam, lam2 = Fraction(lam), Fraction(lam2)
    if not lam < lam2:
        raise ValueError("shortest_N_path needs lam < lam2")
    if N < 1:
        raise ValueError("N must be a positive integer")
    return [s / N for s in _farey_path(lam * N, lam2 * N)]


# ---------------------------------------------------------------------------
# Divisors and models


class DivisorSpec:
    """Monic integral squarefree factors over Q, plus the point at infinity."""

    def __init__(self, p, factors, include_infinity=True):
        self.p = p
        self.base = PAdicBase(p)
        self.include_infinity = include_infinity
        facs = []
        for f in factors:
            if f.field != QQ:
                raise TypeError("divisor factors must be polynomials over Q")
            if f.deg() < 1:
                continue
            if not f.is_monic():
                raise ValueError(f"factor {f} is not monic; normalize it with make_integral")
            if any(a and valp(a, p) < 0 for a in f.c):
                raise ValueError(f"factor {f} is not integral at p={p}; rescale it with make_integral")
            facs.append(f)
        from .base import factor as _factor
        from .base import poly_gcd

        split = []
        for f in facs:
            for g, m in _factor(f):
                if m > 1:
                    raise ValueError(f"factor {f} is not squarefree")
                split.append(g)
        for i, a in enumerate(split):
            for b in split[i + 1:]:
                if poly_gcd(a, b).deg() > 0:
                    raise ValueError("divisor factors must be pairwise coprime")
        self.factors = sorted(split, key=lambda g: (g.deg(), tuple(g.c)))
        self._points = None

    @classmethod
    def from_poly(cls, f, p, include_infinity=True):
        return cls(p, [f], include_infinity)

    def points(self):
        if self._points is None:
            pts = []
            for g in self.factors:
                pts.extend(approximants(g, self.base, irreducible=True))
            self._points = pts
        return self._points

    def horizontal(self):
        out = [g.to_str("x") for g in self.factors]
        if self.include_infinity:
            out.append("inf")
        return out


class ModelVals:
    """V* with its tree, provenance tags and horizontal divisor."""

    def __init__(self, p, points, provenance, horizontal, base=None):
        self.p = p
        self.base = base or PAdicBase(p)
        self.tree = ValuationTree(points)
        self.provenance = []
        for node in self.tree.nodes:
            tag = next(t for q, t in provenance if points_equal(q, node))
            self.provenance.append(tag)
        self.horizontal = list(horizontal)

    @property
    def nodes(self):
        return self.tree.nodes

    @property
    def finite(self):
        return [n for n in self.tree.nodes if not isinstance(n, InfinitePoint)]

    @property
    def infinite(self):
        return [n for n in self.tree.nodes if isinstance(n, InfinitePoint)]

    def finite_set(self):
        return set(self.finite)

    def to_json_obj(self):
        obj = {"p": self.p}
        obj.update(self.tree.to_json_obj())
        obj["horizontal"] = self.horizontal
        obj["provenance"] = self.provenance
        return obj

    def to_json(self):
        return json.dumps(self.to_json_obj(), indent=2)


def _pred(v):
    return v.prefix(v.n - 1)


def _finite_children(tree, i):
    return [tree.nodes[j] for j in tree.children(i) if not isinstance(tree.nodes[j], InfinitePoint)]


def alg32(tree, v):
    """Valuations to add for the node v of the tree, as (point, tag) pairs."""
    i = tree.index(v)
    out = []
    kids = _finite_children(tree, i)
    for w in kids:
        v0 = _pred(w)
        phi, lam2 = w.steps[-1]
        path = shortest_N_path(v.value(phi), lam2, v0.e)
        for t in path[1:-1]:
            out.append((InductiveValuation(v.base, v0.steps + ((phi, t),)), "N-path-step1"))
    if v.n >= 1:
        v0 = _pred(v)
        phi, lam = v.steps[-1]
        N = v0.e
        # horizontal successors do not count here: a branch through
        # D_v(phi_n) still needs the inserted valuations
        if (lam * N).denominator != 1 and all(w.value(phi) == lam for w in kids):
            lam2 = Fraction(floor(lam * N) + 1, N)
            for t in shortest_N_path(lam, lam2, N)[1:]:
                out.append((InductiveValuation(v.base, v0.steps + ((phi, t),)), "N-path-step2"))
    return out


def complete(points, base, tags=None):
    """Steps (1)-(3) of the construction applied to a set of points."""
    tagged = []

    def add(pt, tag):
        if not any(points_equal(pt, q) for q, _ in tagged):
            tagged.append((pt, tag))

    tags = tags or {}
    for pt in points:
        add(pt, tags.get(id(pt), "input"))
    add(gauss(base), "predecessor")
    for pt in list(points):
        for q in pt.predecessors():
            add(q, "predecessor")
    for q in inf_closure([q for q, _ in tagged]):
        add(q, "inf")
    tree2 = ValuationTree([q for q, _ in tagged])
    for node in tree2.nodes:
        if not isinstance(node, InfinitePoint):
            for q, tag in alg32(tree2, node):
                add(q, tag)
    return tagged


def alg31(D):
    """Valuation set of a regular model with normal crossing divisor."""
    tagged = complete(D.points(), D.base)
    return ModelVals(D.p, [q for q, _ in tagged], tagged, D.horizontal(), D.base)


def model_for(f, p, include_infinity=True):
    return alg31(DivisorSpec.from_poly(f, p, include_infinity))


# ---------------------------------------------------------------------------
# Verification


class RegularityReport:
    def __init__(self, ok, node=None, cls=None, reason=""):
        self.ok = ok
        self.node = node
        self.cls = cls
        self.reason = reason

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "regular, normal crossing: pass"
        where = f" at {self.node}" if self.node is not None else ""
        cls = f" class {self.cls}" if self.cls is not None else ""
        return f"fail{where}{cls}: {self.reason}"


def check_assumption(points):
    """None if predecessor- and inf-closed, else a failing report."""
    for pt in points:
        for q in pt.predecessors():
            if not any(points_equal(q, r) for r in points):
                return RegularityReport(False, pt, None, f"missing predecessor {q}")
    for i, a in enumerate(points):
        for b in points[i + 1:]:
            c = inf(a, b)
            if not any(points_equal(c, r) for r in points):
                return RegularityReport(False, a, None, f"missing infimum {c} with {b}")
    return None


def _lambda_in_prev_group(v):
    v0 = _pred(v)
    return (v.steps[-1][1] * v0.e).denominator == 1


def verify_regularity(model):
    """Check every relevant closed point of the special fiber."""
    nodes = list(model.nodes) if isinstance(model, ModelVals) else list(model)
    bad = check_assumption(nodes)
    if bad is not None:
        return bad
    tree = model.tree if isinstance(model, ModelVals) else ValuationTree(nodes)
    for i, v in enumerate(tree.nodes):
        if isinstance(v, InfinitePoint):
            continue
        phi_n = v.steps[-1][0] if v.n else None
        seen_phi_class = False
        for j in tree.children(i):
            w = tree.nodes[j]
            cls = residue_class_of(v, w)
            in_phi_class = phi_n is not None and w.value(phi_n) > v.value(phi_n)
            if in_phi_class:
                seen_phi_class = True
            if not isinstance(w, InfinitePoint):
                v0 = _pred(w)
                phi, lam2 = w.steps[-1]
                if not is_N_step(v.value(phi), lam2, v0.e):
                    return RegularityReport(
                        False, v, cls, f"components {v} and {w} do not meet transversally"
                    )
            elif v.n and in_phi_class and not _lambda_in_prev_group(v):
                return RegularityReport(False, v, cls, "singular point where a horizontal branch meets")
        if v.n and not seen_phi_class and not _lambda_in_prev_group(v):
            return RegularityReport(False, v, None, f"singular point in the class of {phi_n.to_str('x')}")
    return RegularityReport(True)


def component_graph(model):
    """Vertices, adjacency and where horizontal branches meet the special fiber."""
    tree = model.tree
    finite_idx = [i for i, n in enumerate(tree.nodes) if not isinstance(n, InfinitePoint)]
    edges = [(a, b) for a, b in tree.edges if a in finite_idx and b in finite_idx]
    horizontal = []
    for a, b in tree.edges:
        if b not in finite_idx:
            cls = residue_class_of(tree.nodes[a], tree.nodes[b])
            horizontal.append({"branch": str(tree.nodes[b]), "component": a, "class": cls.phi.to_str("x")})
    if "inf" in model.horizontal:
        root = next(i for i in finite_idx if tree.nodes[i].n == 0)
        horizontal.append({"branch": "inf", "component": root, "class": "inf"})
    return {"vertices": finite_idx, "edges": edges, "horizontal": horizontal}


__all__ = [
    "DivisorSpec",
    "ModelVals",
    "RegularityReport",
    "alg31",
    "alg32",
    "check_assumption",
    "complete",
    "component_graph",
    "is_N_step",
    "model_for",
    "shortest_N_path",
    "verify_regularity",
]
