"""Command-line frontend: ``regmodel model|differentials|tree``."""

from __future__ import annotations

import json
import re
import sys
import time
from fractions import Fraction

import click

from .base import QQ, Poly, factor, fmt_q
from .berktree import ValuationTree, inf_closure, is_inf_closed
from .cover import CurveError, SuperellipticCurve, integral_basis, is_reduced, lattice_of
from .maclane import InfinitePoint, PAdicBase, approximants, gauss
from .plmodel import DivisorSpec, alg31, component_graph, verify_regularity

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3


# ---------------------------------------------------------------------------
# Polynomial expressions


class PolyParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.msg, self.line, self.col = msg, line, col


_TOKEN = re.compile(r"\s+|\d+|x|[-+*/^()]")


def _tokens(src):
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise PolyParseError(f"unexpected character {src[pos]!r}", line, col)
        tok = m.group()
        if not tok.isspace():
            out.append((tok, line, col))
        for ch in tok:
            line, col = (line + 1, 1) if ch == "\n" else (line, col + 1)
        pos = m.end()
    out.append(("<end>", line, col))
    return out


class _Parser:
    def __init__(self, src):
        self.toks = _tokens(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise PolyParseError(msg, tok[1], tok[2])

    def parse(self):
        if self.peek()[0] == "<end>":
            self.fail("empty expression")
        e = self.expr()
        if self.peek()[0] != "<end>":
            self.fail(f"unexpected {self.peek()[0]!r}")
        return e

    def expr(self):
        acc = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self):
        acc = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op[0] == "*":
                acc = acc * rhs
            elif rhs.is_zero():
                self.fail("division by zero", op)
            elif rhs.deg() > 0:
                self.fail("not a polynomial: division by a non-constant", op)
            else:
                acc = acc.scale(1 / rhs.c[0])
        return acc

    def unary(self):
        if self.peek()[0] in ("-", "+"):
            op = self.take()[0]
            e = self.unary()
            return -e if op == "-" else e
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        op = self.take()
        exp = self.unary()
        if exp.deg() > 0 or exp.c and exp.c[0].denominator != 1:
            self.fail("exponent must be a constant integer", op)
        k = int(exp.c[0]) if exp.c else 0
        if k < 0:
            self.fail("not a polynomial: negative exponent", op)
        return base**k

    def atom(self):
        tok = self.take()
        if tok[0].isdigit():
            return Poly.const(QQ, Fraction(int(tok[0])))
        if tok[0] == "x":
            return Poly.x(QQ)
        if tok[0] == "(":
            e = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return e
        self.fail("expected a number, x or '('" if tok[0] != "<end>" else "unexpected end of input", tok)


def parse_poly(src):
    """Exact polynomial in x from an expression string."""
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# Reports


def _q(a):
    return fmt_q(Fraction(a))


def _divisor(p, f, include_infinity):
    if f.is_zero() or f.deg() < 1:
        raise click.UsageError("the divisor polynomial must be non-constant")
    facs = [g for g, _ in factor(f)]
    try:
        return DivisorSpec(p, facs, include_infinity)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(str(exc)) from None


def _tree_lines(tree, labels):
    out = []

    def walk(i, prefix, last, root):
        head = "" if root else prefix + ("└── " if last else "├── ")
        out.append(head + labels[i])
        kids = tree.children(i)
        nxt = "" if root else prefix + ("    " if last else "│   ")
        for k, j in enumerate(kids):
            walk(j, nxt, k == len(kids) - 1, False)

    for r in tree.roots:
        walk(r, "", True, True)
    return out


def model_doc(model, report=None):
    doc = {"command": "model"}
    doc["model"] = model.to_json_obj()
    doc["graph"] = component_graph(model)
    doc["verify"] = None if report is None else str(report)
    return doc


def _model_text(model, doc):
    labels = []
    for node, tag in zip(model.nodes, model.provenance):
        kind = "branch" if isinstance(node, InfinitePoint) else "component"
        labels.append(f"{node}  ({kind}, {tag})")
    lines = [f"p = {model.p}", f"finite valuations: {len(model.finite)}"]
    lines += _tree_lines(model.tree, labels)
    lines.append("horizontal divisor: " + ", ".join(model.horizontal))
    if doc["verify"] is not None:
        lines.append("verify: " + doc["verify"])
    return "\n".join(lines)


def differentials_doc(res, report=None):
    C = res.curve
    pts = C.interior_points()
    coords = []
    for i, j in pts:
        xs = "" if i == 1 else ("x" if i == 2 else f"x^{i - 1}")
        ys = "" if j == 1 else ("y" if j == 2 else f"y^{j - 1}")
        coords.append("*".join(s for s in (xs, ys) if s) or "1")
    rows = []
    for r in res.rows:
        rows.append(
            {
                "valuation": str(r.v),
                "chain": r.v.chain_json(),
                "w_y": _q(r.wy),
                "w_eta": _q(r.weta),
                "e": r.e,
                "v_dx": _q(r.vdx),
                "reduced_basis": [str(b) for b in r.reduced],
                "module_basis": [str(b) for b in r.module],
            }
        )
    return {
        "command": "differentials",
        "p": C.p,
        "n": C.n,
        "f": C.f.to_str("x"),
        "eta": "dx/y" if C.n == 2 else f"dx/y^{C.n - 1}",
        "genus": C.genus,
        "model": res.model.to_json_obj(),
        "rows": rows,
        "coordinates": coords,
        "basis": [str(b) for b in res.basis],
        "basis_matrix": [[_q(a) for a in col] for col in res.lattice.cols],
        "verify": None if report is None else report,
    }


def _differentials_text(doc):
    lines = [f"y^{doc['n']} = {doc['f']} at p = {doc['p']}, genus {doc['genus']}, eta = {doc['eta']}"]
    head = ("valuation", "w(y)", "e", "v(dx)", "w(eta)")
    table = [head] + [(r["valuation"], r["w_y"], str(r["e"]), r["v_dx"], r["w_eta"]) for r in doc["rows"]]
    widths = [max(len(t[k]) for t in table) for k in range(len(head))]
    for t in table:
        lines.append("  ".join(s.ljust(w) for s, w in zip(t, widths)).rstrip())
    lines.append("basis of integral forms (times " + doc["eta"] + "):")
    lines += ["  " + b for b in doc["basis"]]
    lines.append("coordinates: " + ", ".join(doc["coordinates"]))
    lines += ["  [" + ", ".join(col) + "]" for col in doc["basis_matrix"]]
    if doc["verify"] is not None:
        lines.append("verify: " + doc["verify"])
    return "\n".join(lines)


def tree_doc(p, f):
    base = PAdicBase(p)
    pts = []
    for g, _ in factor(f):
        pts.extend(approximants(g, base, irreducible=True))
    pts += [q for pt in pts for q in pt.predecessors()]
    nodes = inf_closure(pts + [gauss(base)])
    tree = ValuationTree(nodes)
    obj = {"command": "tree", "p": p}
    obj.update(tree.to_json_obj())
    obj["kinds"] = ["TypeI" if isinstance(n, InfinitePoint) else "TypeII" for n in tree.nodes]
    return tree, obj


# ---------------------------------------------------------------------------
# Commands


def _emit(doc, text, fmt):
    if fmt == "json":
        click.echo(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        click.echo(text)


def _prime(ctx, param, value):
    if value is None:
        return value
    if value < 2 or any(value % d == 0 for d in range(2, int(value**0.5) + 1)):
        raise click.BadParameter(f"{value} is not a prime")
    return value


def _poly(ctx, param, value):
    try:
        return parse_poly(value)
    except PolyParseError as exc:
        raise click.BadParameter(str(exc)) from None


_common = [
    click.option("--p", "p", type=int, required=True, callback=_prime, help="Residue characteristic."),
    click.option("--poly", "poly", required=True, callback=_poly, help="Polynomial in x, e.g. \"(x^2+3^4)*(x-1)\"."),
    click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Regular models of the projective line and integral differentials of y^n = f(x)."""


@main.command()
@_with_common
@click.option("--include-infinity", type=click.Choice(["on", "off"]), default="on", show_default=True)
@click.option("--verify", type=click.Choice(["strict", "off"]), default="strict", show_default=True)
@click.option("--timing", is_flag=True, help="Report the running time on stderr.")
def model(p, poly, fmt, include_infinity, verify, timing):
    """Regular model with normal crossing divisor for the zeros of POLY."""
    t0 = time.perf_counter()
    D = _divisor(p, poly, include_infinity == "on")
    M = alg31(D)
    report = None
    if verify == "strict":
        report = verify_regularity(M)
        if not report or not is_inf_closed(M.nodes):
            click.echo(f"verification failed: {report}", err=True)
            sys.exit(EXIT_VERIFY)
    doc = model_doc(M, report)
    _emit(doc, _model_text(M, doc), fmt)
    if timing:
        click.echo(f"time: {time.perf_counter() - t0:.3f}s", err=True)


@main.command()
@_with_common
@click.option("--n", "n", type=int, required=True, help="Exponent of y.")
@click.option("--verify", type=click.Choice(["strict", "off"]), default="strict", show_default=True)
@click.option("--timing", is_flag=True, help="Report the running time on stderr.")
def differentials(p, poly, fmt, n, verify, timing):
    """Basis of the integral differential forms of y^n = POLY."""
    t0 = time.perf_counter()
    try:
        C = SuperellipticCurve(p, n, poly)
    except CurveError as exc:
        raise click.UsageError(str(exc)) from None
    res = integral_basis(C)
    report = None
    if verify == "strict":
        problems = []
        rep = verify_regularity(res.model)
        if not rep:
            problems.append(str(rep))
        for r in res.rows:
            if not is_reduced(r.w, r.reduced):
                problems.append(f"basis at {r.v} is not reduced")
            Lv = lattice_of(C, r.module)
            if any(not Lv.contains(col) for col in res.lattice.cols):
                problems.append(f"final lattice not contained in the module at {r.v}")
        if problems:
            click.echo("verification failed: " + "; ".join(problems), err=True)
            sys.exit(EXIT_VERIFY)
        report = "pass"
    doc = differentials_doc(res, report)
    _emit(doc, _differentials_text(doc), fmt)
    if timing:
        click.echo(f"time: {time.perf_counter() - t0:.3f}s", err=True)


@main.command()
@_with_common
def tree(p, poly, fmt):
    """Tree of the zeros of POLY with their predecessors and infima, before regularization."""
    if poly.is_zero() or poly.deg() < 1:
        raise click.UsageError("the polynomial must be non-constant")
    try:
        _divisor(p, poly, False)
        T, doc = tree_doc(p, poly)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(str(exc)) from None
    labels = [f"{n}  ({k})" for n, k in zip(T.nodes, doc["kinds"])]
    _emit(doc, "\n".join(_tree_lines(T, labels)), fmt)


__all__ = ["PolyParseError", "main", "parse_poly"]
