"""Shared strategies, independent oracles and CAD audit helpers for the tests."""

from __future__ import annotations

import random

import sympy
from gmpy2 import mpq
from hypothesis import strategies as st

from cadqe import AlgebraicNumber, Poly, isolate_roots
from cadqe.roots import compare

# ---------------------------------------------------------------------------
# hypothesis strategies
# ---------------------------------------------------------------------------

small_rationals = st.builds(lambda n, d: mpq(n, d), st.integers(-9, 9), st.integers(1, 4))
nonzero_rationals = small_rationals.filter(lambda q: q != 0)


@st.composite
def polys(draw, gens=("x", "y", "z"), max_deg=4, max_terms=5):
    """Random sparse polynomial of total degree <= max_deg over gens."""
    n = len(gens)
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        exps = draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n))
        while sum(exps) > max_deg:
            i = exps.index(max(exps))
            exps[i] -= 1
        terms[tuple(exps)] = draw(small_rationals)
    return Poly(gens, terms)


@st.composite
def univariate(draw, var="x", max_deg=3, min_deg=0, gens=None):
    gens = gens or (var,)
    d = draw(st.integers(min_deg, max_deg))
    cs = draw(st.lists(small_rationals, min_size=d + 1, max_size=d + 1))
    if d >= 1 and cs[-1] == 0:
        cs[-1] = mpq(1)
    return Poly.from_univariate(cs, var, gens)


points = st.fixed_dictionaries({v: small_rationals for v in ("x", "y", "z")})


# ---------------------------------------------------------------------------
# sympy as an independent oracle
# ---------------------------------------------------------------------------


def to_sympy(p: Poly):
    syms = sympy.symbols(p.gens)
    if not isinstance(syms, tuple):
        syms = (syms,)
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for s, e in zip(syms, exps):
            term *= s ** e
        expr += term
    return sympy.Poly(expr, *syms, domain="QQ")


def sympy_real_root_count(p: Poly) -> int:
    sp = to_sympy(p)
    if sp.is_zero or sp.total_degree() == 0:
        return 0
    return len(set(sympy.real_roots(sympy.Poly(sp.as_expr(), sympy.Symbol(p.main_var)))))


# ---------------------------------------------------------------------------
# model oracles
# ---------------------------------------------------------------------------


def heywood_image(r12, r13, r23) -> bool:
    """Is (r12, r13, r23) = (b1 b2, b1 b3, b2 b3) for some real b?

    Positive product: take b1 = sqrt(r12 r13 / r23) and so on.  With a zero
    coordinate some b_i is 0, which kills two coordinates, so at most one
    coordinate may be nonzero.
    """
    prod = r12 * r13 * r23
    if prod != 0:
        return prod > 0
    return sum(1 for r in (r12, r13, r23) if r != 0) <= 1


def parabola_min_oracle(a, b, c) -> bool:
    """(exists x1)(forall x2) a x2^2 + b x2 + c - x1 > 0, solved by hand."""
    return a > 0 or (a == 0 and b == 0)


def straddling_rationals(rng: random.Random, critical=(0,), spread=3):
    """Rationals that hit critical values, sit next to them, or land anywhere."""
    u = rng.random()
    c = mpq(rng.choice(critical))
    if u < 0.3:
        return c
    if u < 0.6:
        return c + mpq(rng.choice((-1, 1)), rng.randint(2, 50))
    return mpq(rng.randint(-spread * 12, spread * 12), rng.randint(1, 12))


# ---------------------------------------------------------------------------
# CAD audit: re-lift at rational prefixes
# ---------------------------------------------------------------------------


def roots_above(tree, level: int, prefix) -> list[AlgebraicNumber]:
    """Real roots in the level-th variable of the level family with a rational prefix plugged in."""
    gens = tree.gens
    binding = dict(zip(gens[: level - 1], prefix))
    unis = []
    for p in tree.family(level):
        q = p.subs(binding)
        if q:
            unis.append(q.set_gens((gens[level - 1],)) if q.variables() else q.set_gens(()))
    return isolate_roots([u for u in unis if u.variables()])


def rational_between(a: AlgebraicNumber | None, b: AlgebraicNumber | None, rng: random.Random) -> mpq:
    """Random rational strictly between two roots (None meaning an infinite end)."""
    if a is None and b is None:
        return mpq(rng.randint(-20, 20), rng.randint(1, 5))
    if a is None:
        return b.lo - mpq(rng.randint(1, 40), rng.randint(1, 8))
    if b is None:
        return a.hi + mpq(rng.randint(1, 40), rng.randint(1, 8))
    while not a.hi < b.lo:
        a, b = (a.bisect(), b) if a.hi - a.lo >= b.hi - b.lo else (a, b.bisect())
    t = mpq(rng.randint(1, 999), 1000)
    return a.hi + (b.lo - a.hi) * t


def random_point_in_leaf(tree, leaf, rng: random.Random) -> list[mpq]:
    """A random rational point inside a full-dimensional leaf."""
    point: list[mpq] = []
    for cell in leaf.ancestors():
        roots = roots_above(tree, cell.level, point)
        j = cell.path[-1]
        assert j % 2 == 1, "full-dimensional cells are sectors at every level"
        i = (j - 1) // 2
        left = roots[i - 1] if i >= 1 else None
        right = roots[i] if i < len(roots) else None
        point.append(rational_between(left, right, rng))
    return point


def signs_at(tree, level: int, point) -> tuple:
    binding = dict(zip(tree.gens, point))
    out = []
    for p in tree.family(level):
        v = p.eval(binding)
        out.append((v > 0) - (v < 0))
    return tuple(out)


def locate(tree, point):
    """Walk down the tree to the unique leaf containing a rational point.

    At every level the roots above the point's prefix must match the number
    of sections among the children; the coordinate picks exactly one child.
    """
    cell = tree.root
    for k, x in enumerate(point, start=1):
        kids = cell.children
        roots = roots_above(tree, k, point[: k - 1])
        assert len(kids) == 2 * len(roots) + 1
        X = AlgebraicNumber.rational(x)
        idx = None
        for i, r in enumerate(roots):
            c = compare(X, r)
            if c == 0:
                idx = 2 * i + 1
                break
            if c < 0:
                idx = 2 * i
                break
        if idx is None:
            idx = 2 * len(roots)
        cell = kids[idx]
    return cell


def holds_exact(f, pt, gens) -> bool:
    """Exact truth of a quantifier-free formula at an algebraic SamplePoint over ``gens``."""
    from cadqe import And, Atom, Const, Iff, Implies, Not, Or

    if isinstance(f, Atom):
        s = pt.sign(f.poly.set_gens(tuple(gens)))
        return {"<": s < 0, "<=": s <= 0, "=": s == 0, "!=": s != 0, ">": s > 0, ">=": s >= 0}[f.rel]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, And):
        return all(holds_exact(a, pt, gens) for a in f.args)
    if isinstance(f, Or):
        return any(holds_exact(a, pt, gens) for a in f.args)
    if isinstance(f, Not):
        return not holds_exact(f.arg, pt, gens)
    if isinstance(f, Implies):
        return (not holds_exact(f.lhs, pt, gens)) or holds_exact(f.rhs, pt, gens)
    if isinstance(f, Iff):
        return holds_exact(f.lhs, pt, gens) == holds_exact(f.rhs, pt, gens)
    raise TypeError(f"not quantifier-free: {f!r}")


def sample_point(values: dict, gens):
    from cadqe import SamplePoint

    pt = SamplePoint.origin()
    for v in gens:
        pt = pt.extend(values[v])
    return pt


# ---------------------------------------------------------------------------
# acceptance bookkeeping
# ---------------------------------------------------------------------------

ACCEPTANCE: list[str] = []


class criterion:
    """Context manager recording one PASS/FAIL line for an acceptance criterion."""

    def __init__(self, number, title: str, budget: float | None = None):
        self.number, self.title, self.budget = number, title, budget

    def __enter__(self):
        import time

        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        import time

        dt = time.perf_counter() - self.t0
        over = self.budget is not None and dt > self.budget
        ok = exc_type is None and not over
        note = f" (over the {self.budget:g} s budget)" if over and exc_type is None else ""
        if exc_type is not None:
            note = f" ({exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        line = f"criterion {self.number}: {'PASS' if ok else 'FAIL'} {self.title} [{dt:.2f} s]{note}"
        ACCEPTANCE.append(line)
        print(line)
        if over and exc_type is None:
            raise AssertionError(line)
        return False
