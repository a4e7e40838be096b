"""Real root isolation with Sturm sequences and exact real algebraic numbers."""

from __future__ import annotations

import functools
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq

from . import univariate as U
from .polynomial import Poly, UsageError

__all__ = [
    "AlgebraicNumber",
    "RootOnEndpoint",
    "root_bound",
    "sturm_count",
    "isolate_roots",
    "isolate_univariate",
    "compare",
    "simplest_between",
]


class RootOnEndpoint(ValueError):
    """An interval endpoint handed to :func:`sturm_count` is a root."""


def _as_dense(p) -> list:
    if isinstance(p, Poly):
        return p.univariate()
    return U.trim([mpq(c) for c in p])


class AlgebraicNumber:
    """A real root of ``poly`` isolated in ``(lo, hi)``, or the rational ``lo == hi``.

    ``poly`` is a squarefree, integer-primitive dense coefficient list.  For an
    irrational (or not yet recognised rational) number the open interval
    contains exactly one root of ``poly`` and neither endpoint is a root.
    """

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly: Sequence, lo, hi):
        self.poly = tuple(poly)
        self.lo = mpq(lo)
        self.hi = mpq(hi)

    @classmethod
    def rational(cls, value) -> "AlgebraicNumber":
        value = mpq(value)
        return cls((-value.numerator, value.denominator), value, value)

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> mpq:
        if not self.is_rational:
            raise UsageError("value of an irrational algebraic number")
        return self.lo

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def defining(self, var: str = "x") -> Poly:
        return Poly.from_univariate(self.poly, var, (var,))

    def bisect(self) -> "AlgebraicNumber":
        """One halving step; may collapse onto a rational root."""
        if self.is_rational:
            return self
        mid = (self.lo + self.hi) / 2
        sm = U.sign(U.evaluate(self.poly, mid))
        if sm == 0:
            return AlgebraicNumber.rational(mid)
        slo = U.sign(U.evaluate(self.poly, self.lo))
        if slo == sm:
            return AlgebraicNumber(self.poly, mid, self.hi)
        return AlgebraicNumber(self.poly, self.lo, mid)

    def refine(self, width) -> "AlgebraicNumber":
        """Return an equal number whose interval is narrower than ``width``."""
        a = self
        width = mpq(width)
        while not a.is_rational and a.hi - a.lo >= width:
            a = a.bisect()
        return a

    def try_rational(self, max_den_bits: int = 64) -> "AlgebraicNumber":
        """Collapse onto a rational root when one exists (rational root theorem)."""
        if self.is_rational:
            return self
        lead = abs(self.poly[-1])
        if lead.numerator.bit_length() > max_den_bits:
            return self
        L = int(lead.numerator)
        if self.degree == 1:
            return AlgebraicNumber.rational(-mpq(self.poly[0]) / mpq(self.poly[1]))
        a = self.refine(mpq(1, 2 * L * L))
        if a.is_rational:
            return a
        mid = (a.lo + a.hi) / 2
        cand = _closest_fraction(mid, L)
        if a.lo < cand < a.hi and U.evaluate(self.poly, cand) == 0:
            return AlgebraicNumber.rational(cand)
        return a

    def approx(self, digits: int = 10) -> str:
        """Decimal approximation with ``digits`` digits after the point."""
        a = self.refine(mpq(1, 10 ** (digits + 2)))
        x = (a.lo + a.hi) / 2
        q = gmpy2.mpz(10) ** digits
        n = x * q
        r = gmpy2.f_div(n.numerator * 2 + n.denominator, 2 * n.denominator)
        sign = "-" if r < 0 else ""
        r = abs(r)
        whole, frac = divmod(int(r), int(q))
        if digits == 0:
            return f"{sign}{whole}"
        return f"{sign}{whole}.{frac:0{digits}d}"

    def __float__(self):
        a = self.refine(mpq(1, 2**60))
        return float((a.lo + a.hi) / 2)

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicNumber({_fmt(self.lo)})"
        return f"AlgebraicNumber(root of {list(map(_fmt, self.poly))} in ({_fmt(self.lo)}, {_fmt(self.hi)}))"

    def __eq__(self, other):
        if not isinstance(other, AlgebraicNumber):
            return NotImplemented
        return compare(self, other) == 0

    def __lt__(self, other):
        return compare(self, other) < 0

    def __hash__(self):
        # equal numbers may carry different representations
        return 0


def _fmt(c) -> str:
    c = mpq(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _closest_fraction(x: mpq, max_den: int) -> mpq:
    from fractions import Fraction

    f = Fraction(int(x.numerator), int(x.denominator)).limit_denominator(max_den)
    return mpq(f.numerator, f.denominator)


def simplest_between(lo, hi) -> mpq:
    """Rational with the smallest denominator strictly inside ``(lo, hi)``."""
    lo, hi = mpq(lo), mpq(hi)
    if not lo < hi:
        raise UsageError("empty interval")
    if lo < 0 < hi:
        return mpq(0)
    if hi <= 0:
        return -_simplest_open(-hi, -lo)
    return _simplest_open(lo, hi)


def _simplest_open(a: mpq, b: mpq) -> mpq:
    # continued-fraction descent, 0 <= a < b
    n = gmpy2.f_div(a.numerator, a.denominator)
    if n + 1 < b:
        return mpq(n + 1)
    if a == n:
        inv = 1 / (b - n)
        return n + 1 / mpq(gmpy2.f_div(inv.numerator, inv.denominator) + 1)
    return n + 1 / _simplest_open(1 / (b - n), 1 / (a - n))


def root_bound(p) -> mpq:
    """Cauchy bound ``1 + max|a_k|/|a_n|``: all real roots lie in ``(-M, M)``."""
    c = _as_dense(p)
    if len(c) < 2:
        raise UsageError("constant polynomial has no root bound")
    return U.cauchy_bound(c)


@functools.lru_cache(maxsize=4096)
def _sturm(poly: tuple) -> tuple:
    return tuple(tuple(q) for q in U.sturm_sequence(list(poly)))


def sturm_count(p, lo, hi) -> int:
    """Number of distinct real roots of squarefree ``p`` in the open interval ``(lo, hi)``."""
    c = U.primitive(_as_dense(p))
    lo, hi = mpq(lo), mpq(hi)
    if not lo < hi:
        raise UsageError("sturm_count needs lo < hi")
    if len(c) < 2:
        if not c:
            raise UsageError("zero polynomial")
        return 0
    if U.evaluate(c, lo) == 0 or U.evaluate(c, hi) == 0:
        raise RootOnEndpoint(f"endpoint is a root of {c}")
    seq = _sturm(tuple(c))
    return U.sign_variations(seq, lo) - U.sign_variations(seq, hi)


def _count(seq, lo, hi) -> int:
    return U.sign_variations(seq, lo) - U.sign_variations(seq, hi)


@functools.lru_cache(maxsize=4096)
def _isolate_cached(poly: tuple) -> tuple:
    p = list(poly)
    if len(p) == 2:
        return (AlgebraicNumber.rational(-p[0] / p[1]),)
    seq = _sturm(poly)
    M = U.cauchy_bound(p)
    V = lambda x: U.sign_variations(seq, x)
    out = []
    stack = [(-M, M, V(-M), V(M))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append(AlgebraicNumber(p, lo, hi))
            continue
        mid = (lo + hi) / 2
        if U.evaluate(p, mid) == 0:
            out.append(AlgebraicNumber.rational(mid))
            # nudge both endpoints off the root until only it remains between them
            delta = (hi - lo) / 4
            while True:
                a, b = mid - delta, mid + delta
                if U.evaluate(p, a) and U.evaluate(p, b):
                    va, vb = V(a), V(b)
                    if va - vb == 1:
                        break
                delta /= 2
            stack.append((b, hi, vb, vhi))
            stack.append((lo, a, vlo, va))
        else:
            vm = V(mid)
            stack.append((mid, hi, vm, vhi))
            stack.append((lo, mid, vlo, vm))
    out = [r.try_rational() for r in out]
    out.sort(key=lambda r: r.lo)
    return tuple(out)


def isolate_univariate(p) -> list[AlgebraicNumber]:
    """Distinct real roots of one univariate polynomial, increasing."""
    c = _as_dense(p)
    if len(c) < 2:
        return []
    sq = U.squarefree(c)
    return list(_isolate_cached(tuple(sq)))


def isolate_roots(F: Iterable) -> list[AlgebraicNumber]:
    """All distinct real roots of the polynomials in ``F``, strictly increasing.

    Constants contribute nothing.  Intervals of the returned numbers are
    pairwise disjoint.
    """
    roots: list[AlgebraicNumber] = []
    for p in F:
        roots.extend(isolate_univariate(p))
    return merge_roots(roots)


def merge_roots(roots: list[AlgebraicNumber]) -> list[AlgebraicNumber]:
    """Sort and deduplicate, then refine neighbours until their intervals are disjoint."""
    roots = sorted_unique(roots)
    return separate(roots)


def sorted_unique(roots: list[AlgebraicNumber]) -> list[AlgebraicNumber]:
    out: list[AlgebraicNumber] = []
    for r in sorted(roots, key=functools.cmp_to_key(compare)):
        if out and compare(out[-1], r) == 0:
            continue
        out.append(r)
    return out


def separate(roots: list[AlgebraicNumber]) -> list[AlgebraicNumber]:
    roots = list(roots)
    for i in range(len(roots) - 1):
        a, b = roots[i], roots[i + 1]
        while a.hi >= b.lo and not (a.is_rational and b.is_rational):
            # strictly ordered numbers: shrinking eventually separates them
            if a.hi - a.lo >= b.hi - b.lo:
                a = a.bisect()
            else:
                b = b.bisect()
            if a.is_rational and b.is_rational:
                break
        roots[i], roots[i + 1] = a, b
    return roots


@functools.lru_cache(maxsize=8192)
def _gcd_cached(p: tuple, q: tuple) -> tuple:
    return tuple(U.primitive(U.gcd(list(p), list(q))))


def compare(a: AlgebraicNumber, b: AlgebraicNumber) -> int:
    """Exact comparison: -1, 0 or +1."""
    if a is b:
        return 0
    if a.is_rational and b.is_rational:
        return (a.lo > b.lo) - (a.lo < b.lo)
    if a.is_rational:
        return -compare(b, a)
    if b.is_rational:
        r = b.lo
        while True:
            if a.is_rational:
                return (a.lo > r) - (a.lo < r)
            if r <= a.lo:
                return 1
            if r >= a.hi:
                return -1
            if U.evaluate(a.poly, r) == 0:
                return 0
            a = a.bisect()
    if a.hi <= b.lo:
        return -1
    if b.hi <= a.lo:
        return 1
    g = list(_gcd_cached(a.poly, b.poly))
    if len(g) > 1:
        seq = _sturm(tuple(g))
        if _count(seq, a.lo, a.hi) == 1:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo < hi and _count(seq, lo, hi) == 1:
                return 0
    while True:
        if a.is_rational or b.is_rational:
            return compare(a, b)
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        if a.hi - a.lo >= b.hi - b.lo:
            a = a.bisect()
        else:
            b = b.bisect()
