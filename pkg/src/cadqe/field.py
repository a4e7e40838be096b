"""Simple real algebraic extensions ``Q(gamma)`` with lazy splitting.

Elements are dense coefficient lists in the generator ``t``, reduced modulo a
squarefree (not necessarily irreducible) polynomial ``m`` with ``m(gamma) = 0``.
Whenever a zero test meets a proper factor of ``m``, the field shrinks ``m`` to
the factor that still vanishes at ``gamma``.  Results computed before the split
stay valid, since the new modulus divides the old one.

Polynomials over such a field ("K-polynomials") are lists of elements, lowest
degree first.
"""

from __future__ import annotations

from gmpy2 import mpq

from . import univariate as U
from .polynomial import UsageError
from .roots import AlgebraicNumber, isolate_univariate, sturm_count

__all__ = ["NumberField", "norm", "primitive_element"]


class NumberField:
    """The real field generated over Q by one algebraic number."""

    __slots__ = ("gamma", "m")

    def __init__(self, gamma: AlgebraicNumber):
        if gamma.is_rational:
            gamma = AlgebraicNumber.rational(0)
        self.gamma = gamma
        self.m = U.monic(list(gamma.poly))

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls(AlgebraicNumber.rational(0))

    @property
    def degree(self) -> int:
        return len(self.m) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    # -- element arithmetic ----------------------------------------------

    def reduce(self, a: list) -> list:
        if len(a) < len(self.m):
            return U.trim(list(a))
        return U.rem(a, self.m)

    def const(self, c) -> list:
        c = mpq(c)
        return [c] if c else []

    def gen(self) -> list:
        if self.is_rational:
            return self.const(-self.m[0])
        return [mpq(0), mpq(1)]

    def add(self, a, b):
        return U.add(a, b)

    def sub(self, a, b):
        return U.sub(a, b)

    def mul(self, a, b):
        if not a or not b:
            return []
        if len(a) == 1:
            return U.scale(b, a[0])
        if len(b) == 1:
            return U.scale(a, b[0])
        return self.reduce(U.mul(a, b))

    def is_zero(self, a: list) -> bool:
        """Exact test ``a(gamma) == 0``; may shrink the modulus."""
        a = self.reduce(a)
        if not a:
            return True
        if len(a) == 1:
            return False
        g = U.gcd(self.m, a)
        if len(g) == 1:
            return False
        if self._vanishes_at_gamma(g):
            self._shrink(g)
            return True
        self._shrink(U.exquo(self.m, g))
        return False

    def _vanishes_at_gamma(self, g: list) -> bool:
        gam = self.gamma
        if gam.is_rational:
            return U.evaluate(g, gam.lo) == 0
        return sturm_count(g, gam.lo, gam.hi) == 1

    def _shrink(self, factor: list):
        self.m = U.monic(factor)
        poly = U.primitive(factor)
        if len(poly) == 2:
            self.gamma = AlgebraicNumber.rational(-poly[0] / poly[1])
            self.m = U.monic(list(self.gamma.poly))
        else:
            self.gamma = AlgebraicNumber(poly, self.gamma.lo, self.gamma.hi)

    def enclosure(self, a: list) -> tuple[mpq, mpq]:
        a = self.reduce(a)
        gam = self.gamma
        if gam.is_rational:
            v = U.evaluate(a, gam.lo)
            return v, v
        return U.interval_eval(a, gam.lo, gam.hi)

    def refine(self):
        self.gamma = self.gamma.bisect()
        if self.gamma.is_rational:
            self.m = U.monic(list(self.gamma.poly))

    def sign(self, a: list) -> int:
        """Exact sign of ``a(gamma)``."""
        a = self.reduce(a)
        if not a:
            return 0
        if len(a) == 1:
            return U.sign(a[0])
        if self.is_zero(a):
            return 0
        while True:
            lo, hi = self.enclosure(a)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if lo == hi == 0:
                # the generator collapsed onto a rational root
                return 0
            self.refine()

    def inv(self, a: list) -> list:
        """Inverse of an element known to be nonzero at ``gamma``."""
        if self.is_zero(a):
            raise ZeroDivisionError("element vanishes at the generator")
        a = self.reduce(a)
        if len(a) == 1:
            return [1 / a[0]]
        g, s, _ = U.xgcd(a, self.m)
        if len(g) != 1:
            # the zero test already split off any common factor
            raise ArithmeticError("non-invertible element after splitting")
        return self.reduce(s)

    def value(self, a: list) -> mpq:
        a = self.reduce(a)
        if not a:
            return mpq(0)
        if len(a) == 1:
            return a[0]
        raise UsageError("element is not rational")

    # -- polynomials over the field ---------------------------------------

    def ptrim(self, P: list) -> list:
        P = [self.reduce(c) for c in P]
        while P and self.is_zero(P[-1]):
            P.pop()
        return P

    def pmonic(self, P: list) -> list:
        inv = self.inv(P[-1])
        out = [self.mul(c, inv) for c in P[:-1]]
        out.append([mpq(1)])
        return out

    def pdiff(self, P: list) -> list:
        return self.ptrim([U.scale(P[i], mpq(i)) for i in range(1, len(P))])

    def prem(self, A: list, B: list) -> list:
        """Remainder of ``A`` by a monic-izable nonzero ``B`` (both trimmed)."""
        B = self.pmonic(B)
        r = [list(c) for c in A]
        db = len(B) - 1
        while len(r) - 1 >= db and r:
            lead = r[-1]
            shift = len(r) - 1 - db
            if lead:
                for i in range(db):
                    r[i + shift] = U.sub(r[i + shift], self.mul(lead, B[i]))
            r.pop()
            r = self.ptrim(r)
        return r

    def pgcd(self, A: list, B: list) -> list:
        """Monic gcd at ``gamma`` (inputs trimmed)."""
        A, B = self.ptrim(A), self.ptrim(B)
        while B:
            A, B = B, self.prem(A, B)
        if not A:
            return []
        return self.pmonic(A)

    def pquo(self, A: list, B: list) -> list:
        """Exact quotient of ``A`` by monic ``B``."""
        r = [list(c) for c in A]
        db = len(B) - 1
        q = [[] for _ in range(len(r) - db)]
        for k in range(len(r) - 1 - db, -1, -1):
            c = self.reduce(r[k + db])
            q[k] = c
            if c:
                for j in range(db + 1):
                    r[k + j] = U.sub(r[k + j], self.mul(c, B[j]))
        return self.ptrim(q)

    def psquarefree(self, P: list) -> list:
        """Monic squarefree part at ``gamma``."""
        P = self.ptrim(P)
        if len(P) <= 2:
            return self.pmonic(P) if len(P) == 2 else P
        g = self.pgcd(P, self.pdiff(P))
        P = self.pmonic(P)
        if len(g) > 1:
            P = self.pquo(P, g)
        return P

    def peval(self, P: list, x) -> list:
        acc: list = []
        x = mpq(x)
        for c in reversed(P):
            acc = U.add(U.scale(acc, x), c)
        return self.reduce(acc)

    def psturm(self, P: list) -> list:
        seq = [P, self.pdiff(P)]
        if not seq[1]:
            return seq[:1]
        while True:
            r = self.prem(seq[-2], seq[-1])
            if not r:
                break
            seq.append([U.neg(c) for c in r])
        return seq

    def pvariations(self, seq: list, x) -> int:
        count, last = 0, 0
        for q in seq:
            s = self.sign(self.peval(q, x))
            if s:
                if last and s != last:
                    count += 1
                last = s
        return count

    def pcount(self, seq: list, lo, hi) -> int:
        return self.pvariations(seq, lo) - self.pvariations(seq, hi)

    def penclosure(self, P: list, lo, hi) -> tuple[mpq, mpq]:
        """Enclosure of ``P(gamma, x)`` for ``x`` in ``[lo, hi]``."""
        a = b = mpq(0)
        for c in reversed(P):
            clo, chi = self.enclosure(c)
            prods = (a * lo, a * hi, b * lo, b * hi)
            a = min(prods) + clo
            b = max(prods) + chi
        return a, b

    def psign_at(self, P: list, x: AlgebraicNumber) -> tuple[int, AlgebraicNumber]:
        """Sign of ``P(gamma, x)`` when it is known to be nonzero."""
        while True:
            if x.is_rational:
                return self.sign(self.peval(P, x.lo)), x
            lo, hi = self.penclosure(P, x.lo, x.hi)
            if lo > 0:
                return 1, x
            if hi < 0:
                return -1, x
            x = x.bisect()
            self.refine()

    def lift_poly(self, P: list) -> list:
        """The K-polynomial as a dense list of Q[t] coefficient lists."""
        return [self.reduce(c) for c in P]


# -- norms and primitive elements ---------------------------------------------


def _interpolate(xs: list, ys: list) -> list:
    """Newton interpolation through ``(xs[i], ys[i])``."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly: list = []
    for i in range(n - 1, -1, -1):
        poly = U.add(U.mul(poly, [-xs[i], mpq(1)]), [coef[i]] if coef[i] else [])
    return poly


def _bivariate_at(S: list, x, shift=None) -> list:
    """``S(t, x)`` as a polynomial in ``t``; with ``shift = s`` use ``x - s*t``."""
    arg = [mpq(x)] if shift is None else U.trim([mpq(x), -mpq(shift)])
    acc: list = []
    for c in reversed(S):
        acc = U.add(U.mul(acc, arg), c)
    return acc


def _resultant_in_t(m: list, S: list, shift=None) -> list:
    d = (len(m) - 1) * (len(S) - 1)
    xs = [mpq(i) for i in range(d + 1)]
    ys = [U.resultant(m, _bivariate_at(S, x, shift)) for x in xs]
    return _interpolate(xs, ys)


def norm(K: NumberField, S: list) -> list:
    """``Res_t(m(t), S(t, x))`` for a monic K-polynomial ``S``."""
    return _resultant_in_t(K.m, K.lift_poly(S))


def real_roots_over(K: NumberField, S: list) -> list[AlgebraicNumber]:
    """Real roots of the monic squarefree ``S(gamma, x)``, increasing."""
    if len(S) == 2:
        r = K.mul(S[0], [mpq(-1)])
        if K.is_rational or len(K.reduce(r)) <= 1:
            return [AlgebraicNumber.rational(K.value(r) if r else 0)]
    if K.is_rational:
        coeffs = [K.value(c) for c in S]
        return isolate_univariate(coeffs)
    R = norm(K, S)
    cands = isolate_univariate(R)
    if not cands:
        return []
    seq = None
    out = []
    for r in cands:
        if r.is_rational:
            if K.is_zero(K.peval(S, r.lo)):
                out.append(r)
            continue
        # cheap exclusion by enclosure before the Sturm count
        lo, hi = K.penclosure(S, r.lo, r.hi)
        if lo > 0 or hi < 0:
            continue
        if seq is None:
            seq = K.psturm(S)
        if K.pcount(seq, r.lo, r.hi) == 1:
            out.append(r)
    return out


def primitive_element(K: NumberField, elems: list, S: list, rho: AlgebraicNumber):
    """Field ``K' = Q(rho + s*gamma)`` containing ``K`` and the root ``rho`` of ``S``.

    ``elems`` are elements of ``K``; returns ``(K', elems', rho')`` with the
    elements re-expressed over ``K'`` and ``rho'`` the element for ``rho``.
    """
    Sq = K.lift_poly(S)
    for s in _shifts():
        M = U.squarefree(_resultant_in_t(K.m, Sq, shift=s))
        gam2 = _locate_sum(M, rho, K, s)
        if gam2 is None:
            continue
        K2 = NumberField(gam2)
        if K2.is_rational:
            z = [K2.value(K2.gen())]
        else:
            z = [mpq(0), mpq(1)]
        # m(t) and S(t, z - s t) over K2, both as polynomials in t
        mt = [K2.const(c) for c in K.m]
        St = _substitute_shift(K2, Sq, z, s)
        g = K2.pgcd(mt, St)
        if len(g) != 2:
            continue
        phi = K2.mul(g[0], [mpq(-1)])
        new = [_compose(K2, e, phi) for e in elems]
        rho2 = K2.sub(z, U.scale(phi, mpq(s)))
        return K2, new, K2.reduce(rho2)
    raise ArithmeticError("no separating shift found")


def _shifts():
    k = 1
    while True:
        yield k
        yield -k
        k += 1


def _compose(K2: NumberField, e: list, phi: list) -> list:
    acc: list = []
    for c in reversed(e):
        acc = K2.add(K2.mul(acc, phi), [c] if c else [])
    return K2.reduce(acc)


def _substitute_shift(K2: NumberField, Sq: list, z: list, s) -> list:
    # sum_k S_k(t) * (z - s t)^k as a polynomial in t over K2
    lin = [K2.reduce(z), K2.const(-s)]
    acc: list = []
    for c in reversed(Sq):
        prod: list = []
        for i, a in enumerate(acc):
            for j, b in enumerate(lin):
                while len(prod) <= i + j:
                    prod.append([])
                prod[i + j] = K2.add(prod[i + j], K2.mul(a, b))
        for i, a in enumerate(c):
            while len(prod) <= i:
                prod.append([])
            prod[i] = K2.add(prod[i], K2.const(a))
        acc = prod
    return K2.ptrim(acc)


def _locate_sum(M: list, rho: AlgebraicNumber, K: NumberField, s) -> AlgebraicNumber | None:
    """The root of ``M`` equal to ``rho + s*gamma``."""
    roots = isolate_univariate(M)
    s = mpq(s)
    for _ in range(400):
        gam = K.gamma
        if s > 0:
            lo, hi = rho.lo + s * gam.lo, rho.hi + s * gam.hi
        else:
            lo, hi = rho.lo + s * gam.hi, rho.hi + s * gam.lo
        hits = [r for r in roots if not (r.hi < lo or r.lo > hi)]
        if len(hits) == 1:
            # the sum lies in [lo, hi] and is a root, so the lone hit is it
            return hits[0]
        if not hits:
            return None
        roots = [r.bisect() if (not (r.hi < lo or r.lo > hi)) else r for r in roots]
        rho = rho.bisect()
        K.refine()
    return None

