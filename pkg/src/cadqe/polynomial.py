"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` lives over an explicit, ordered tuple of variable names
(``gens``).  Level ``k`` of a CAD corresponds to ``gens[k - 1]``; the last
variable a polynomial actually involves is its *main variable*, and the
recursive view ``Q[x1..x(k-1)][xk]`` is obtained with :meth:`Poly.coeffs`.

Monomials are packed into a single Python int, ``W`` bits per variable with
variable ``i`` at bit offset ``i * W``.  Integer order of packed keys is then
lexicographic order with the *last* variable most significant, which is the
order used for leading terms everywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "Poly",
    "UsageError",
    "Q",
    "poly_arith",
    "poly_eval",
    "derivative",
    "coefficients_in",
    "normalize_set",
    "factor_basis",
    "gcd",
    "content",
    "primitive_part",
    "squarefree_part",
    "squarefree_decomposition",
    "prem",
]

W = 16
_FIELD = (1 << W) - 1
_GUARD_BIT = 1 << (W - 1)


class UsageError(ValueError):
    """Raised when an operation is called outside its contract."""


def Q(value) -> mpq:
    """Coerce ``value`` (int, str, Fraction, mpq) to an exact rational."""
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted as exact rationals")
    return mpq(value)


def _guards(n: int) -> int:
    g = 0
    for i in range(n):
        g |= _GUARD_BIT << (i * W)
    return g


def _pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e >= _GUARD_BIT:
            raise UsageError(f"exponent {e} out of range")
        key |= e << (i * W)
    return key


def _unpack(key: int, n: int) -> tuple[int, ...]:
    return tuple((key >> (i * W)) & _FIELD for i in range(n))


def _exp(key: int, i: int) -> int:
    return (key >> (i * W)) & _FIELD


class Poly:
    """Immutable polynomial with rational coefficients over ``gens``."""

    __slots__ = ("gens", "_t", "_h")

    def __init__(self, gens: Sequence[str], terms: Mapping | None = None):
        self.gens = tuple(gens)
        t: dict[int, mpq] = {}
        if terms:
            n = len(self.gens)
            for exps, c in terms.items():
                if isinstance(exps, int):
                    raise TypeError("terms must be keyed by exponent tuples")
                if len(exps) != n:
                    raise UsageError("exponent vector length does not match gens")
                c = Q(c)
                if c:
                    k = _pack(exps)
                    t[k] = t.get(k, 0) + c
                    if not t[k]:
                        del t[k]
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, gens: tuple, t: dict) -> "Poly":
        p = cls.__new__(cls)
        p.gens = gens
        p._t = t
        p._h = None
        return p

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c, gens: Sequence[str]) -> "Poly":
        c = Q(c)
        return cls._raw(tuple(gens), {0: c} if c else {})

    @classmethod
    def zero(cls, gens: Sequence[str]) -> "Poly":
        return cls._raw(tuple(gens), {})

    @classmethod
    def one(cls, gens: Sequence[str]) -> "Poly":
        return cls._raw(tuple(gens), {0: mpq(1)})

    @classmethod
    def variable(cls, name: str, gens: Sequence[str]) -> "Poly":
        gens = tuple(gens)
        return cls._raw(gens, {1 << (gens.index(name) * W): mpq(1)})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence["Poly"], v, gens: Sequence[str] | None = None) -> "Poly":
        """Inverse of :meth:`coeffs`: ``sum(coeffs[k] * v**k)``."""
        if gens is None:
            gens = coeffs[0].gens
        gens = tuple(gens)
        i = _index(gens, v)
        t: dict[int, mpq] = {}
        for k, c in enumerate(coeffs):
            if c.gens != gens:
                raise UsageError("coefficient over different gens")
            shift = k << (i * W)
            for key, a in c._t.items():
                t[key + shift] = a
        return cls._raw(gens, t)

    # -- basic queries ----------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], mpq]:
        n = len(self.gens)
        return {_unpack(k, n): c for k, c in self._t.items()}

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise UsageError(f"{self} is not constant")
        return self._t.get(0, mpq(0))

    def __bool__(self) -> bool:
        return bool(self._t)

    def degree(self, v) -> int:
        """Degree in ``v``; -1 for the zero polynomial."""
        if not self._t:
            return -1
        i = _index(self.gens, v)
        s = i * W
        return max((k >> s) & _FIELD for k in self._t)

    @property
    def level(self) -> int:
        """1-based index of the main (highest) variable, 0 for constants."""
        if not self._t:
            return 0
        top = max(self._t)
        return top.bit_length() and (top.bit_length() - 1) // W + 1

    @property
    def main_var(self) -> str | None:
        lv = self.level
        return self.gens[lv - 1] if lv else None

    def variables(self) -> set[str]:
        acc = 0
        for k in self._t:
            acc |= k
        return {g for i, g in enumerate(self.gens) if (acc >> (i * W)) & _FIELD}

    def lead_coeff_lex(self) -> mpq:
        """Coefficient of the lexicographically last term (last variable most significant)."""
        return self._t[max(self._t)]

    def coeffs(self, v) -> list["Poly"]:
        """Coefficients in ``v`` indexed by degree; ``[]`` for zero."""
        if not self._t:
            return []
        i = _index(self.gens, v)
        s = i * W
        mask = ~(_FIELD << s)
        buckets: dict[int, dict[int, mpq]] = {}
        for k, c in self._t.items():
            e = (k >> s) & _FIELD
            buckets.setdefault(e, {})[k & mask] = c
        d = max(buckets)
        return [Poly._raw(self.gens, buckets.get(e, {})) for e in range(d + 1)]

    def lc(self, v) -> "Poly":
        return self.coeffs(v)[-1]

    def reductum(self, v) -> "Poly":
        return Poly.from_coeffs(self.coeffs(v)[:-1] or [Poly.zero(self.gens)], v, self.gens)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.gens != self.gens:
                raise UsageError(f"variable orders differ: {self.gens} vs {other.gens}")
            return other
        if isinstance(other, (int, Fraction)) or type(other) in (type(mpq(0)), type(mpz(0))):
            return Poly.constant(other, self.gens)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self._t) < len(other._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        t = dict(a)
        for k, c in b.items():
            v = t.get(k)
            if v is None:
                t[k] = c
            else:
                v = v + c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return Poly._raw(self.gens, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.gens, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k)
            if v is None:
                t[k] = -c
            else:
                v = v - c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return Poly._raw(self.gens, t)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._t, other._t
        if not a or not b:
            return Poly._raw(self.gens, {})
        if len(b) == 1 and 0 in b:
            c = b[0]
            return Poly._raw(self.gens, {k: v * c for k, v in a.items()})
        if len(a) == 1 and 0 in a:
            c = a[0]
            return Poly._raw(self.gens, {k: v * c for k, v in b.items()})
        t: dict[int, mpq] = {}
        get = t.get
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                v = get(k)
                t[k] = ca * cb if v is None else v + ca * cb
        t = {k: v for k, v in t.items() if v}
        if t and (reduce(lambda x, y: x | y, t) & _guards(len(self.gens))):
            raise UsageError("exponent overflow")
        return Poly._raw(self.gens, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise UsageError("only non-negative integer powers")
        result = Poly.one(self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Poly":
        c = Q(c)
        if not c:
            return Poly._raw(self.gens, {})
        return Poly._raw(self.gens, {k: v * c for k, v in self._t.items()})

    def __truediv__(self, c):
        if isinstance(c, Poly):
            raise UsageError("use exquo for polynomial division")
        return self.scale(1 / Q(c))

    def exquo(self, other: "Poly") -> "Poly":
        """Exact quotient; raises :class:`ArithmeticError` if ``other`` does not divide."""
        other = self._coerce(other)
        if not other._t:
            raise ZeroDivisionError("division by zero polynomial")
        b = other._t
        if len(b) == 1:
            (kb, cb), = b.items()
            g = _guards(len(self.gens))
            inv = 1 / cb
            t = {}
            for k, c in self._t.items():
                if ((k | g) - kb) & g != g:
                    raise ArithmeticError("inexact division")
                t[k - kb] = c * inv
            return Poly._raw(self.gens, t)
        g = _guards(len(self.gens))
        lk = max(b)
        inv = 1 / b[lk]
        r = dict(self._t)
        q: dict[int, mpq] = {}
        bitems = list(b.items())
        while r:
            k = max(r)
            if ((k | g) - lk) & g != g:
                raise ArithmeticError("inexact division")
            d = k - lk
            qc = r[k] * inv
            q[d] = qc
            for kb, cb in bitems:
                nk = kb + d
                v = r.get(nk)
                v = -qc * cb if v is None else v - qc * cb
                if v:
                    r[nk] = v
                else:
                    r.pop(nk, None)
        return Poly._raw(self.gens, q)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exquo(self)
        except ArithmeticError:
            return False
        return True

    # -- calculus and evaluation ------------------------------------------

    def diff(self, v) -> "Poly":
        i = _index(self.gens, v)
        s = i * W
        one = 1 << s
        t = {}
        for k, c in self._t.items():
            e = (k >> s) & _FIELD
            if e:
                t[k - one] = c * e
        return Poly._raw(self.gens, t)

    def subs(self, bindings: Mapping[str, object]) -> "Poly":
        """Substitute rationals for some variables; the result keeps ``gens``."""
        idx = []
        for name, val in bindings.items():
            if name in self.gens:
                idx.append((self.gens.index(name), Q(val)))
        if not idx:
            return self
        powcache: dict[tuple[int, int], mpq] = {}
        t: dict[int, mpq] = {}
        for k, c in self._t.items():
            for i, val in idx:
                s = i * W
                e = (k >> s) & _FIELD
                if e:
                    key = (i, e)
                    pv = powcache.get(key)
                    if pv is None:
                        pv = powcache[key] = val ** e
                    c = c * pv
                    k -= e << s
            if c:
                v = t.get(k)
                v = c if v is None else v + c
                if v:
                    t[k] = v
                else:
                    del t[k]
        return Poly._raw(self.gens, t)

    def eval(self, point: Mapping[str, object]) -> mpq:
        """Evaluate at a point binding every variable that occurs."""
        r = self.subs(point)
        if not r.is_constant():
            missing = sorted(r.variables())
            raise UsageError(f"unbound variables {missing}")
        return r.constant_value()

    def set_gens(self, gens: Sequence[str]) -> "Poly":
        """Re-embed into another variable order containing every used variable."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        n = len(self.gens)
        pos = []
        for i, g in enumerate(self.gens):
            pos.append(gens.index(g) if g in gens else -1)
        t = {}
        for k, c in self._t.items():
            nk = 0
            for i in range(n):
                e = (k >> (i * W)) & _FIELD
                if e:
                    j = pos[i]
                    if j < 0:
                        raise UsageError(f"variable {self.gens[i]} missing from {gens}")
                    nk |= e << (j * W)
            t[nk] = c
        return Poly._raw(gens, t)

    def univariate(self) -> list[mpq]:
        """Dense coefficients (low to high) of a polynomial in at most one variable."""
        if not self._t:
            return []
        lv = self.level
        if lv == 0:
            return [self._t[0]]
        s = (lv - 1) * W
        d = self.degree(lv - 1)
        out = [mpq(0)] * (d + 1)
        for k, c in self._t.items():
            if k & ~(_FIELD << s):
                raise UsageError(f"{self} is not univariate")
            out[k >> s] = c
        return out

    @classmethod
    def from_univariate(cls, coeffs: Sequence, v, gens: Sequence[str]) -> "Poly":
        gens = tuple(gens)
        s = _index(gens, v) * W
        t = {}
        for e, c in enumerate(coeffs):
            c = Q(c)
            if c:
                t[e << s] = c
        return cls._raw(gens, t)

    # -- canonical form, equality, printing --------------------------------

    def canonical(self) -> "Poly":
        """Integer, content-free associate with positive lex-leading coefficient."""
        if not self._t:
            return self
        den = reduce(gmpy2.lcm, (c.denominator for c in self._t.values()))
        num = abs(reduce(gmpy2.gcd, (c.numerator for c in self._t.values())))
        f = mpq(den, num)
        if self.lead_coeff_lex() < 0:
            f = -f
        if f == 1:
            return self
        return self.scale(f)

    def _key(self):
        n = len(self.gens)
        items = []
        for k, c in self._t.items():
            items.append((tuple(sorted((self.gens[i], e) for i, e in enumerate(_unpack(k, n)) if e)), c))
        return frozenset(items)

    def __eq__(self, other):
        if isinstance(other, Poly):
            if other.gens == self.gens:
                return self._t == other._t
            return self._key() == other._key()
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self.is_constant() and self._t.get(0, 0) == other
        return NotImplemented

    def __hash__(self):
        if self._h is None:
            self._h = hash(self._key())
        return self._h

    def sort_key(self):
        """Deterministic total order: by level, degree, then terms."""
        items = sorted(self._t.items(), key=lambda kv: kv[0], reverse=True)
        return (self.level, self.degree(self.level - 1) if self.level else 0, len(items),
                tuple((k, c.numerator, c.denominator) for k, c in items))

    def __repr__(self):
        return f"Poly({self!s}, gens={self.gens})"

    def __str__(self):
        return self.to_str()

    def to_str(self) -> str:
        if not self._t:
            return "0"
        n = len(self.gens)
        parts = []
        for k in sorted(self._t, reverse=True):
            c = self._t[k]
            exps = _unpack(k, n)
            mono = []
            for i in range(n):
                e = exps[i]
                if e == 1:
                    mono.append(self.gens[i])
                elif e:
                    mono.append(f"{self.gens[i]}^{e}")
            neg = c < 0
            a = -c if neg else c
            if not mono:
                body = _fmt_rational(a)
            elif a == 1:
                body = "*".join(mono)
            else:
                body = _fmt_rational(a) + "*" + "*".join(mono)
            parts.append((neg, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out


def _fmt_rational(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _index(gens: tuple, v) -> int:
    if isinstance(v, int):
        if not 0 <= v < len(gens):
            raise UsageError(f"variable index {v} out of range")
        return v
    try:
        return gens.index(v)
    except ValueError:
        raise UsageError(f"unknown variable {v!r} (gens {gens})") from None


# ---------------------------------------------------------------------------
# Operations of the core-algebra contract
# ---------------------------------------------------------------------------


def poly_arith(p: Poly, q: Poly, op: str) -> Poly:
    if p.gens != q.gens:
        raise UsageError("mismatched variable orders")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise UsageError(f"unknown operation {op!r}")


def poly_eval(p: Poly, bindings: Mapping[str, object]) -> Poly:
    return p.subs(bindings)


def derivative(p: Poly, v) -> Poly:
    return p.diff(v)


def coefficients_in(p: Poly, v) -> list[Poly]:
    return p.coeffs(v)


# -- gcd machinery -----------------------------------------------------------


def _strip(cs: list[Poly]) -> list[Poly]:
    while cs and not cs[-1]:
        cs.pop()
    return cs


def _prem_list(a: list[Poly], b: list[Poly]) -> list[Poly]:
    """Pseudo-remainder of coefficient lists (``len(a) >= len(b)``)."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, bc in enumerate(b):
            r[i + shift] = r[i + shift] - lr * bc
        r.pop()
        _strip(r)
    return r


def prem(a: Poly, b: Poly, v) -> Poly:
    """Pseudo-remainder of ``a`` by ``b`` as polynomials in ``v``."""
    if not b:
        raise ZeroDivisionError("pseudo-division by zero")
    ca, cb = a.coeffs(v), b.coeffs(v)
    if len(ca) < len(cb):
        return a
    r = _prem_list(ca, cb)
    return Poly.from_coeffs(r, v, a.gens) if r else Poly.zero(a.gens)


def _monomial_gcd(p: Poly, q: Poly) -> Poly:
    n = len(p.gens)
    mins = None
    for k in list(p._t) + list(q._t):
        e = _unpack(k, n)
        mins = e if mins is None else tuple(min(x, y) for x, y in zip(mins, e))
    return Poly._raw(p.gens, {_pack(mins): mpq(1)})


def _list_content(cs: list[Poly]) -> Poly:
    g = None
    for c in sorted((c for c in cs if c), key=len):
        if c.is_constant():
            return Poly.one(c.gens)
        g = c if g is None else gcd(g, c)
        if g.is_constant():
            return Poly.one(c.gens)
    return g if g is not None else Poly.zero(cs[0].gens)


def gcd(p: Poly, q: Poly) -> Poly:
    """Greatest common divisor (canonical associate) via primitive PRS."""
    if p.gens != q.gens:
        raise UsageError("mismatched variable orders")
    if not p:
        return q.canonical()
    if not q:
        return p.canonical()
    if p.is_constant() or q.is_constant():
        return Poly.one(p.gens)
    if p == q:
        return p.canonical()
    if len(p) == 1 or len(q) == 1:
        return _monomial_gcd(p, q) if (len(p) == 1 and len(q) == 1) else _gcd_mono(p, q)
    if _coprime(p, q):
        return Poly.one(p.gens)
    lv = max(p.level, q.level)
    v = lv - 1
    if p.degree(v) == 0:
        return gcd(p, content(q, v))
    if q.degree(v) == 0:
        return gcd(content(p, v), q)
    a = p.coeffs(v)
    b = q.coeffs(v)
    ca = _list_content(a)
    cb = _list_content(b)
    c = gcd(ca, cb) if not (ca.is_constant() or cb.is_constant()) else Poly.one(p.gens)
    if not ca.is_constant():
        a = [x.exquo(ca) for x in a]
    if not cb.is_constant():
        b = [x.exquo(cb) for x in b]
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _prem_list(a, b)
        if not r:
            g = b
            break
        if len(r) == 1:
            g = None
            break
        cr = _list_content(r)
        if not cr.is_constant():
            r = [x.exquo(cr) for x in r]
        a, b = b, r
    if g is None:
        return c.canonical()
    cg = _list_content(g)
    if not cg.is_constant():
        g = [x.exquo(cg) for x in g]
    return (c * Poly.from_coeffs(g, v, p.gens)).canonical()


_PROBES = (3, -5, 7, 2, -11, 13, -4, 17)


def _coprime(p: Poly, q: Poly) -> bool:
    """Cheap one-sided test: True only when ``gcd(p, q)`` is provably constant.

    A common factor of positive degree in ``v`` survives substituting values
    for the other variables whenever both leading coefficients in ``v`` stay
    nonzero, so a trivial univariate image gcd rules ``v`` out.
    """
    pv, qv = p.variables(), q.variables()
    shared = pv & qv
    if not shared:
        # a common factor would involve no variable of p or none of q
        return True
    from . import univariate as U

    for name in shared:
        i = p.gens.index(name)
        others = [g for g in p.gens if g != name and (g in pv or g in qv)]
        ok = False
        for shift in range(3):
            point = {g: _PROBES[(j + shift) % len(_PROBES)] * (shift + 1) for j, g in enumerate(others)}
            a, b = p.subs(point), q.subs(point)
            if a.degree(i) != p.degree(i) or b.degree(i) != q.degree(i):
                continue
            if U.deg(U.gcd(a.univariate(), b.univariate())) == 0:
                ok = True
            break
        if not ok:
            return False
    return True


def _gcd_mono(p: Poly, q: Poly) -> Poly:
    # one argument is a monomial: the gcd is the monomial part common to all terms
    mono, other = (p, q) if len(p) == 1 else (q, p)
    return _monomial_gcd(mono, other)


def content(p: Poly, v) -> Poly:
    """Gcd of the coefficients of ``p`` in ``v`` (canonical; 1 if rational)."""
    if not p:
        return p
    return _list_content(p.coeffs(v)).canonical()


def primitive_part(p: Poly, v) -> Poly:
    if not p:
        return p
    c = content(p, v)
    return (p.exquo(c) if not c.is_constant() else p).canonical()


def squarefree_part(p: Poly, v) -> Poly:
    """``p / gcd(p, dp/dv)``, canonical."""
    if p.degree(v) <= 0:
        return p.canonical()
    g = gcd(p, p.diff(v))
    if g.is_constant():
        return p.canonical()
    return p.exquo(g).canonical()


def squarefree_decomposition(p: Poly, v) -> list[tuple[Poly, int]]:
    """Yun's algorithm in ``v`` for a polynomial primitive in ``v``.

    Returns ``[(g_i, i)]`` with ``p = unit * prod(g_i**i)``, the ``g_i``
    squarefree, pairwise coprime and of positive degree in ``v``.
    """
    if p.degree(v) <= 0:
        return []
    dp = p.diff(v)
    c = gcd(p, dp)
    if c.is_constant():
        return [(p.canonical(), 1)]
    w = p.exquo(c)
    y = dp.exquo(c)
    out = []
    i = 1
    while w.degree(v) > 0:
        z = y - w.diff(v)
        if not z:
            out.append((w.canonical(), i))
            break
        g = gcd(w, z)
        if g.degree(v) > 0:
            out.append((g.canonical(), i))
        w = w.exquo(g)
        y = z.exquo(g)
        i += 1
    return out


def factor_basis(p: Poly, v=None) -> tuple[mpq, list[tuple[Poly, int]]]:
    """Split ``p`` as ``unit * prod(f**e)`` with canonical squarefree factors.

    Every factor is primitive in its own main variable.  Factors are obtained
    by content removal and squarefree decomposition only, never by
    irreducible factorization.
    """
    if not p:
        raise UsageError("zero polynomial has no factor basis")
    acc: dict[Poly, int] = {}

    def rec(q: Poly, var, mult: int):
        if q.is_constant():
            return
        if var is None or q.degree(var) <= 0:
            var = q.level - 1
        c = content(q, var)
        pp = q.exquo(c) if not c.is_constant() else q
        for g, e in squarefree_decomposition(pp, var):
            acc[g] = acc.get(g, 0) + e * mult
        if not c.is_constant():
            rec(c, None, mult)

    rec(p, v, 1)
    factors = sorted(acc.items(), key=lambda fe: fe[0].sort_key())
    lead = mpq(1)
    for f, e in factors:
        lead *= f.lead_coeff_lex() ** e
    return p.lead_coeff_lex() / lead, factors


def normalize_set(F: Iterable[Poly], v=None) -> list[Poly]:
    """Replace polynomials by canonical squarefree, content-free pieces.

    Rational constants are dropped and ``p``/``-p`` collapse.  Contents are
    kept as separate members, so the union of zero sets is preserved.  The
    result is sorted deterministically.
    """
    out: set[Poly] = set()
    for p in F:
        if p.is_constant():
            continue
        use = v if (v is not None and p.degree(v) > 0) else None
        _, fs = factor_basis(p, use)
        out.update(f for f, _ in fs)
    return sorted(out, key=Poly.sort_key)
