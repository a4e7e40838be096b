"""Dense univariate polynomials over Q as coefficient lists (low to high).

These are the workhorses behind Sturm sequences, root isolation and
arithmetic in simple algebraic extensions.  An empty list is the zero
polynomial.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence

import gmpy2
from gmpy2 import mpq

Coeffs = list


def trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def deg(p: Sequence) -> int:
    return len(p) - 1


def add(p: Sequence, q: Sequence) -> list:
    if len(p) < len(q):
        p, q = q, p
    r = list(p)
    for i, c in enumerate(q):
        r[i] = r[i] + c
    return trim(r)


def sub(p: Sequence, q: Sequence) -> list:
    r = list(p) + [mpq(0)] * max(0, len(q) - len(p))
    for i, c in enumerate(q):
        r[i] = r[i] - c
    return trim(r)


def neg(p: Sequence) -> list:
    return [-c for c in p]


def scale(p: Sequence, c) -> list:
    if not c:
        return []
    return [a * c for a in p]


def mul(p: Sequence, q: Sequence) -> list:
    if not p or not q:
        return []
    r = [mpq(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                r[i + j] += a * b
    return trim(r)


def divmod_(p: Sequence, q: Sequence) -> tuple[list, list]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    if len(r) - 1 < dq:
        return [], trim(r)
    inv = 1 / mpq(q[-1])
    quo = [mpq(0)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] * inv
        quo[k] = c
        if c:
            for j in range(dq + 1):
                r[k + j] -= c * q[j]
    return trim(quo), trim(r[:dq])


def rem(p: Sequence, q: Sequence) -> list:
    return divmod_(p, q)[1]


def exquo(p: Sequence, q: Sequence) -> list:
    quo, r = divmod_(p, q)
    if r:
        raise ArithmeticError("inexact univariate division")
    return quo


def monic(p: Sequence) -> list:
    if not p:
        return []
    inv = 1 / mpq(p[-1])
    return [c * inv for c in p]


def primitive(p: Sequence) -> list:
    """Integer content-free associate with positive leading coefficient."""
    if not p:
        return []
    p = [mpq(c) for c in p]
    den = reduce(gmpy2.lcm, (c.denominator for c in p))
    num = abs(reduce(gmpy2.gcd, [c.numerator for c in p if c] or [1]))
    f = mpq(den, num)
    if p[-1] < 0:
        f = -f
    return [c * f for c in p]


def gcd(p: Sequence, q: Sequence) -> list:
    """Monic gcd (``[]`` only when both are zero)."""
    a, b = trim(list(p)), trim(list(q))
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(p: Sequence, q: Sequence) -> tuple[list, list, list]:
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = trim(list(p)), trim(list(q))
    s0, s1 = [mpq(1)], []
    t0, t1 = [], [mpq(1)]
    while r1:
        quo, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(quo, s1))
        t0, t1 = t1, sub(t0, mul(quo, t1))
    if not r0:
        return [], [], []
    inv = 1 / r0[-1]
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def diff(p: Sequence) -> list:
    return trim([p[i] * i for i in range(1, len(p))])


def squarefree(p: Sequence) -> list:
    """Primitive squarefree part."""
    p = trim(list(p))
    if len(p) <= 2:
        return primitive(p)
    g = gcd(p, diff(p))
    if len(g) > 1:
        p = exquo(p, g)
    return primitive(p)


def resultant(a: Sequence, b: Sequence) -> mpq:
    """Resultant of two univariate polynomials by the Euclidean recurrence."""
    a, b = trim(list(a)), trim(list(b))
    if not a or not b:
        return mpq(0)
    da, db = len(a) - 1, len(b) - 1
    res = mpq(1)
    while True:
        if db == 0:
            return res * b[0] ** da
        if da == 0:
            return res * a[0] ** db
        r = rem(a, b)
        if not r:
            return mpq(0)
        dr = len(r) - 1
        if da * db % 2:
            res = -res
        res *= b[-1] ** (da - dr)
        a, b, da, db = b, r, db, dr


def evaluate(p: Sequence, x) -> mpq:
    acc = mpq(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign(x) -> int:
    return (x > 0) - (x < 0)


def compose(p: Sequence, q: Sequence) -> list:
    """``p(q(x))``."""
    acc: list = []
    for c in reversed(p):
        acc = add(mul(acc, q), [c] if c else [])
    return acc


def shift_scale(p: Sequence, a, b) -> list:
    """``p(a*x + b)``."""
    return compose(p, trim([mpq(b), mpq(a)]))


def cauchy_bound(p: Sequence) -> mpq:
    """``1 + max |a_k| / |a_n|``; every root lies strictly inside ``(-M, M)``."""
    p = trim(list(p))
    if len(p) < 2:
        raise ValueError("constant polynomial has no root bound")
    lead = abs(mpq(p[-1]))
    return 1 + max(abs(mpq(c)) for c in p[:-1]) / lead


def sturm_sequence(p: Sequence) -> list[list]:
    """Signed remainder sequence ``p, p', -rem(...), ...`` (positive rescaling only)."""
    seq = [primitive(p)]
    d = diff(seq[0])
    if not d:
        return seq
    seq.append(primitive(d))
    while True:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        r = neg(r)
        # positive rescaling keeps signs intact
        pr = primitive(r)
        if (pr[-1] > 0) != (r[-1] > 0):
            pr = neg(pr)
        seq.append(pr)
    return seq


def sign_variations(seq: Sequence[Sequence], x) -> int:
    count = 0
    last = 0
    for q in seq:
        s = sign(evaluate(q, x))
        if s:
            if last and s != last:
                count += 1
            last = s
    return count


def interval_eval(p: Sequence, lo, hi) -> tuple[mpq, mpq]:
    """Enclosure of ``p`` over ``[lo, hi]`` via interval Horner."""
    a = b = mpq(0)
    for c in reversed(p):
        # (a, b) * (lo, hi)
        prods = (a * lo, a * hi, b * lo, b * hi)
        a = min(prods) + c
        b = max(prods) + c
    return a, b
