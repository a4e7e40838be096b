"""Sylvester matrices, resultants and principal subresultant coefficients."""

from __future__ import annotations

from .polynomial import Poly, UsageError

__all__ = ["sylvester_matrix", "det", "sylvester_resultant", "psc", "psc_sequence"]


def sylvester_matrix(A: Poly, B: Poly, v) -> list[list[Poly]]:
    """The ``(m+n) x (m+n)`` Sylvester matrix of ``A`` and ``B`` in ``v``.

    The first ``n = deg B`` rows hold shifted coefficients of ``A`` (highest
    degree first), the remaining ``m = deg A`` rows those of ``B``.
    """
    if A.gens != B.gens:
        raise UsageError("mismatched variable orders")
    ca = A.coeffs(v)[::-1]
    cb = B.coeffs(v)[::-1]
    m, n = len(ca) - 1, len(cb) - 1
    size = m + n
    zero = Poly.zero(A.gens)
    rows = []
    for i in range(n):
        rows.append([zero] * i + ca + [zero] * (size - i - m - 1))
    for i in range(m):
        rows.append([zero] * i + cb + [zero] * (size - i - n - 1))
    return rows


def det(M: list[list[Poly]]) -> Poly:
    """Fraction-free Bareiss determinant of a square matrix of polynomials."""
    n = len(M)
    if n == 0:
        raise UsageError("empty matrix; caller decides the empty determinant")
    gens = M[0][0].gens
    if any(len(r) != n for r in M):
        raise UsageError("matrix is not square")
    M = [list(r) for r in M]
    sign = 1
    prev = None
    for k in range(n - 1):
        best = None
        for i in range(k, n):
            e = M[i][k]
            if e and (best is None or len(e) < len(M[best][k])):
                best = i
                if len(e) == 1 and e.is_constant():
                    break
        if best is None:
            return Poly.zero(gens)
        if best != k:
            M[k], M[best] = M[best], M[k]
            sign = -sign
        piv = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            a = ri[k]
            for j in range(k + 1, n):
                if a:
                    val = ri[j] * piv - a * rk[j]
                else:
                    val = ri[j] * piv
                if prev is not None and val:
                    val = val.exquo(prev)
                ri[j] = val
            ri[k] = Poly.zero(gens)
        prev = piv
    d = M[n - 1][n - 1]
    return -d if sign < 0 else d


def sylvester_resultant(A: Poly, B: Poly, v) -> Poly:
    """``Res_v(A, B)``: a polynomial free of ``v``, zero iff a common factor exists."""
    if not A or not B:
        raise UsageError("resultant of the zero polynomial")
    m, n = A.degree(v), B.degree(v)
    if m < 1 and n < 1:
        raise UsageError("both inputs are constant in the elimination variable")
    return det(sylvester_matrix(A, B, v))


def psc(A: Poly, B: Poly, v, l: int) -> Poly:
    """The ``l``-th principal subresultant coefficient of ``A`` and ``B`` in ``v``.

    Determinant of the Sylvester matrix with the last ``l`` rows of each
    coefficient block and the last ``2l`` columns deleted.  ``psc(.., 0)`` is
    the resultant.
    """
    if not A or not B:
        raise UsageError("psc of the zero polynomial")
    m, n = A.degree(v), B.degree(v)
    if not 0 <= l <= min(m, n):
        raise UsageError(f"psc index {l} outside 0..{min(m, n)}")
    if l == 0 and m < 1 and n < 1:
        raise UsageError("both inputs are constant in the elimination variable")
    S = sylvester_matrix(A, B, v)
    size = m + n - 2 * l
    if size == 0:
        return Poly.one(A.gens)
    rows = S[: n - l] + S[n: n + m - l]
    sub = [r[:size] for r in rows]
    return det(sub)


def psc_sequence(A: Poly, B: Poly, v) -> list[Poly]:
    """``[psc(A, B, v, l) for l in 0..min(deg A, deg B)]``."""
    k = min(A.degree(v), B.degree(v))
    return [psc(A, B, v, l) for l in range(k + 1)]
