"""Sample points of CAD cells and exact signs of polynomials at them."""

from __future__ import annotations

from gmpy2 import mpq

from . import univariate as U
from .field import NumberField, primitive_element
from .polynomial import Poly, UsageError, W, _FIELD
from .roots import AlgebraicNumber

__all__ = ["SamplePoint", "sign_at"]


class SamplePoint:
    """A point of ``R^k`` with real algebraic coordinates.

    ``coords`` are standalone algebraic numbers (for printing and ordering).
    For exact evaluation every coordinate is also an element of one common
    field ``Q(gamma)``; that field is built on demand because most cells are
    never lifted and never need it.
    """

    __slots__ = ("coords", "_K", "_elems", "_pending", "_powers")

    def __init__(self, coords, K: NumberField | None = None, elems=None, pending=None):
        self.coords = list(coords)
        self._K = K
        self._elems = elems
        self._pending = pending
        self._powers: dict = {}

    @classmethod
    def origin(cls) -> "SamplePoint":
        return cls([], NumberField.rationals(), [])

    @classmethod
    def rational(cls, values) -> "SamplePoint":
        values = [mpq(v) for v in values]
        K = NumberField.rationals()
        return cls([AlgebraicNumber.rational(v) for v in values], K, [K.const(v) for v in values])

    def __len__(self):
        return len(self.coords)

    @property
    def level(self) -> int:
        return len(self.coords)

    @property
    def is_rational(self) -> bool:
        return all(c.is_rational for c in self.coords)

    def rational_values(self) -> list[mpq]:
        return [c.value for c in self.coords]

    def extend(self, coord: AlgebraicNumber, elem=None, poly=None) -> "SamplePoint":
        """Append one coordinate.

        ``elem`` is the coordinate as an element of this point's field when
        known; otherwise ``poly`` (a K-polynomial vanishing at the new
        coordinate, by default its rational defining polynomial) is kept so
        the larger field can be built later.
        """
        K, elems = self.field()
        if coord.is_rational:
            return SamplePoint(self.coords + [coord], K, elems + [K.const(coord.lo)])
        if elem is not None:
            return SamplePoint(self.coords + [coord], K, elems + [elem])
        if K.is_rational:
            K2 = NumberField(coord)
            vals = [K2.const(K.value(e)) for e in elems]
            return SamplePoint(self.coords + [coord], K2, vals + [K2.gen()])
        if poly is None:
            poly = [K.const(c) for c in coord.poly]
        return SamplePoint(self.coords + [coord], pending=(K, elems, poly))

    def field(self) -> tuple[NumberField, list]:
        """``(K, elems)`` with every coordinate expressed in ``K``."""
        if self._K is None:
            K, elems, S = self._pending
            K2, new, rho = primitive_element(K, elems, S, self.coords[-1])
            self._K, self._elems, self._pending = K2, new + [rho], None
        return self._K, self._elems

    def refined(self, i: int, coord: AlgebraicNumber):
        self.coords[i] = coord

    # -- evaluation ---------------------------------------------------------

    def _power(self, i: int, e: int) -> list:
        key = (i, e)
        v = self._powers.get(key)
        if v is None:
            K, elems = self._K, self._elems
            if e == 1:
                v = elems[i]
            else:
                v = K.mul(self._power(i, e // 2), self._power(i, e - e // 2))
            self._powers[key] = v
        return v

    def evaluate(self, p: Poly) -> list:
        """``p`` at this point as an element of the point's field."""
        K, elems = self.field()
        n = len(elems)
        acc: list = []
        for key, c in p._t.items():
            term = [c]
            i = 0
            while key:
                e = key & _FIELD
                if e:
                    if i >= n:
                        raise UsageError(f"variable {p.gens[i]} is not bound by the sample point")
                    term = K.mul(term, self._power(i, e))
                    if not term:
                        break
                key >>= W
                i += 1
            acc = U.add(acc, term)
        return K.reduce(acc)

    def sign(self, p: Poly) -> int:
        K, _ = self.field()
        return K.sign(self.evaluate(p))

    def substitute(self, p: Poly, v: int) -> list:
        """``p`` with coordinates plugged in, as a trimmed K-polynomial in variable ``v``."""
        K, _ = self.field()
        return K.ptrim([self.evaluate(c) for c in p.coeffs(v)])

    def approx(self, digits: int = 10) -> list[str]:
        return [c.approx(digits) for c in self.coords]

    def __repr__(self):
        return f"SamplePoint({self.approx(6)})"


def sign_at(p: Poly, pt: SamplePoint) -> int:
    """Exact sign (-1, 0, +1) of ``p`` at ``pt``."""
    if p.level > pt.level:
        raise UsageError(f"{p} involves variables beyond the sample point's level {pt.level}")
    if pt.is_rational:
        vals = pt.rational_values()
        return U.sign(p.eval({p.gens[i]: vals[i] for i in range(p.level)}) if p.level else
                      (p.constant_value() if p else 0))
    return pt.sign(p)
