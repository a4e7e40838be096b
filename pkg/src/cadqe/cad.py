"""Projection, cylindrical algebraic decomposition and lifting.

Level ``k`` of a decomposition corresponds to ``gens[k - 1]``.  The tree is
built lazily: :meth:`CadTree.children` lifts a cell on first use, which is
what the and-or evaluation in :mod:`cadqe.qe` relies on for short-circuiting.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .field import real_roots_over
from .formula import Atom, Formula, conj
from .polynomial import Poly, UsageError, normalize_set
from .resultants import psc
from .roots import AlgebraicNumber, compare, separate, simplest_between
from .sample import SamplePoint

__all__ = [
    "project",
    "projection_closure",
    "compute_cad",
    "lift_cell",
    "cell_description",
    "CadCell",
    "CadTree",
    "TimeBudgetExceeded",
    "SECTOR",
    "SECTION",
]

SECTOR = "sector"
SECTION = "section"
_REL = {-1: "<", 0: "=", 1: ">"}


class TimeBudgetExceeded(RuntimeError):
    """The cooperative time budget ran out (checked between projection steps and lifts)."""


def _check(deadline, stage: str):
    if deadline is not None and time.monotonic() > deadline:
        raise TimeBudgetExceeded(f"time budget exceeded during {stage}")


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------


def _reducta(f: Poly, v) -> list[Poly]:
    """``f`` and its successive reducta, stopping once the leading coefficient is constant."""
    out = []
    while f.degree(v) >= 1:
        out.append(f)
        if f.lc(v).is_constant():
            break
        f = f.reductum(v)
    return out


def project(F: Iterable[Poly], v, parts: bool = False, reducta: bool = True, deadline: float | None = None):
    """Collins projection of ``F`` with respect to ``v``.

    Coefficients, principal subresultant coefficients of each polynomial with
    its derivative, and of each pair.  With ``reducta`` (the default) the
    derivative and pair terms are also taken over reducta whose leading
    coefficient is not constant, which keeps the projection valid where
    leading coefficients vanish; when every leading coefficient is constant
    nothing is added.

    ``parts=True`` returns the raw ``(phi1, phi2, phi3)`` lists, built from the
    polynomials themselves without reducta and without normalization.
    """
    F = [f for f in F if f.degree(v) >= 1]
    if parts:
        phi1 = [c for f in F for c in f.coeffs(v)]
        phi2 = []
        for f in F:
            d = f.diff(v)
            for l in range(f.degree(v)):
                phi2.append(psc(f, d, v, l))
        phi3 = []
        for i in range(len(F)):
            for j in range(i + 1, len(F)):
                for m in range(min(F[i].degree(v), F[j].degree(v)) + 1):
                    phi3.append(psc(F[i], F[j], v, m))
        return phi1, phi2, phi3
    out: list[Poly] = []
    for f in F:
        out.extend(f.coeffs(v))
    R = [_reducta(f, v) if reducta else [f] for f in F]
    for red in R:
        for g in red:
            d = g.diff(v)
            for l in range(g.degree(v)):
                out.append(psc(g, d, v, l))
    for i in range(len(F)):
        _check(deadline, "projection")
        for j in range(i + 1, len(F)):
            for g in R[i]:
                for h in R[j]:
                    for m in range(min(g.degree(v), h.degree(v)) + 1):
                        out.append(psc(g, h, v, m))
    return normalize_set([p for p in out if p and not p.is_constant()])


def projection_closure(F: Iterable[Poly], gens: Sequence[str], reducta: bool = True,
                       deadline: float | None = None) -> list[list[Poly]]:
    """Level families ``[F_1, ..., F_n]``: each input factor sits at its main variable's level."""
    gens = tuple(gens)
    n = len(gens)
    fam: list[set] = [set() for _ in range(n + 1)]
    for p in normalize_set([f.set_gens(gens) for f in F]):
        fam[p.level].add(p)
    for k in range(n, 1, -1):
        _check(deadline, "projection")
        if fam[k]:
            for q in project(sorted(fam[k], key=Poly.sort_key), k - 1, reducta=reducta, deadline=deadline):
                fam[q.level].add(q)
    return [sorted(fam[k], key=Poly.sort_key) for k in range(1, n + 1)]


# ---------------------------------------------------------------------------
# cells
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class CadCell:
    """A cell of the decomposition.

    ``path`` holds 1-based positions among siblings in increasing coordinate
    order, so odd positions are sectors and even positions sections.
    ``signs`` lists the sign of every polynomial of the cell's level family.
    """

    level: int
    path: tuple
    kinds: tuple
    sample: SamplePoint
    signs: tuple
    parent: "CadCell | None" = field(default=None, repr=False)
    children: "list[CadCell] | None" = field(default=None, repr=False)

    @property
    def kind(self) -> str:
        return self.kinds[-1] if self.kinds else SECTOR

    @property
    def full_dimensional(self) -> bool:
        return all(k == SECTOR for k in self.kinds)

    def ancestors(self) -> list["CadCell"]:
        """Cells at levels 1..level on the path to this cell (inclusive)."""
        out = []
        c = self
        while c is not None and c.level > 0:
            out.append(c)
            c = c.parent
        return out[::-1]

    def sign_vectors(self) -> tuple:
        return tuple(c.signs for c in self.ancestors())

    def __repr__(self):
        return f"CadCell(level={self.level}, path={self.path}, kind={self.kind}, signs={self.signs})"


def _cmp_roots(a, b):
    return compare(a[0], b[0])


def _group_roots(tagged: list) -> list:
    """Sort ``(root, index, Sq)`` triples and group equal roots."""
    tagged.sort(key=functools.cmp_to_key(_cmp_roots))
    groups: list = []
    for r, i, Sq in tagged:
        if groups and compare(groups[-1][0], r) == 0:
            g = groups[-1]
            g[1].add(i)
            if _better(r, Sq, g[0], g[2]):
                g[0], g[2] = r, Sq
        else:
            groups.append([r, {i}, Sq])
    return groups


def _better(r, Sq, r0, Sq0) -> bool:
    # prefer rational roots, then roots of linear factors, then low degree
    key = lambda x, S: (not x.is_rational, len(S), x.degree)
    return key(r, Sq) < key(r0, Sq0)


def _left_of(r: AlgebraicNumber) -> mpq:
    if r.lo > 0:
        return mpq(0)
    return mpq(math.ceil(r.lo) - 1)


def _right_of(r: AlgebraicNumber) -> mpq:
    if r.hi < 0:
        return mpq(0)
    return mpq(math.floor(r.hi) + 1)


def lift_cell(c: CadCell, F_next: Sequence[Poly]) -> list[CadCell]:
    """Cells of the cylinder over ``c`` for the next level's family.

    Polynomials that vanish identically above the sample point are left out
    of the product whose roots delimit the children.
    """
    k = c.level
    pt = c.sample
    K, _ = pt.field()
    info = []
    tagged = []
    for i, f in enumerate(F_next):
        if f.level != k + 1:
            raise UsageError(f"{f} does not belong to level {k + 1}")
        S = pt.substitute(f, k)
        if not S:
            info.append((0, None))
        elif len(S) == 1:
            info.append((K.sign(S[0]), None))
        else:
            info.append((None, S))
            Sq = K.psquarefree(S)
            for r in real_roots_over(K, Sq):
                tagged.append((r, i, Sq))
    groups = _group_roots(tagged)
    roots = separate([g[0] for g in groups])
    for g, r in zip(groups, roots):
        g[0] = r

    def sector_signs(q):
        out = []
        for s, S in info:
            out.append(s if S is None else K.sign(K.peval(S, q)))
        return tuple(out)

    children: list[CadCell] = []
    m = len(groups)

    def add(kind, sample, signs):
        pos = len(children) + 1
        children.append(CadCell(k + 1, c.path + (pos,), c.kinds + (kind,), sample, signs, c))

    for j in range(m + 1):
        if m == 0:
            q = mpq(0)
        elif j == 0:
            q = _left_of(groups[0][0])
        elif j == m:
            q = _right_of(groups[-1][0])
        else:
            q = simplest_between(groups[j - 1][0].hi, groups[j][0].lo)
        add(SECTOR, pt.extend(AlgebraicNumber.rational(q)), sector_signs(q))
        if j == m:
            break
        r, zeros, Sq = groups[j]
        signs = []
        for i, (s, S) in enumerate(info):
            if i in zeros:
                signs.append(0)
            elif S is None:
                signs.append(s)
            else:
                sg, r = K.psign_at(S, r)
                signs.append(sg)
        groups[j][0] = r
        elem = None
        if r.is_rational:
            elem = K.const(r.lo)
        elif len(Sq) == 2:
            elem = K.mul(Sq[0], [mpq(-1)])
        add(SECTION, pt.extend(r, elem=elem, poly=Sq), tuple(signs))
    return children


# ---------------------------------------------------------------------------
# the tree
# ---------------------------------------------------------------------------


class CadTree:
    """A (possibly partial) sign-invariant decomposition of ``R^n``.

    Parameters
    ----------
    F : iterable of Poly
        Input polynomials.
    gens : sequence of str
        The variable order; level ``k`` is ``gens[k - 1]``.
    deadline : float, optional
        Absolute ``time.monotonic()`` value after which lifting raises
        :class:`TimeBudgetExceeded`.
    """

    def __init__(self, F: Iterable[Poly], gens: Sequence[str], deadline: float | None = None,
                 reducta: bool = True, families: list | None = None):
        self.gens = tuple(gens)
        self.n = len(self.gens)
        self.families = families if families is not None else projection_closure(F, self.gens, reducta, deadline)
        self.deadline = deadline
        self.root = CadCell(0, (), (), SamplePoint.origin(), ())
        self.cells_built = 0

    def family(self, level: int) -> list[Poly]:
        return self.families[level - 1]

    def children(self, cell: CadCell) -> list[CadCell]:
        if cell.children is None:
            if cell.level >= self.n:
                raise UsageError("leaf cells have no children")
            _check(self.deadline, "lifting")
            cell.children = lift_cell(cell, self.family(cell.level + 1))
            self.cells_built += len(cell.children)
        return cell.children

    def build(self, level: int | None = None) -> "CadTree":
        """Lift everything up to ``level`` (default: all levels)."""
        level = self.n if level is None else level
        stack = [self.root]
        while stack:
            c = stack.pop()
            if c.level < level:
                stack.extend(reversed(self.children(c)))
        return self

    def cells(self, level: int | None = None) -> list[CadCell]:
        """Constructed cells in depth-first, increasing-coordinate order."""
        out = []
        stack = list(reversed(self.root.children or []))
        while stack:
            c = stack.pop()
            if level is None or c.level == level:
                out.append(c)
            if c.children and (level is None or c.level < level):
                stack.extend(reversed(c.children))
        return out

    def leaves(self) -> list[CadCell]:
        return [c for c in self.cells() if not c.children]

    def records(self, digits: int = 10, exact: bool = False) -> list[dict]:
        """Structured dump: one record per constructed cell."""
        out = []
        for c in self.cells():
            rec = {
                "level": c.level,
                "path": list(c.path),
                "kind": c.kind,
                "signs": list(c.signs),
                "sample": c.sample.approx(digits),
            }
            if exact:
                rec["exact"] = [_exact(a) for a in c.sample.coords]
            out.append(rec)
        return out


def _exact(a: AlgebraicNumber) -> dict:
    if a.is_rational:
        return {"value": _q(a.lo)}
    return {"poly": [_q(x) for x in a.poly], "interval": [_q(a.lo), _q(a.hi)]}


def _q(x) -> str:
    x = mpq(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def compute_cad(F: Iterable[Poly], j: int | None = None, gens: Sequence[str] | None = None,
                deadline: float | None = None) -> CadTree:
    """An ``F``-sign-invariant decomposition of ``R^j`` over the first ``j`` variables."""
    F = list(F)
    if gens is None:
        if not F:
            raise UsageError("cannot infer the variable order from an empty family")
        gens = F[0].gens
    gens = tuple(gens)
    if j is None:
        j = len(gens)
    if not 0 < j <= len(gens):
        raise UsageError(f"level {j} outside 1..{len(gens)}")
    for f in F:
        if f.set_gens(gens).level > j:
            raise UsageError(f"{f} involves variables beyond level {j}")
    return CadTree(F, gens[:j], deadline=deadline).build()


def cell_description(c: CadCell, tree: CadTree, levels: int | None = None) -> Formula:
    """Conjunction of the sign conditions of ``c`` on the families of levels ``1..levels``."""
    k = c.level if levels is None else levels
    if k > c.level:
        raise UsageError("cannot describe levels above the cell")
    parts = []
    for a in c.ancestors()[:k]:
        for p, s in zip(tree.family(a.level), a.signs):
            parts.append(Atom(p, _REL[s]))
    return conj(parts)
