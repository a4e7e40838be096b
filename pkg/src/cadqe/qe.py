"""Deciding sentences and eliminating quantifiers over a CAD and-or tree."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cad import CadCell, CadTree, SECTION, TimeBudgetExceeded
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    PrenexFormula,
    Quant,
    conj,
    disj,
    free_vars,
    substitute,
    to_prenex,
)
from .polynomial import Poly, Q, UsageError, factor_basis

__all__ = [
    "Decision",
    "decide",
    "eliminate",
    "evaluate_qf",
    "SolutionFormulaError",
    "TimeBudgetExceeded",
    "check_elimination",
]


class SolutionFormulaError(RuntimeError):
    """Cells with equal sign conditions disagree, so no solution formula over the family exists."""


@dataclass
class Stats:
    cells_built: int = 0
    cells_skipped: int = 0
    variables: int = 0
    projection_sizes: list = field(default_factory=list)


@dataclass
class Decision:
    """Truth value of a sentence with an optional witness.

    ``witness`` holds the sample point of a decisive leaf: the matrix takes
    the value ``value`` there.  ``lead`` names the leading quantifier block;
    restricted to it, the witness of a true existential or false universal
    sentence is a genuine witness or counterexample.
    """

    value: bool
    witness: dict | None = None
    stats: Stats = field(default_factory=Stats)
    lead: tuple = ()
    lead_kind: str = ""

    @property
    def genuine(self) -> dict | None:
        """Witness restricted to the leading block when it is a genuine witness or counterexample."""
        if self.witness is None or not self.lead or (self.lead_kind == "exists") != self.value:
            return None
        return {v: self.witness[v] for v in self.lead}

    def __bool__(self):
        return self.value


# ---------------------------------------------------------------------------
# quantifier-free evaluation
# ---------------------------------------------------------------------------


def evaluate_qf(f: Formula, point: Mapping[str, object]) -> bool:
    """Evaluate a quantifier-free formula at a rational point."""
    if isinstance(f, Atom):
        vals = {k: Q(v) for k, v in point.items() if k in f.poly.gens}
        return f.holds(f.poly.eval(vals))
    if isinstance(f, Const):
        return f.value
    if isinstance(f, And):
        return all(evaluate_qf(a, point) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate_qf(a, point) for a in f.args)
    if isinstance(f, Not):
        return not evaluate_qf(f.arg, point)
    if isinstance(f, Implies):
        return (not evaluate_qf(f.lhs, point)) or evaluate_qf(f.rhs, point)
    if isinstance(f, Iff):
        return evaluate_qf(f.lhs, point) == evaluate_qf(f.rhs, point)
    if isinstance(f, Quant):
        raise UsageError("evaluate_qf needs a quantifier-free formula")
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# preprocessing: eliminate variables pinned by linear equations
# ---------------------------------------------------------------------------


def _linear_solution(p: Poly, y: str, allowed: set) -> Poly | None:
    """``t`` with ``p = 0 <=> y = t`` when ``p`` is linear in ``y`` with constant coefficient."""
    if p.degree(y) != 1:
        return None
    c0, c1 = p.coeffs(y)
    if not c1.is_constant():
        return None
    if not c0.variables() <= allowed:
        return None
    return -c0 / c1.constant_value()


def _subst_poly(f: Formula, y: str, t: Poly) -> Formula:
    if isinstance(f, Atom):
        p = f.poly
        if p.degree(y) <= 0:
            return f
        cs = p.coeffs(y)
        acc = Poly.zero(p.gens)
        for c in reversed(cs):
            acc = acc * t + c
        if acc.is_constant():
            return TRUE if f.holds(acc.constant_value()) else FALSE
        return Atom(acc, f.rel)
    if isinstance(f, And):
        return conj(_subst_poly(a, y, t) for a in f.args)
    if isinstance(f, Or):
        return disj(_subst_poly(a, y, t) for a in f.args)
    return f


def _mentions(f: Formula, y: str) -> bool:
    if isinstance(f, Atom):
        return f.poly.degree(y) > 0
    if isinstance(f, (And, Or)):
        return any(_mentions(a, y) for a in f.args)
    return False


def _eliminate_linear(P: PrenexFormula) -> PrenexFormula:
    """Drop innermost-block variables fixed by a linear equation with constant coefficient.

    For an innermost existential block, a disjunct of the matrix containing
    the conjunct ``c*y + r = 0`` is replaced by itself with ``y := -r/c``.
    For an innermost universal block the dual rule applies to conjuncts of the
    form ``c*y + r != 0 or R``.  Variables that no longer occur are dropped.
    """
    prefix = list(P.prefix)
    matrix = P.matrix
    while prefix:
        kind = prefix[-1][0]
        start = len(prefix)
        while start > 0 and prefix[start - 1][0] == kind:
            start -= 1
        block = [v for _, v in prefix[start:]]
        outer = set(P.free) | {v for _, v in prefix[:start]}
        changed = False
        for y in block:
            allowed = outer | (set(block) - {y})
            matrix, did = _pin(matrix, y, allowed, kind)
            changed |= did
        if not changed:
            break
        prefix = prefix[:start] + [(k, v) for k, v in prefix[start:] if _mentions(matrix, v)]
    order = tuple(P.free) + tuple(v for _, v in prefix)
    return PrenexFormula(tuple(prefix), matrix, P.free, order)


def _pin(matrix: Formula, y: str, allowed: set, kind: str) -> tuple[Formula, bool]:
    outer_cls, inner_cls = (Or, And) if kind == "exists" else (And, Or)
    parts = matrix.args if isinstance(matrix, outer_cls) else (matrix,)
    out = []
    did = False
    for part in parts:
        items = part.args if isinstance(part, inner_cls) else (part,)
        t = None
        drop = set()
        if kind == "exists":
            for i, a in enumerate(items):
                if isinstance(a, Atom) and a.rel == "=":
                    t = _linear_solution(a.poly, y, allowed)
                    if t is not None:
                        drop = {i}
                        break
        else:
            lt = {a.poly: i for i, a in enumerate(items) if isinstance(a, Atom) and a.rel == "<"}
            for i, a in enumerate(items):
                if isinstance(a, Atom) and a.rel == ">" and a.poly in lt:
                    t = _linear_solution(a.poly, y, allowed)
                    if t is not None:
                        drop = {i, lt[a.poly]}
                        break
        if t is None:
            out.append(part)
            continue
        did = True
        rest = [a for i, a in enumerate(items) if i not in drop]
        join = conj if kind == "exists" else disj
        out.append(_subst_poly(join(rest), y, t))
    join = disj if kind == "exists" else conj
    return (join(out) if did else matrix), did


# ---------------------------------------------------------------------------
# and-or evaluation
# ---------------------------------------------------------------------------


class _Evaluator:
    def __init__(self, P: PrenexFormula, deadline=None, short_circuit=True, reducta=True):
        self.P = P
        self.order = P.order
        self.nfree = len(P.free)
        self.kinds = [k for k, _ in P.prefix]
        self.short = short_circuit
        polys = [a.poly.set_gens(self.order) for a in _atoms(P.matrix)]
        self.tree = CadTree(polys, self.order, deadline=deadline, reducta=reducta)
        self.skipped = 0
        self.index = {}
        for k, fam in enumerate(self.tree.families, start=1):
            for i, p in enumerate(fam):
                self.index[p] = (k, i)
        self._atom_cache: dict = {}

    # atom signs from family sign vectors
    def _atom_plan(self, p: Poly):
        plan = self._atom_cache.get(p)
        if plan is None:
            if p.is_constant():
                plan = (_sgn(p.constant_value()), ())
            else:
                unit, factors = factor_basis(p.set_gens(self.order))
                plan = (_sgn(unit), tuple((self.index[f], e) for f, e in factors))
            self._atom_cache[p] = plan
        return plan

    def atom_sign(self, p: Poly, vectors) -> int:
        s, factors = self._atom_plan(p)
        for (k, i), e in factors:
            fs = vectors[k - 1][i]
            if fs == 0:
                return 0
            if fs < 0 and e % 2:
                s = -s
        return s

    def matrix_value(self, f: Formula, vectors) -> bool:
        if isinstance(f, Atom):
            return f.holds(self.atom_sign(f.poly, vectors))
        if isinstance(f, Const):
            return f.value
        if isinstance(f, And):
            return all(self.matrix_value(a, vectors) for a in f.args)
        if isinstance(f, Or):
            return any(self.matrix_value(a, vectors) for a in f.args)
        raise TypeError(f"unexpected matrix node {f!r}")

    def value(self, cell: CadCell) -> tuple[bool, CadCell]:
        """Truth of the quantified remainder above ``cell`` and a decisive leaf."""
        n = self.tree.n
        if cell.level == n:
            return self.matrix_value(self.P.matrix, cell.sign_vectors()), cell
        kind = self.kinds[cell.level - self.nfree]
        target = kind == "exists"
        kids = self.tree.children(cell)
        ordered = [c for c in kids if c.kind == SECTION] + [c for c in kids if c.kind != SECTION]
        first = None
        hit = None
        for j, c in enumerate(ordered):
            v, leaf = self.value(c)
            if first is None:
                first = leaf
            if v == target and hit is None:
                hit = leaf
                if self.short:
                    self.skipped += len(ordered) - j - 1
                    break
        if hit is not None:
            return target, hit
        return (not target), first


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def _atoms(f: Formula) -> list[Atom]:
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, (And, Or)):
        return [a for g in f.args for a in _atoms(g)]
    return []


def _deadline(budget):
    return None if budget is None else time.monotonic() + float(budget)


def _closed(f: Formula) -> bool:
    return not free_vars(f)


def decide(sentence: Formula, var_order: Sequence[str] | None = None, short_circuit: bool = True,
           time_budget: float | None = None, preprocess: bool = True, reducta: bool = True,
           _deadline_at=None) -> Decision:
    """Decide a sentence (no free variables).

    Boolean combinations of closed sentences are split and decided part by
    part.  ``var_order`` may reorder variables inside a quantifier block.
    """
    if free_vars(sentence):
        raise UsageError(f"sentence has free variables {sorted(free_vars(sentence))}; use eliminate")
    deadline = _deadline_at if _deadline_at is not None else _deadline(time_budget)
    kw = dict(var_order=var_order, short_circuit=short_circuit, preprocess=preprocess,
              reducta=reducta, _deadline_at=deadline)
    if isinstance(sentence, Not):
        d = decide(sentence.arg, **kw)
        flip = {"exists": "forall", "forall": "exists"}.get(d.lead_kind, "")
        return Decision(not d.value, d.witness, d.stats, d.lead, flip)
    if isinstance(sentence, (And, Or)):
        target = isinstance(sentence, Or)
        stats = Stats()
        last = None
        for a in sentence.args:
            d = decide(a, **kw)
            _merge_stats(stats, d.stats)
            last = d
            if d.value == target:
                return Decision(target, d.witness, stats, d.lead, d.lead_kind)
        return Decision(not target, last.witness if last else None, stats, last.lead if last else (),
                        last.lead_kind if last else "")
    if isinstance(sentence, Implies):
        return decide(Or((Not(sentence.lhs), sentence.rhs)), **kw)
    if isinstance(sentence, Iff):
        a = decide(sentence.lhs, **kw)
        b = decide(sentence.rhs, **kw)
        stats = Stats()
        _merge_stats(stats, a.stats)
        _merge_stats(stats, b.stats)
        return Decision(a.value == b.value, None, stats)
    P = to_prenex(sentence, free_order=[])
    if preprocess:
        P = _eliminate_linear(P)
    P = _reorder(P, var_order)
    if not P.prefix:
        v = _ground_value(P.matrix)
        return Decision(v, {}, Stats())
    ev = _Evaluator(P, deadline=deadline, short_circuit=short_circuit, reducta=reducta)
    value, leaf = ev.value(ev.tree.root)
    witness = {v: c for v, c in zip(P.order, leaf.sample.coords)}
    kind = P.prefix[0][0]
    lead = tuple(v for _, v in itertools.takewhile(lambda kv: kv[0] == kind, P.prefix))
    stats = Stats(ev.tree.cells_built, ev.skipped, len(P.order), [len(f) for f in ev.tree.families])
    return Decision(value, witness, stats, lead, kind)


def _merge_stats(acc: Stats, s: Stats):
    acc.cells_built += s.cells_built
    acc.cells_skipped += s.cells_skipped
    acc.variables = max(acc.variables, s.variables)
    acc.projection_sizes = acc.projection_sizes or s.projection_sizes


def _ground_value(f: Formula) -> bool:
    return evaluate_qf(f, {})


def _reorder(P: PrenexFormula, var_order) -> PrenexFormula:
    """Permute variables within quantifier blocks to follow ``var_order``."""
    if not var_order:
        return P
    rank = {v: i for i, v in enumerate(var_order)}
    prefix = []
    for kind, grp in itertools.groupby(P.prefix, key=lambda kv: kv[0]):
        vs = [v for _, v in grp]
        pos = {v: i for i, v in enumerate(vs)}
        vs.sort(key=lambda v: rank.get(v, len(rank) + pos[v]))
        prefix.extend((kind, v) for v in vs)
    order = tuple(P.free) + tuple(v for _, v in prefix)
    return PrenexFormula(tuple(prefix), P.matrix, P.free, order)


# ---------------------------------------------------------------------------
# quantifier elimination
# ---------------------------------------------------------------------------


_SETS = {
    frozenset({-1}): "<",
    frozenset({0}): "=",
    frozenset({1}): ">",
    frozenset({-1, 0}): "<=",
    frozenset({0, 1}): ">=",
    frozenset({-1, 1}): "!=",
}
_FULL = frozenset({-1, 0, 1})


def eliminate(f: Formula, var_order: Sequence[str] | None = None, short_circuit: bool = True,
              time_budget: float | None = None, preprocess: bool = True, simplify: bool = True,
              reducta: bool = True, stats: Stats | None = None) -> Formula:
    """An equivalent quantifier-free formula over the free variables of ``f``.

    Free variables take the lowest CAD levels (in ``var_order`` when given,
    else in order of first appearance).  Each cell of the free-variable space
    is classified by the quantified remainder; the answer is a minimized
    disjunction of sign conditions separating true cells from false ones,
    checked against every cell before it is returned.
    """
    fv = free_vars(f)
    if not fv:
        return TRUE if decide(f, var_order=var_order, time_budget=time_budget).value else FALSE
    free_order = None
    if var_order is not None:
        free_order = [v for v in var_order if v in fv]
    P = to_prenex(f, free_order=free_order)
    if preprocess:
        P = _eliminate_linear(P)
    P = _reorder(P, var_order)
    ev = _Evaluator(P, deadline=_deadline(time_budget), short_circuit=short_circuit, reducta=reducta)
    tree = ev.tree
    k = len(P.free)
    tree.build(k)
    truths = []
    for cell in tree.cells(k):
        if P.prefix:
            v, _ = ev.value(cell)
        else:
            v = ev.matrix_value(P.matrix, cell.sign_vectors())
        truths.append((_flat(cell), v))
    if stats is not None:
        stats.cells_built = tree.cells_built
        stats.cells_skipped = ev.skipped
        stats.variables = len(P.order)
        stats.projection_sizes = [len(x) for x in tree.families]
    polys = [p for fam in tree.families[:k] for p in fam]
    return solution_formula(polys, truths, simplify=simplify)


def _flat(cell: CadCell) -> tuple:
    return tuple(s for vec in cell.sign_vectors() for s in vec)


def solution_formula(polys: list[Poly], truths: list[tuple[tuple, bool]], simplify: bool = True) -> Formula:
    """Quantifier-free formula true exactly on the cells marked true.

    ``truths`` pairs each cell's sign vector (over ``polys``) with its value.
    Sign vectors not realised by any cell are free to go either way, which
    the minimization exploits.
    """
    table: dict[tuple, bool] = {}
    for vec, v in truths:
        if table.get(vec, v) != v:
            raise SolutionFormulaError(
                "two cells share a sign vector but differ in truth; the projection family "
                "does not support a solution formula for this input")
        table[vec] = v
    true_vecs = sorted(v for v, t in table.items() if t)
    false_vecs = sorted(v for v, t in table.items() if not t)
    if not true_vecs:
        return FALSE
    if not false_vecs:
        return TRUE
    if simplify:
        boxes = _cover(true_vecs, false_vecs)
    else:
        boxes = [tuple(frozenset({s}) for s in v) for v in true_vecs]
    disjuncts = []
    for box in boxes:
        parts = [Atom(p, _SETS[S]) for p, S in zip(polys, box) if S != _FULL]
        disjuncts.append(conj(parts))
    out = disj(disjuncts)
    for vec, v in table.items():
        if _box_eval(boxes, vec) != v:
            raise SolutionFormulaError("internal check of the solution formula failed")
    return out


def _in_box(box, vec) -> bool:
    return all(s in S for S, s in zip(box, vec))


def _box_eval(boxes, vec) -> bool:
    return any(_in_box(b, vec) for b in boxes)


def _expand(vec: tuple, false_vecs: list) -> tuple:
    """Grow the singleton box of ``vec`` coordinate by coordinate while it avoids ``false_vecs``."""
    box = [frozenset({s}) for s in vec]
    for i in range(len(vec)):
        options = [_FULL] + [frozenset({vec[i], t}) for t in (-1, 0, 1) if t != vec[i]]
        for S in options:
            trial = box[:i] + [S] + box[i + 1:]
            if not any(_in_box(trial, fv) for fv in false_vecs):
                box = trial
                break
    return tuple(box)


def _cover(true_vecs: list, false_vecs: list) -> list:
    boxes = []
    seen = set()
    for v in true_vecs:
        b = _expand(v, false_vecs)
        if b not in seen:
            seen.add(b)
            boxes.append(b)
    uncovered = set(true_vecs)
    chosen = []
    while uncovered:
        best = max(boxes, key=lambda b: (sum(1 for v in uncovered if _in_box(b, v)),
                                         -sum(len(S) != 3 for S in b)))
        chosen.append(best)
        uncovered = {v for v in uncovered if not _in_box(best, v)}
    return chosen


def check_elimination(f: Formula, result: Formula, points, time_budget=None) -> list:
    """Points where ``result`` disagrees with deciding ``f`` after substitution."""
    bad = []
    for pt in points:
        want = decide(substitute(f, pt), time_budget=time_budget).value
        if evaluate_qf(result, pt) != want:
            bad.append(pt)
    return bad
