"""Statistical questions about polynomially parameterized models, as Tarski formulas.

A model is the image of a semi-algebraic parameter set under a polynomial
map.  The builders here only write formulas; deciding or eliminating them is
left to :mod:`cadqe.qe`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .formula import (
    TRUE,
    And,
    Atom,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    ParseError,
    Quant,
    _rename_poly,
    conj,
    disj,
    exists,
    forall,
    free_vars,
    parse,
    parse_poly,
    render,
)
from .polynomial import Poly, UsageError

__all__ = [
    "PolynomialModel",
    "CiStatement",
    "matrix_symbol",
    "gaussian_constraints",
    "pd_constraints",
    "membership_sentence",
    "model_compare_sentence",
    "identifiability_sentence",
    "quantity_region_formula",
    "implicitization_formula",
    "heywood_model",
    "gaussian_complete_model",
    "builtin_model",
    "BUILTIN_MODELS",
    "parse_model",
    "load_model",
    "format_model",
]


def _eq(p: Poly) -> Atom:
    return Atom(p, "=")


def _common(polys: Iterable[Poly]) -> tuple:
    gens: list[str] = []
    for p in polys:
        for g in p.gens:
            if g in p.variables() and g not in gens:
                gens.append(g)
    return tuple(gens)


def _sub(a: Poly, b: Poly) -> Poly:
    gens = _common((a, b)) or a.gens
    return a.set_gens(gens) - b.set_gens(gens)


def _rename(f: Formula, mapping: Mapping[str, str]) -> Formula:
    """Rename free variables of a formula."""
    if isinstance(f, Atom):
        return Atom(_rename_poly(f.poly, mapping), f.rel)
    if isinstance(f, Const):
        return f
    if isinstance(f, And):
        return And(tuple(_rename(a, mapping) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_rename(a, mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(_rename(f.arg, mapping))
    if isinstance(f, Implies):
        return Implies(_rename(f.lhs, mapping), _rename(f.rhs, mapping))
    if isinstance(f, Iff):
        return Iff(_rename(f.lhs, mapping), _rename(f.rhs, mapping))
    if isinstance(f, Quant):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        return Quant(f.kind, f.var, _rename(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialModel:
    """Image of ``{theta : constraint(theta)}`` under ``theta -> map(theta)``."""

    params: tuple
    constraint: Formula
    observables: tuple
    map: tuple
    name: str = ""

    def __post_init__(self):
        params = tuple(self.params)
        obs = tuple(self.observables)
        if len(set(params)) != len(params):
            raise UsageError("duplicate parameter names")
        if len(set(obs)) != len(obs):
            raise UsageError("duplicate observable names")
        if set(params) & set(obs):
            raise UsageError(f"names used both as parameter and observable: {sorted(set(params) & set(obs))}")
        maps = []
        for p in self.map:
            if isinstance(p, str):
                p = parse_poly(p, params)
            elif not isinstance(p, Poly):
                p = Poly.constant(p, params)
            extra = p.variables() - set(params)
            if extra:
                raise UsageError(f"map polynomial {p} mentions non-parameters {sorted(extra)}")
            maps.append(p.set_gens(params) if p.variables() else Poly.constant(p.constant_value() if p else 0, params))
        if len(maps) != len(obs):
            raise UsageError(f"{len(maps)} map polynomials for {len(obs)} observables")
        c = self.constraint
        if isinstance(c, str):
            c = parse(c, params)
        extra = free_vars(c) - set(params)
        if extra:
            raise UsageError(f"constraint mentions non-parameters {sorted(extra)}")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "observables", obs)
        object.__setattr__(self, "map", tuple(maps))
        object.__setattr__(self, "constraint", c)

    def evaluate(self, theta: Mapping[str, object] | Sequence) -> tuple:
        """``map(theta)`` as a tuple of rationals."""
        point = theta if isinstance(theta, Mapping) else dict(zip(self.params, theta))
        return tuple(p.eval(point) if p else mpq(0) for p in self.map)

    def admits(self, theta: Mapping[str, object] | Sequence) -> bool:
        from .qe import evaluate_qf

        point = theta if isinstance(theta, Mapping) else dict(zip(self.params, theta))
        return evaluate_qf(self.constraint, point)

    def renamed(self, mapping: Mapping[str, str]) -> "PolynomialModel":
        """Same model with some parameters and/or observables renamed."""
        params = tuple(mapping.get(v, v) for v in self.params)
        maps = tuple(Poly._raw(params, p._t) for p in self.map)
        pm = {k: v for k, v in mapping.items() if k in self.params}
        return PolynomialModel(params, _rename(self.constraint, pm),
                               tuple(mapping.get(v, v) for v in self.observables), maps, self.name)

    def apart_from(self, taken: Iterable[str], suffix: str = "'") -> "PolynomialModel":
        """Rename parameters that clash with ``taken`` by appending ``suffix``."""
        taken = set(taken)
        used = taken | set(self.params) | set(self.observables)
        mapping = {}
        for v in self.params:
            if v in taken:
                w = v + suffix
                while w in used:
                    w += suffix
                used.add(w)
                mapping[v] = w
        return self.renamed(mapping) if mapping else self

    def graph(self, values: Sequence[Poly | str] | None = None) -> Formula:
        """Conjunction ``observable_j = map_j`` (or ``values_j = map_j``)."""
        out = []
        for j, g in enumerate(self.map):
            lhs = values[j] if values is not None else self.observables[j]
            if isinstance(lhs, str):
                lhs = Poly.variable(lhs, (lhs,))
            out.append(_eq(_sub(lhs, g)))
        return conj(out)


# ---------------------------------------------------------------------------
# Gaussian conditional independence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CiStatement:
    """``X_left`` independent of ``X_right`` given ``X_given`` (1-based indices)."""

    left: frozenset
    right: frozenset
    given: frozenset = frozenset()

    def __post_init__(self):
        for name in ("left", "right", "given"):
            val = getattr(self, name)
            if isinstance(val, int):
                val = (val,)
            object.__setattr__(self, name, frozenset(int(i) for i in val))
        if not self.left or not self.right:
            raise UsageError("independence statement needs nonempty left and right sets")
        if (self.left & self.right) or (self.left & self.given) or (self.right & self.given):
            raise UsageError(f"index sets of {self} overlap")

    def check(self, n: int):
        idx = self.left | self.right | self.given
        if min(idx) < 1 or max(idx) > n:
            raise UsageError(f"{self} refers to variables outside 1..{n}")

    @classmethod
    def parse(cls, text: str) -> "CiStatement":
        """Read ``"1 _||_ 3 | 2"``; ``⊥`` works too, and sets may be written ``{1,2}``."""
        m = re.fullmatch(r"\s*(.+?)\s*(?:_\|\|_|⊥|\bindep\b)\s*([^|]+?)\s*(?:\|\s*(.*?))?\s*", text)
        if not m:
            raise UsageError(f"cannot read independence statement {text!r}")

        def ints(s):
            s = (s or "").strip().strip("{}")
            if s in ("", "∅"):
                return ()
            try:
                return tuple(int(x) for x in re.split(r"[\s,]+", s) if x)
            except ValueError:
                raise UsageError(f"bad index set {s!r} in {text!r}") from None

        return cls(ints(m.group(1)), ints(m.group(2)), ints(m.group(3)))

    def __str__(self):
        def fmt(s):
            s = sorted(s)
            return str(s[0]) if len(s) == 1 else "{" + ",".join(map(str, s)) + "}"

        tail = f" | {fmt(self.given)}" if self.given else ""
        return f"{fmt(self.left)} _||_ {fmt(self.right)}{tail}"


def matrix_symbol(i: int, j: int, n: int, form: str = "correlation") -> str:
    """Variable name of the symmetric matrix entry ``(i, j)``."""
    i, j = min(i, j), max(i, j)
    head = "r" if form == "correlation" else "s"
    return f"{head}{i}{j}" if n < 10 else f"{head}{i}_{j}"


def _matrix(n: int, form: str) -> tuple[list[list[Poly]], tuple]:
    names = tuple(matrix_symbol(i, j, n, form) for i in range(1, n + 1) for j in range(i, n + 1)
                  if form != "correlation" or i < j)
    M = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i == j and form == "correlation":
                row.append(Poly.one(names))
            else:
                row.append(Poly.variable(matrix_symbol(i, j, n, form), names))
        M.append(row)
    return M, names


def _det(M: list[list[Poly]]) -> Poly:
    """Cofactor expansion; the matrices here are tiny."""
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = M[0][0] - M[0][0]
    for j in range(n):
        if not M[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        t = M[0][j] * _det(minor)
        acc = acc + t if j % 2 == 0 else acc - t
    return acc


def _check_form(form: str):
    if form not in ("correlation", "covariance"):
        raise UsageError(f"form must be 'correlation' or 'covariance', not {form!r}")


def gaussian_constraints(stmt: CiStatement, n: int, form: str = "correlation") -> Formula:
    """Polynomial equations equivalent to ``stmt`` for a non-degenerate Gaussian.

    Each pair ``i`` in left, ``j`` in right contributes the vanishing of the
    minor with rows ``{i} + given`` and columns ``{j} + given``.
    """
    _check_form(form)
    stmt.check(n)
    M, _ = _matrix(n, form)
    C = sorted(stmt.given)
    out = []
    for i in sorted(stmt.left):
        for j in sorted(stmt.right):
            rows, cols = [i] + C, [j] + C
            sub = [[M[r - 1][c - 1] for c in cols] for r in rows]
            out.append(_eq(_det(sub)))
    return conj(out)


def pd_constraints(n: int, form: str = "correlation") -> Formula:
    """Positive definiteness by strictly positive minors.

    Covariance form uses the leading principal minors.  Correlation form
    also lists every 2x2 principal minor (the leading 1x1 minor is 1).
    """
    _check_form(form)
    M, _ = _matrix(n, form)
    out = []
    if form == "covariance":
        sizes = range(1, n + 1)
    else:
        for i, j in itertools.combinations(range(n), 2):
            out.append(Atom(_det([[M[i][i], M[i][j]], [M[j][i], M[j][j]]]), ">"))
        sizes = range(3, n + 1)
    for k in sizes:
        out.append(Atom(_det([row[:k] for row in M[:k]]), ">"))
    return conj(out)


def _as_list(x) -> list:
    if isinstance(x, (CiStatement, str)):
        return [x]
    return list(x)


def _ci(x) -> CiStatement:
    return CiStatement.parse(x) if isinstance(x, str) else x


def membership_sentence(premises, conclusion, n: int, form: str = "correlation") -> Formula:
    """``forall entries. PD and premises -> one of the conclusions``."""
    prem = [_ci(s) for s in _as_list(premises)]
    concl = [_ci(s) for s in _as_list(conclusion)]
    if not concl:
        raise UsageError("membership needs at least one conclusion")
    lhs = conj([pd_constraints(n, form)] + [gaussian_constraints(s, n, form) for s in prem])
    rhs = disj(gaussian_constraints(s, n, form) for s in concl)
    _, names = _matrix(n, form)
    return forall(list(names), Implies(lhs, rhs))


# ---------------------------------------------------------------------------
# sentences about models
# ---------------------------------------------------------------------------


def _inclusion(m1: PolynomialModel, m2: PolynomialModel) -> Formula:
    m2 = m2.apart_from(m1.params)
    body = Implies(m1.constraint, conj([m2.constraint, m2.graph(list(m1.map))]))
    return forall(list(m1.params), exists(list(m2.params), body))


def model_compare_sentence(m1: PolynomialModel, m2: PolynomialModel, mode: str = "inclusion") -> Formula:
    """Inclusion, equality or overlap of the two observable sets, as a sentence."""
    if len(m1.map) != len(m2.map):
        raise UsageError(f"models have {len(m1.map)} and {len(m2.map)} observables")
    if mode == "inclusion":
        return _inclusion(m1, m2)
    if mode == "equality":
        return And((_inclusion(m1, m2), _inclusion(m2, m1)))
    if mode == "overlap":
        m2 = m2.apart_from(m1.params)
        body = conj([m1.constraint, m2.constraint, m2.graph(list(m1.map))])
        return exists(list(m1.params) + list(m2.params), body)
    raise UsageError(f"mode must be inclusion, equality or overlap, not {mode!r}")


def _polys(q, params) -> list[Poly]:
    if q is None:
        return [Poly.variable(v, params) for v in params]
    if isinstance(q, (str, Poly)):
        q = [q]
    out = []
    for p in q:
        if isinstance(p, str):
            p = parse_poly(p, params)
        elif not isinstance(p, Poly):
            p = Poly.constant(p, params)
        extra = p.variables() - set(params)
        if extra:
            raise UsageError(f"quantity {p} mentions non-parameters {sorted(extra)}")
        out.append(p)
    return out


def identifiability_sentence(m: PolynomialModel, q=None, with_observables: bool = False) -> Formula:
    """``Q(theta)`` is determined by ``g(theta)`` on the parameter set.

    ``q`` defaults to the identity (global identification).  The observable
    block is optional because ``gamma = g(theta)`` pins it.
    """
    qs = _polys(q, m.params)
    m2 = m.apart_from(m.params)
    ren = dict(zip(m.params, m2.params))
    qs2 = [_rename_poly(p, ren) for p in qs]
    prem = [m.constraint, m2.constraint, m2.graph(list(m.map))]
    if with_observables:
        prem.insert(2, m.graph())
    concl = conj(_eq(_sub(a, b)) for a, b in zip(qs, qs2))
    body = Implies(conj(prem), concl)
    vars_ = (list(m.observables) if with_observables else []) + list(m.params) + list(m2.params)
    return forall(vars_, body)


def quantity_region_formula(m: PolynomialModel, q, var: str = "r") -> Formula:
    """``exists theta (theta admissible and var = Q(theta))``; ``var`` is free."""
    if var in m.params:
        raise UsageError(f"{var!r} is a parameter name")
    (p,) = _polys(q, m.params)
    return exists(list(m.params), conj([m.constraint, _eq(_sub(Poly.variable(var, (var,)), p))]))


def implicitization_formula(m: PolynomialModel) -> Formula:
    """``exists theta (theta admissible and gamma = g(theta))`` with gamma free."""
    return exists(list(m.params), conj([m.constraint, m.graph()]))


# ---------------------------------------------------------------------------
# built-in models
# ---------------------------------------------------------------------------


def heywood_model(variant: str = "correlational") -> PolynomialModel:
    """One hidden variable ``H`` with edges ``H -> X_i`` (weights ``b_i``), three observables.

    ``correlational``: unconstrained weights, known error terms absorbed,
    observables ``r12, r13, r23``.
    ``standardized``: unit-variance observables, so each ``1 - b_i^2 > 0``
    is an error variance.
    ``covariance``: hidden variance ``eH`` and error variances ``e1..e3``,
    all positive; observables ``s11, s22, s33, s12, s13, s23``.
    """
    if variant in ("correlational", "standardized"):
        params = ("b1", "b2", "b3")
        maps = ("b1*b2", "b1*b3", "b2*b3")
        if variant == "correlational":
            constraint = TRUE
        else:
            constraint = parse("1 - b1^2 > 0 and 1 - b2^2 > 0 and 1 - b3^2 > 0", params)
        return PolynomialModel(params, constraint, ("r12", "r13", "r23"), maps,
                               "heywood-corr" if variant == "correlational" else "heywood-std")
    if variant == "covariance":
        params = ("eH", "e1", "e2", "e3", "b1", "b2", "b3")
        maps = ("eH*b1^2 + e1", "eH*b2^2 + e2", "eH*b3^2 + e3", "eH*b1*b2", "eH*b1*b3", "eH*b2*b3")
        constraint = parse("eH > 0 and e1 > 0 and e2 > 0 and e3 > 0", params)
        return PolynomialModel(params, constraint, ("s11", "s22", "s33", "s12", "s13", "s23"), maps,
                               "heywood-cov")
    raise UsageError(f"unknown Heywood variant {variant!r}")


def gaussian_complete_model(n: int = 3, form: str = "covariance") -> PolynomialModel:
    """All positive definite matrices, parameterized by themselves.

    Observables come diagonal first, then the upper triangle row by row, so
    that the covariance form lines up with :func:`heywood_model`.
    """
    _check_form(form)
    diag = [] if form == "correlation" else [matrix_symbol(i, i, n, form) for i in range(1, n + 1)]
    off = [matrix_symbol(i, j, n, form) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    names = tuple(diag + off)
    params = tuple(v + "p" for v in names)
    constraint = _rename(pd_constraints(n, form), dict(zip(names, params)))
    maps = tuple(Poly.variable(v, params) for v in params)
    suffix = "" if form == "covariance" else "-corr"
    return PolynomialModel(params, constraint, names, maps, f"gaussian-complete-{n}{suffix}")


BUILTIN_MODELS = {
    "heywood-corr": lambda: heywood_model("correlational"),
    "heywood-std": lambda: heywood_model("standardized"),
    "heywood-cov": lambda: heywood_model("covariance"),
    "gaussian-complete-3": lambda: gaussian_complete_model(3, "covariance"),
    "gaussian-complete-3-corr": lambda: gaussian_complete_model(3, "correlation"),
}


def builtin_model(name: str) -> PolynomialModel:
    try:
        return BUILTIN_MODELS[name]()
    except KeyError:
        raise UsageError(f"unknown model {name!r}; built-ins: {', '.join(sorted(BUILTIN_MODELS))}") from None


# ---------------------------------------------------------------------------
# model description text
# ---------------------------------------------------------------------------

_KEYS = ("name", "params", "constraint", "observables", "map")


def parse_model(text: str) -> PolynomialModel:
    """Read a model description.

    Example::

        name: heywood-std
        params: b1, b2, b3
        constraint: 1 - b1^2 > 0 and 1 - b2^2 > 0 and 1 - b3^2 > 0
        observables: r12, r13, r23
        map:
          r12 = b1*b2
          r13 = b1*b3
          r23 = b2*b3

    ``#`` starts a comment.  A value may continue on indented lines.
    ``constraint`` may be omitted (no constraint).  Map entries may also be
    given inline, separated by ``;``.
    """
    fields: dict[str, tuple[str, int]] = {}
    key = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        m = re.match(r"([A-Za-z_]+)\s*:(.*)$", line)
        if m and not line[0].isspace():
            key = m.group(1).lower()
            if key not in _KEYS:
                raise ParseError(f"unknown field {key!r} (expected one of {', '.join(_KEYS)})", lineno, 1)
            if key in fields:
                raise ParseError(f"field {key!r} given twice", lineno, 1)
            fields[key] = (m.group(2).strip(), lineno)
        elif key is not None and line[0].isspace():
            val, at = fields[key]
            sep = "; " if key == "map" else " "
            fields[key] = ((val + sep if val else "") + line.strip(), at)
        else:
            raise ParseError("expected 'field: value'", lineno, 1)
    for k in ("params", "observables", "map"):
        if k not in fields:
            raise ParseError(f"missing field {k!r}", 1, 1)

    def names(k):
        val, at = fields[k]
        out = [s for s in re.split(r"[\s,]+", val) if s]
        for s in out:
            if not re.fullmatch(r"[^\W\d]\w*'*", s):
                raise ParseError(f"bad variable name {s!r}", at, 1)
        return tuple(out)

    params, obs = names("params"), names("observables")
    val, at = fields["map"]
    entries = [e.strip() for e in val.split(";") if e.strip()]
    by_name: dict[str, Poly] = {}
    for e in entries:
        if "=" not in e:
            raise ParseError(f"map entry {e!r} needs the form 'observable = polynomial'", at, 1)
        lhs, rhs = (s.strip() for s in e.split("=", 1))
        if lhs not in obs:
            raise ParseError(f"{lhs!r} is not an observable", at, 1)
        if lhs in by_name:
            raise ParseError(f"observable {lhs!r} mapped twice", at, 1)
        try:
            by_name[lhs] = parse_poly(rhs, params)
        except ParseError as err:
            raise ParseError(f"in map entry for {lhs}: {err}", at, 1) from None
    missing = [o for o in obs if o not in by_name]
    if missing:
        raise ParseError(f"no map entry for {', '.join(missing)}", at, 1)
    constraint = TRUE
    if "constraint" in fields:
        cval, cat = fields["constraint"]
        try:
            constraint = parse(cval, params) if cval else TRUE
        except ParseError as err:
            raise ParseError(f"in constraint: {err}", cat, 1) from None
    try:
        return PolynomialModel(params, constraint, obs, tuple(by_name[o] for o in obs),
                               fields.get("name", ("", 0))[0])
    except UsageError as err:
        if isinstance(err, ParseError):
            raise
        raise ParseError(str(err), 1, 1) from None


def format_model(m: PolynomialModel) -> str:
    """Text accepted by :func:`parse_model`."""
    lines = []
    if m.name:
        lines.append(f"name: {m.name}")
    lines.append("params: " + ", ".join(m.params))
    if m.constraint != TRUE:
        lines.append("constraint: " + render(m.constraint))
    lines.append("observables: " + ", ".join(m.observables))
    lines.append("map:")
    for o, p in zip(m.observables, m.map):
        lines.append(f"  {o} = {p}")
    return "\n".join(lines) + "\n"


def load_model(spec: str) -> PolynomialModel:
    """A built-in model by name, or a model description file by path."""
    if spec in BUILTIN_MODELS:
        return builtin_model(spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            return parse_model(fh.read())
    except FileNotFoundError:
        raise UsageError(f"{spec!r} is neither a built-in model nor a readable file") from None
