"""Formulas of the first-order language of ordered fields.

Atoms always have the shape ``p rel 0``.  The concrete syntax (see the
README for the EBNF) accepts both ``forall x. phi``, whose scope extends as far to the right as
possible, and the textbook prefix ``(forall x) phi``, which binds like
``not``; write ``(forall x) [phi]`` for a larger scope.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .polynomial import Poly, Q, UsageError

__all__ = [
    "Formula",
    "Atom",
    "Const",
    "And",
    "Or",
    "Not",
    "Implies",
    "Iff",
    "Quant",
    "TRUE",
    "FALSE",
    "PrenexFormula",
    "ParseError",
    "parse",
    "parse_poly",
    "render",
    "to_prenex",
    "substitute",
    "free_vars",
    "bound_vars",
    "atoms",
    "conj",
    "disj",
    "forall",
    "exists",
]

RELATIONS = ("=", "!=", "<", "<=", ">", ">=")
_NEGATED = {"=": "!=", "!=": "=", "<": ">=", ">=": "<", ">": "<=", "<=": ">"}


class Formula:
    """Base class of the immutable formula AST."""

    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True, eq=True, repr=False)
class Atom(Formula):
    poly: Poly
    rel: str

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise UsageError(f"unknown relation {self.rel!r}")

    def holds(self, value) -> bool:
        s = (value > 0) - (value < 0)
        return _REL_TEST[self.rel](s)

    def __repr__(self):
        return f"Atom({self.poly} {self.rel} 0)"


_REL_TEST = {
    "=": lambda s: s == 0,
    "!=": lambda s: s != 0,
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
}


@dataclass(frozen=True, repr=False)
class Const(Formula):
    value: bool

    def __repr__(self):
        return "TRUE" if self.value else "FALSE"


TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Iff(Formula):
    lhs: Formula
    rhs: Formula


@dataclass(frozen=True)
class Quant(Formula):
    kind: str
    var: str
    body: Formula

    def __post_init__(self):
        if self.kind not in ("forall", "exists"):
            raise UsageError(f"unknown quantifier {self.kind!r}")


def forall(vars_: str | Sequence[str], body: Formula) -> Formula:
    for v in reversed([vars_] if isinstance(vars_, str) else list(vars_)):
        body = Quant("forall", v, body)
    return body


def exists(vars_: str | Sequence[str], body: Formula) -> Formula:
    for v in reversed([vars_] if isinstance(vars_, str) else list(vars_)):
        body = Quant("exists", v, body)
    return body


def conj(args: Iterable[Formula]) -> Formula:
    """Flattening conjunction with constant folding."""
    out = []
    for a in args:
        if a == TRUE:
            continue
        if a == FALSE:
            return FALSE
        if isinstance(a, And):
            out.extend(a.args)
        else:
            out.append(a)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(args: Iterable[Formula]) -> Formula:
    out = []
    for a in args:
        if a == FALSE:
            continue
        if a == TRUE:
            return TRUE
        if isinstance(a, Or):
            out.extend(a.args)
        else:
            out.append(a)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


# ---------------------------------------------------------------------------
# traversal helpers
# ---------------------------------------------------------------------------


def _children(f: Formula) -> tuple:
    if isinstance(f, (And, Or)):
        return f.args
    if isinstance(f, Not):
        return (f.arg,)
    if isinstance(f, (Implies, Iff)):
        return (f.lhs, f.rhs)
    if isinstance(f, Quant):
        return (f.body,)
    return ()


def atoms(f: Formula) -> list[Atom]:
    out: list[Atom] = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.append(g)
        else:
            stack.extend(reversed(_children(g)))
    return out


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Atom):
        return f.poly.variables()
    if isinstance(f, Quant):
        return free_vars(f.body) - {f.var}
    out: set[str] = set()
    for c in _children(f):
        out |= free_vars(c)
    return out


def bound_vars(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Quant):
            out.add(g.var)
        stack.extend(_children(g))
    return out


# ---------------------------------------------------------------------------
# lexer and parser
# ---------------------------------------------------------------------------


class ParseError(UsageError):
    """Syntax error carrying a 1-based line and column."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<op><->|<=>|->|=>|<=|>=|!=|/=|==|&&|\|\||[-+*/^()\[\]<>=.,:!~&|])
  | (?P<uni>[∀∃∧∨¬→↔≤≥≠·−⇒⇔])
  | (?P<ident>[^\W\d]\w*'*)
    """,
    re.VERBOSE | re.UNICODE,
)

_UNICODE = {
    "∀": "forall", "∃": "exists", "∧": "and", "∨": "or", "¬": "not", "→": "->", "⇒": "->",
    "↔": "<->", "⇔": "<->", "≤": "<=", "≥": ">=", "≠": "!=", "·": "*", "−": "-",
}
_ALIASES = {
    "<=>": "<->", "=>": "->", "/=": "!=", "==": "=", "&&": "and", "&": "and", "||": "or",
    "|": "or", "!": "not", "~": "not",
}
_KEYWORDS = {"forall", "exists", "and", "or", "not", "true", "false", "True", "False"}


@dataclass
class _Tok:
    kind: str  # 'num', 'ident', 'op', 'kw', 'eof'
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            pass
        elif kind == "uni":
            t = _UNICODE[s]
            toks.append(_Tok("kw" if t.isalpha() else "op", t, line, col))
        elif kind == "ident":
            if s in _KEYWORDS:
                t = {"True": "true", "False": "false"}.get(s, s)
                toks.append(_Tok("kw", t, line, col))
            else:
                toks.append(_Tok("ident", s, line, col))
        elif kind == "op":
            t = _ALIASES.get(s, s)
            toks.append(_Tok("kw" if t.isalpha() else "op", t, line, col))
        else:
            toks.append(_Tok(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            line_start = pos + s.rindex("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Backtrack(Exception):
    pass


# intermediate term trees: ('num', mpq) | ('var', name) | ('add', a, b) | ('sub', a, b)
# | ('mul', a, b) | ('div', a, b) | ('neg', a) | ('pow', a, n)


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.order: dict[str, None] = {}

    # -- token helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def at(self, *texts) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text in texts

    def take(self, *texts) -> _Tok:
        if not self.at(*texts):
            self.error(f"expected {' or '.join(map(repr, texts))}")
        t = self.tok
        self.i += 1
        return t

    def error(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{msg}, found {found}", t.line, t.col)

    # -- formulas
    def formula(self):
        if self.at("forall", "exists"):
            return self.quantified()
        return self.iff()

    def quantified(self):
        kind = self.take("forall", "exists").text
        names = [self.var_name()]
        while self.at(","):
            self.i += 1
            names.append(self.var_name())
        if self.at(".", ":"):
            self.i += 1
        body = self.formula()
        for v in reversed(names):
            body = ("quant", kind, v, body)
        return body

    def var_name(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.error("expected a variable name")
        self.i += 1
        self.order.setdefault(t.text)
        return t.text

    def iff(self):
        lhs = self.implies()
        while self.at("<->"):
            self.i += 1
            rhs = self.implies()
            lhs = ("iff", lhs, rhs)
        return lhs

    def implies(self):
        lhs = self.disjunction()
        if self.at("->"):
            self.i += 1
            rhs = self.formula() if self.at("forall", "exists") else self.implies()
            return ("implies", lhs, rhs)
        return lhs

    def disjunction(self):
        args = [self.conjunction()]
        while self.at("or"):
            self.i += 1
            args.append(self.conjunction())
        return args[0] if len(args) == 1 else ("or", args)

    def conjunction(self):
        args = [self.unary()]
        while self.at("and"):
            self.i += 1
            args.append(self.unary())
        return args[0] if len(args) == 1 else ("and", args)

    def unary(self):
        if self.at("not"):
            self.i += 1
            return ("not", self.unary())
        if self.at("forall", "exists"):
            return self.quantified()
        if self.at("(") and self.toks[self.i + 1].text in ("forall", "exists") \
                and self.toks[self.i + 1].kind == "kw":
            # '(forall x)' prefix form, or a parenthesised quantified formula
            save = self.i
            self.i += 1
            kind = self.take("forall", "exists").text
            if self.tok.kind == "ident" and self.toks[self.i + 1].text in (")", ","):
                names = [self.var_name()]
                while self.at(","):
                    self.i += 1
                    names.append(self.var_name())
                self.take(")")
                # textbook prefix: binds like 'not', so the scope is the next unary formula
                body = self.unary()
                for v in reversed(names):
                    body = ("quant", kind, v, body)
                return body
            self.i = save
        if self.at("true"):
            self.i += 1
            return ("const", True)
        if self.at("false"):
            self.i += 1
            return ("const", False)
        if self.at("["):
            self.i += 1
            f = self.formula()
            self.take("]")
            return f
        if self.at("("):
            save = self.i
            try:
                self.i += 1
                f = self.formula()
                self.take(")")
                if self.at(*RELATIONS, "+", "-", "*", "/", "^"):
                    raise _Backtrack
                return f
            except (ParseError, _Backtrack):
                self.i = save
        return self.relation()

    def relation(self):
        lhs = self.expr()
        if not self.at(*RELATIONS):
            self.error("expected a relation (=, !=, <, <=, >, >=)")
        out = []
        while self.at(*RELATIONS):
            rel = self.tok.text
            self.i += 1
            rhs = self.expr()
            out.append(("atom", ("sub", lhs, rhs), rel))
            lhs = rhs
        return out[0] if len(out) == 1 else ("and", out)

    # -- terms
    def expr(self):
        if self.at("+", "-"):
            neg = self.tok.text == "-"
            self.i += 1
            t = self.term()
            acc = ("neg", t) if neg else t
        else:
            acc = self.term()
        while self.at("+", "-"):
            op = "add" if self.tok.text == "+" else "sub"
            self.i += 1
            acc = (op, acc, self.term())
        return acc

    def term(self):
        acc = self.factor()
        while self.at("*", "/"):
            op = "mul" if self.tok.text == "*" else "div"
            self.i += 1
            acc = (op, acc, self.factor())
        return acc

    def factor(self):
        if self.at("-"):
            self.i += 1
            return ("neg", self.factor())
        if self.at("+"):
            self.i += 1
            return self.factor()
        base = self.primary()
        if self.at("^"):
            self.i += 1
            t = self.tok
            if t.kind != "num" or "." in t.text:
                self.error("expected a non-negative integer exponent")
            self.i += 1
            return ("pow", base, int(t.text))
        return base

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            if "." in t.text:
                whole, frac = t.text.split(".")
                return ("num", mpq(int(whole + frac), 10 ** len(frac)))
            return ("num", mpq(int(t.text)))
        if t.kind == "ident":
            self.i += 1
            self.order.setdefault(t.text)
            return ("var", t.text)
        if self.at("("):
            self.i += 1
            e = self.expr()
            self.take(")")
            return e
        self.error("expected a term")


def _term_to_poly(t, gens: tuple) -> Poly:
    tag = t[0]
    if tag == "num":
        return Poly.constant(t[1], gens)
    if tag == "var":
        return Poly.variable(t[1], gens)
    if tag == "neg":
        return -_term_to_poly(t[1], gens)
    if tag == "pow":
        return _term_to_poly(t[1], gens) ** t[2]
    a = _term_to_poly(t[1], gens)
    b = _term_to_poly(t[2], gens)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    if tag == "mul":
        return a * b
    if not b.is_constant() or not b:
        raise UsageError("division only by a nonzero rational constant")
    return a / b.constant_value()


def _build(node, gens: tuple) -> Formula:
    tag = node[0]
    if tag == "atom":
        return Atom(_term_to_poly(node[1], gens), node[2])
    if tag == "const":
        return TRUE if node[1] else FALSE
    if tag == "and":
        return And(tuple(_build(a, gens) for a in node[1]))
    if tag == "or":
        return Or(tuple(_build(a, gens) for a in node[1]))
    if tag == "not":
        return Not(_build(node[1], gens))
    if tag == "implies":
        return Implies(_build(node[1], gens), _build(node[2], gens))
    if tag == "iff":
        return Iff(_build(node[1], gens), _build(node[2], gens))
    if tag == "quant":
        return Quant(node[1], node[2], _build(node[3], gens))
    raise AssertionError(tag)


def parse(text: str, gens: Sequence[str] | None = None) -> Formula:
    """Parse formula text; atoms become ``p rel 0`` over the formula's variables.

    ``gens`` fixes the ambient variable tuple (extra variables found in the
    text are appended).
    """
    p = _Parser(text)
    tree = p.formula()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    order = list(gens or [])
    for v in p.order:
        if v not in order:
            order.append(v)
    try:
        return _build(tree, tuple(order))
    except UsageError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(str(e), 1, 1) from None


def parse_poly(text: str, gens: Sequence[str] | None = None) -> Poly:
    """Parse a polynomial expression."""
    p = _Parser(text)
    t = p.expr()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    order = list(gens or [])
    for v in p.order:
        if v not in order:
            order.append(v)
    return _term_to_poly(t, tuple(order))


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

_PREC = {Quant: 0, Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6, Const: 6}


def render(f: Formula) -> str:
    """Concrete syntax that parses back to the same tree."""
    if isinstance(f, Atom):
        return f"{f.poly.to_str()} {f.rel} 0"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Quant):
        return f"{f.kind} {f.var}. {render(f.body)}"
    if isinstance(f, Not):
        return "not " + _wrap(f.arg, 5)
    if isinstance(f, (And, Or)):
        op = " and " if isinstance(f, And) else " or "
        p = _PREC[type(f)]
        return op.join(_wrap(a, p + 1) for a in f.args)
    if isinstance(f, Implies):
        return _wrap(f.lhs, 3) + " -> " + _wrap(f.rhs, 2, tail=True)
    if isinstance(f, Iff):
        return _wrap(f.lhs, 1) + " <-> " + _wrap(f.rhs, 2)
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f: Formula, min_prec: int, tail: bool = False) -> str:
    p = _PREC[type(f)]
    if p >= min_prec and not (isinstance(f, Quant) and not tail):
        return render(f)
    if isinstance(f, Quant) and tail:
        return render(f)
    return "(" + render(f) + ")"


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------


def substitute(f: Formula, bindings: Mapping[str, object]) -> Formula:
    """Plug rationals into ``f``; ground atoms fold to true/false."""
    if not bindings:
        return f
    vals = {k: Q(v) for k, v in bindings.items()}
    return _subst(f, vals)


def _subst(f: Formula, vals: dict) -> Formula:
    if isinstance(f, Atom):
        p = f.poly.subs(vals)
        if p.is_constant():
            return TRUE if f.holds(p.constant_value()) else FALSE
        return Atom(p, f.rel)
    if isinstance(f, Const):
        return f
    if isinstance(f, And):
        return conj(_subst(a, vals) for a in f.args)
    if isinstance(f, Or):
        return disj(_subst(a, vals) for a in f.args)
    if isinstance(f, Not):
        a = _subst(f.arg, vals)
        if isinstance(a, Const):
            return FALSE if a.value else TRUE
        return Not(a)
    if isinstance(f, Implies):
        a, b = _subst(f.lhs, vals), _subst(f.rhs, vals)
        if a == FALSE or b == TRUE:
            return TRUE
        if a == TRUE:
            return b
        return Implies(a, b)
    if isinstance(f, Iff):
        a, b = _subst(f.lhs, vals), _subst(f.rhs, vals)
        if isinstance(a, Const) and isinstance(b, Const):
            return TRUE if a.value == b.value else FALSE
        return Iff(a, b)
    if isinstance(f, Quant):
        inner = {k: v for k, v in vals.items() if k != f.var}
        body = _subst(f.body, inner) if inner else f.body
        if isinstance(body, Const):
            return body
        return Quant(f.kind, f.var, body)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# prenex normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrenexFormula:
    """Quantifier prefix over a matrix built from ``and``/``or`` and ``<, =, >`` atoms."""

    prefix: tuple  # ((kind, var), ...) outermost first
    matrix: Formula
    free: tuple  # free variables, in CAD order
    order: tuple = field(default=())  # free + bound variables: the CAD variable order

    def to_formula(self) -> Formula:
        f = self.matrix
        for kind, v in reversed(self.prefix):
            f = Quant(kind, v, f)
        return f


def _nnf(f: Formula, neg: bool) -> Formula:
    """Negation normal form over ``<, =, >`` atoms; removes ``->`` and ``<->``."""
    if isinstance(f, Atom):
        rel = _NEGATED[f.rel] if neg else f.rel
        p = f.poly
        if rel in ("=", "<", ">"):
            return Atom(p, rel)
        if rel == "!=":
            return Or((Atom(p, "<"), Atom(p, ">")))
        if rel == "<=":
            if neg:
                # not (p > 0)
                return Or((Atom(p, "="), Atom(p, "<")))
            return Or((Atom(p, "<"), Atom(p, "=")))
        if neg:
            return Or((Atom(p, "="), Atom(p, ">")))
        return Or((Atom(p, ">"), Atom(p, "=")))
    if isinstance(f, Const):
        return Const(f.value != neg)
    if isinstance(f, Not):
        return _nnf(f.arg, not neg)
    if isinstance(f, And):
        args = [_nnf(a, neg) for a in f.args]
        return disj(args) if neg else conj(args)
    if isinstance(f, Or):
        args = [_nnf(a, neg) for a in f.args]
        return conj(args) if neg else disj(args)
    if isinstance(f, Implies):
        return _nnf(Or((Not(f.lhs), f.rhs)), neg)
    if isinstance(f, Iff):
        a, b = f.lhs, f.rhs
        both = And((a, b))
        neither = And((Not(a), Not(b)))
        if neg:
            # exactly one holds
            return _nnf(Or((And((a, Not(b))), And((Not(a), b)))), False)
        return _nnf(Or((both, neither)), False)
    if isinstance(f, Quant):
        kind = f.kind
        if neg:
            kind = "exists" if kind == "forall" else "forall"
        return Quant(kind, f.var, _nnf(f.body, neg))
    raise TypeError(f"not a formula: {f!r}")


def _rename_poly(p: Poly, mapping: Mapping[str, str]) -> Poly:
    if not any(g in mapping for g in p.gens):
        return p
    gens = tuple(mapping.get(g, g) for g in p.gens)
    if len(set(gens)) != len(gens):
        # a renamed variable collides with an existing (unused) generator
        used = p.variables()
        keep = [g for g in p.gens if g in used or g in mapping]
        p = p.set_gens(tuple(keep))
        gens = tuple(mapping.get(g, g) for g in p.gens)
    return Poly._raw(gens, p._t)


def _rename_apart(f: Formula, taken: set[str], env: dict[str, str]) -> Formula:
    if isinstance(f, Atom):
        m = {k: v for k, v in env.items() if k != v}
        return Atom(_rename_poly(f.poly, m), f.rel) if m else f
    if isinstance(f, Const):
        return f
    if isinstance(f, And):
        return And(tuple(_rename_apart(a, taken, env) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_rename_apart(a, taken, env) for a in f.args))
    if isinstance(f, Quant):
        v = f.var
        new = v
        if v in taken:
            for i in itertools.count(1):
                new = f"{v}_{i}"
                if new not in taken:
                    break
        taken.add(new)
        inner = dict(env)
        inner[v] = new
        return Quant(f.kind, new, _rename_apart(f.body, taken, inner))
    raise TypeError(f"unexpected node in negation normal form: {f!r}")


def _pull(f: Formula, prefer: str) -> tuple[list, Formula]:
    """Return ``(blocks, matrix)``; ``blocks`` is a list of ``(kind, [vars])``."""
    if isinstance(f, Quant):
        fv = free_vars(f.body)
        blocks, m = _pull(f.body, f.kind)
        if f.var not in fv:
            return blocks, m
        if blocks and blocks[0][0] == f.kind:
            return [(f.kind, [f.var] + blocks[0][1])] + blocks[1:], m
        return [(f.kind, [f.var])] + blocks, m
    if isinstance(f, (And, Or)):
        parts = [_pull(a, prefer) for a in f.args]
        mats = [m for _, m in parts]
        queues = [list(b) for b, _ in parts]
        merged: list = []
        kind = prefer
        while any(queues):
            if not any(q and q[0][0] == kind for q in queues):
                kind = "exists" if kind == "forall" else "forall"
            vars_: list = []
            for q in queues:
                if q and q[0][0] == kind:
                    vars_.extend(q.pop(0)[1])
            if merged and merged[-1][0] == kind:
                merged[-1] = (kind, merged[-1][1] + vars_)
            else:
                merged.append((kind, vars_))
            kind = "exists" if kind == "forall" else "forall"
        mat = conj(mats) if isinstance(f, And) else disj(mats)
        return merged, mat
    return [], f


def to_prenex(f: Formula, free_order: Sequence[str] | None = None) -> PrenexFormula:
    """Equivalent prenex form with bound variables renamed apart.

    The matrix uses only ``and``/``or`` over atoms with relations ``<``, ``=``
    and ``>``.  Quantifier blocks are merged greedily, so the prefix has as
    few alternations as the formula's structure allows.
    """
    fv = free_vars(f)
    if free_order is None:
        order_free = free_order_of(f)
    else:
        order_free = list(free_order)
        missing = fv - set(order_free)
        if missing:
            raise UsageError(f"variable order misses free variables {sorted(missing)}")
        order_free = [v for v in order_free if v in fv]
    g = _nnf(f, False)
    g = _rename_apart(g, set(fv), {})
    top = g.kind if isinstance(g, Quant) else "exists"
    blocks, matrix = _pull(g, top)
    prefix = tuple((k, v) for k, vs in blocks for v in vs)
    order = tuple(order_free) + tuple(v for _, v in prefix)
    matrix = _regen(matrix, order)
    return PrenexFormula(prefix, matrix, tuple(order_free), order)


def free_order_of(f: Formula) -> list[str]:
    fv = free_vars(f)
    out = []
    for a in atoms(f):
        for v in a.poly.gens:
            if v in fv and v not in out:
                out.append(v)
    return out


def _regen(f: Formula, gens: tuple) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.poly.set_gens(_with_extra(f.poly, gens)), f.rel)
    if isinstance(f, And):
        return And(tuple(_regen(a, gens) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(_regen(a, gens) for a in f.args))
    return f


def _with_extra(p: Poly, gens: tuple) -> tuple:
    used = p.variables()
    missing = [v for v in used if v not in gens]
    if missing:
        raise UsageError(f"variables {missing} are not in the order {gens}")
    return gens
