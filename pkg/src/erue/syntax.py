"""Parser for terms, clauses and problem files.

Concrete syntax::

    % comment
    const a : i.
    const f : i > i.
    clause C1 : +(g(f(a)) = a).
    clause C2 : -(f(g(X)) = X).

Identifiers starting with an uppercase letter are variables, lowercase ones
are constants. ``^Y:i. t`` is abstraction, ``=`` equality, ``&``/``|o|``/``~``
the object-level connectives and ``<=>`` abbreviates
``(A & B) |o| (~A & ~B)``. Types of free variables are inferred; anything
left unconstrained defaults to ``i``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .clauses import Clause, Literal
from .terms import (
    EQ,
    IND,
    LOGICAL_NAMES,
    PROP,
    AND,
    NOT,
    OR,
    App,
    Arrow,
    Base,
    Const,
    ErueError,
    Lam,
    SimpleType,
    Term,
    Var,
    beta_normalize,
    eq_const,
)


class ParseError(ErueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{msg}")


# -- tokens ---------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # ident, string, op, eof
    text: str
    line: int
    col: int
    start: int
    end: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|%[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<number>[0-9]+)
  | (?P<string>"[^"\n]*")
  | (?P<op><=>|\|o\||:=|[()\[\],.:^=&|~>+\-;*])
    """,
    re.VERBOSE,
)


def tokenize(text: str, line: int = 1) -> list[Token]:
    tokens = []
    pos, line_start = 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1, pos, m.end()))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, pos, pos))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek
        return tok.kind in ("op", "ident") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def ident(self) -> Token:
        if self.peek.kind != "ident":
            self.fail("expected an identifier")
        return self.next()

    def fail(self, msg: str):
        tok = self.peek
        found = tok.text or "end of input"
        raise ParseError(f"{msg}, found {found!r}", tok.line, tok.col)


# -- raw syntax -------------------------------------------------------------------
# Raw trees are nested tuples tagged by their first element; they carry no types.


def parse_type(ts: TokenStream) -> SimpleType:
    if ts.accept("("):
        dom = parse_type(ts)
        ts.expect(")")
    else:
        tok = ts.ident()
        if tok.text not in ("i", "o"):
            raise ParseError(f"unknown base type {tok.text!r}", tok.line, tok.col)
        dom = IND if tok.text == "i" else PROP
    if ts.accept(">"):
        return Arrow(dom, parse_type(ts))
    return dom


def parse_raw_term(ts: TokenStream):
    return _parse_iff(ts)


def _parse_iff(ts):
    left = _parse_or(ts)
    if ts.at("<=>"):
        tok = ts.next()
        right = _parse_or(ts)
        left = ("iff", left, right, tok)
    return left


def _parse_or(ts):
    left = _parse_and(ts)
    while ts.at("|o|"):
        tok = ts.next()
        left = ("or", left, _parse_and(ts), tok)
    return left


def _parse_and(ts):
    left = _parse_eq(ts)
    while ts.at("&"):
        tok = ts.next()
        left = ("and", left, _parse_eq(ts), tok)
    return left


def _parse_eq(ts):
    left = _parse_unary(ts)
    if ts.at("="):
        tok = ts.next()
        left = ("eq", left, _parse_unary(ts), tok)
    return left


def _parse_unary(ts):
    if ts.at("~"):
        tok = ts.next()
        return ("not", _parse_unary(ts), tok)
    if ts.at("^"):
        tok = ts.next()
        name = ts.ident()
        ts.expect(":")
        ty = parse_type(ts)
        ts.expect(".")
        return ("lam", name.text, ty, _parse_iff(ts), tok)
    return _parse_app(ts)


def _parse_app(ts):
    if ts.at("("):
        ts.next()
        node = _parse_iff(ts)
        ts.expect(")")
    else:
        tok = ts.ident()
        node = ("id", tok.text, tok)
    while ts.at("("):
        tok = ts.next()
        args = [_parse_iff(ts)]
        while ts.accept(","):
            args.append(_parse_iff(ts))
        ts.expect(")")
        node = ("app", node, args, tok)
    return node


def parse_raw_literal(ts: TokenStream):
    tok = ts.peek
    if ts.accept("+"):
        positive = True
    elif ts.accept("-"):
        positive = False
    else:
        ts.fail("expected '+(' or '-(' to start a literal")
    ts.expect("(")
    body = parse_raw_term(ts)
    ts.expect(")")
    return (positive, body, tok)


def parse_raw_clause(ts: TokenStream) -> list:
    """Literals separated by ``|``; ``[]`` or ``empty`` is the empty clause."""
    if ts.accept("empty"):
        return []
    if ts.accept("["):
        ts.expect("]")
        return []
    lits = [parse_raw_literal(ts)]
    while ts.accept("|"):
        lits.append(parse_raw_literal(ts))
    return lits


# -- type inference ------------------------------------------------------------------


@dataclass(frozen=True)
class TVar:
    id: int


class _Inference:
    def __init__(self, signature: Mapping[str, SimpleType]):
        self.signature = signature
        self.solution: dict[int, object] = {}
        self.counter = itertools.count()

    def fresh(self) -> TVar:
        return TVar(next(self.counter))

    def resolve(self, ty):
        while isinstance(ty, TVar) and ty.id in self.solution:
            ty = self.solution[ty.id]
        return ty

    def occurs(self, tv: TVar, ty) -> bool:
        ty = self.resolve(ty)
        if ty == tv:
            return True
        if isinstance(ty, Arrow):
            return self.occurs(tv, ty.dom) or self.occurs(tv, ty.cod)
        return False

    def unify(self, a, b, tok) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, TVar):
            if self.occurs(a, b):
                raise ParseError("cyclic type", tok.line, tok.col)
            self.solution[a.id] = b
        elif isinstance(b, TVar):
            self.unify(b, a, tok)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, tok)
            self.unify(a.cod, b.cod, tok)
        else:
            raise ParseError(
                f"type mismatch: {self.show(a)} vs {self.show(b)}", tok.line, tok.col
            )

    def show(self, ty) -> str:
        ty = self.zonk(ty)
        return str(ty)

    def zonk(self, ty) -> SimpleType:
        ty = self.resolve(ty)
        if isinstance(ty, TVar):
            return IND
        if isinstance(ty, Arrow):
            return Arrow(self.zonk(ty.dom), self.zonk(ty.cod))
        return ty

    def infer(self, node, bound: dict, free: dict):
        """Return ``(pre-term, type)``; pre-terms may mention ``TVar`` types."""
        tag = node[0]
        if tag == "id":
            name, tok = node[1], node[2]
            if name in bound:
                v = bound[name]
                return v, v.type
            if name[0].isupper():
                if name not in free:
                    free[name] = Var(name, self.fresh())
                v = free[name]
                return v, v.type
            if name in LOGICAL_NAMES or name == "eq":
                raise ParseError(f"{name!r} is a logical constant; use its operator", tok.line, tok.col)
            if name not in self.signature:
                raise ParseError(f"unknown constant {name!r}", tok.line, tok.col)
            ty = self.signature[name]
            return Const(name, ty), ty
        if tag == "app":
            fn, fty = self.infer(node[1], bound, free)
            for arg_node in node[2]:
                arg, aty = self.infer(arg_node, bound, free)
                res = self.fresh()
                self.unify(fty, Arrow(aty, res), node[3])
                fn, fty = App(fn, arg), res
            return fn, fty
        if tag == "lam":
            _, name, ty, body_node, tok = node
            v = Var(name, ty)
            body, bty = self.infer(body_node, {**bound, name: v}, free)
            return Lam(name, ty, body), Arrow(ty, bty)
        if tag == "eq":
            lhs, lty = self.infer(node[1], bound, free)
            rhs, rty = self.infer(node[2], bound, free)
            self.unify(lty, rty, node[3])
            return App(App(Const(EQ, Arrow(lty, Arrow(lty, PROP))), lhs), rhs), PROP
        if tag == "not":
            arg, ty = self.infer(node[1], bound, free)
            self.unify(ty, PROP, node[2])
            return App(NOT, arg), PROP
        if tag in ("and", "or"):
            lhs, lty = self.infer(node[1], bound, free)
            rhs, rty = self.infer(node[2], bound, free)
            self.unify(lty, PROP, node[3])
            self.unify(rty, PROP, node[3])
            return App(App(AND if tag == "and" else OR, lhs), rhs), PROP
        if tag == "iff":
            lhs, lty = self.infer(node[1], bound, free)
            rhs, rty = self.infer(node[2], bound, free)
            self.unify(lty, PROP, node[3])
            self.unify(rty, PROP, node[3])
            both = App(App(AND, lhs), rhs)
            neither = App(App(AND, App(NOT, lhs)), App(NOT, rhs))
            return App(App(OR, both), neither), PROP
        raise AssertionError(tag)

    def finish(self, t) -> Term:
        if isinstance(t, Var):
            return Var(t.name, self.zonk(t.type))
        if isinstance(t, Const):
            return Const(t.name, self.zonk(t.type))
        if isinstance(t, App):
            return App(self.finish(t.fn), self.finish(t.arg))
        return Lam(t.var, self.zonk(t.vtype), self.finish(t.body))


def elaborate_clause(
    raw: list,
    signature: Mapping[str, SimpleType],
    cid: str | None = None,
    var_types: Mapping[str, SimpleType] | None = None,
) -> Clause:
    inf = _Inference(signature)
    free = {name: Var(name, ty) for name, ty in (var_types or {}).items()}
    pre = []
    for positive, node, tok in raw:
        atom, ty = inf.infer(node, {}, free)
        inf.unify(ty, PROP, tok)
        pre.append((positive, atom))
    return Clause(tuple(Literal(beta_normalize(inf.finish(a)), p) for p, a in pre), cid)


def elaborate_term(
    raw,
    signature: Mapping[str, SimpleType],
    var_types: Mapping[str, SimpleType] | None = None,
    expected: SimpleType | None = None,
    tok: Token | None = None,
) -> Term:
    inf = _Inference(signature)
    free = {name: Var(name, ty) for name, ty in (var_types or {}).items()}
    t, ty = inf.infer(raw, {}, free)
    if expected is not None:
        inf.unify(ty, expected, tok or Token("eof", "", 0, 0, 0, 0))
    return beta_normalize(inf.finish(t))


def _at_eof(ts: TokenStream) -> None:
    if ts.peek.kind != "eof":
        ts.fail("unexpected trailing input")


def parse_term(
    text: str,
    signature: Mapping[str, SimpleType],
    var_types: Mapping[str, SimpleType] | None = None,
    expected: SimpleType | None = None,
) -> Term:
    ts = TokenStream(tokenize(text))
    raw = parse_raw_term(ts)
    _at_eof(ts)
    return elaborate_term(raw, signature, var_types, expected)


def parse_clause(
    text: str, signature: Mapping[str, SimpleType], cid: str | None = None, line: int = 1
) -> Clause:
    ts = TokenStream(tokenize(text, line))
    raw = parse_raw_clause(ts)
    _at_eof(ts)
    return elaborate_clause(raw, signature, cid)


# -- problem files ---------------------------------------------------------------------


@dataclass
class Problem:
    signature: dict[str, SimpleType] = field(default_factory=dict)
    clauses: list[Clause] = field(default_factory=list)
    source: str | None = None

    def clause(self, cid: str) -> Clause:
        for c in self.clauses:
            if c.id == cid:
                return c
        raise KeyError(cid)


def parse_problem(text: str, source: str | None = None) -> Problem:
    ts = TokenStream(tokenize(text))
    problem = Problem(source=source)
    while ts.peek.kind != "eof":
        kw = ts.ident()
        if kw.text == "const":
            name = ts.ident()
            if name.text in LOGICAL_NAMES or name.text == "eq":
                raise ParseError(f"cannot redeclare logical constant {name.text!r}", name.line, name.col)
            if name.text[0].isupper():
                raise ParseError(f"constant names must be lowercase: {name.text!r}", name.line, name.col)
            if name.text in problem.signature:
                raise ParseError(f"duplicate constant {name.text!r}", name.line, name.col)
            ts.expect(":")
            problem.signature[name.text] = parse_type(ts)
        elif kw.text == "clause":
            cid = ts.ident()
            if any(c.id == cid.text for c in problem.clauses):
                raise ParseError(f"duplicate clause id {cid.text!r}", cid.line, cid.col)
            ts.expect(":")
            raw = parse_raw_clause(ts)
            problem.clauses.append(elaborate_clause(raw, problem.signature, cid.text))
        else:
            raise ParseError(f"expected 'const' or 'clause', found {kw.text!r}", kw.line, kw.col)
        ts.expect(".")
    return problem


def format_problem(problem: Problem) -> str:
    from .pretty import show_type

    lines = [f"const {name} : {show_type(ty)}." for name, ty in problem.signature.items()]
    lines += [f"clause {c.id} : {c}." for c in problem.clauses]
    return "\n".join(lines) + "\n"


DATA_DIR = Path(__file__).parent / "data"


def resolve_path(path: str | Path, relative_to: Path | None = None) -> Path:
    """Locate ``path`` as given, next to ``relative_to``, or among bundled data."""
    p = Path(path)
    candidates = [p]
    if not p.is_absolute():
        if relative_to is not None:
            candidates.append(relative_to / p)
        candidates.append(DATA_DIR / p)
    for c in candidates:
        if c.is_file():
            return c
    raise FileNotFoundError(str(path))


def load_problem(path: str | Path, relative_to: Path | None = None) -> Problem:
    p = resolve_path(path, relative_to)
    return parse_problem(p.read_text(), source=str(path))
