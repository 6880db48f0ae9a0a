"""Simply-typed lambda terms over the base types ``i`` and ``o``.

Terms are immutable. Variables and constants carry their type; a bound
variable is represented by a ``Var`` whose name matches the enclosing
``Lam`` binder.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union


class ErueError(Exception):
    """Base class for all errors raised by the kernel and its front ends."""


class TypeCheckError(ErueError):
    pass


# -- types -----------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: "SimpleType"
    cod: "SimpleType"

    def __str__(self) -> str:
        dom = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{dom}>{self.cod}"


SimpleType = Union[Base, Arrow]

IND = Base("i")
PROP = Base("o")


def arrow(*types: SimpleType) -> SimpleType:
    """Right-associated arrow ``t1 > t2 > ... > tn``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def split_type(ty: SimpleType) -> tuple[list[SimpleType], SimpleType]:
    args = []
    while isinstance(ty, Arrow):
        args.append(ty.dom)
        ty = ty.cod
    return args, ty


# -- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str
    type: SimpleType

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str
    type: SimpleType

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    var: str
    vtype: SimpleType
    body: "Term"

    @property
    def bound(self) -> Var:
        return Var(self.var, self.vtype)


Term = Union[Var, Const, App, Lam]

# Logical constants are present in every signature. Equality is a family
# indexed by the type of its arguments; the index is recovered from the
# constant's own type.
EQ = "="
NOT = Const("not", Arrow(PROP, PROP))
AND = Const("and", arrow(PROP, PROP, PROP))
OR = Const("or", arrow(PROP, PROP, PROP))
LOGICAL_NAMES = frozenset({EQ, "not", "and", "or"})
CONNECTIVES = frozenset({"not", "and", "or"})


def eq_const(ty: SimpleType) -> Const:
    return Const(EQ, arrow(ty, ty, PROP))


def is_logical(c: Const) -> bool:
    return c.name in LOGICAL_NAMES


def apply(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``h a1 ... an`` into ``(h, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def strip_lambdas(t: Term) -> tuple[list[Var], Term]:
    prefix = []
    while isinstance(t, Lam):
        prefix.append(t.bound)
        t = t.body
    return prefix, t


def mk_eq(lhs: Term, rhs: Term) -> Term:
    ty = type_of(lhs)
    if type_of(rhs) != ty:
        raise TypeCheckError(
            f"equation sides have different types: {type_of(lhs)} vs {type_of(rhs)}"
        )
    return apply(eq_const(ty), lhs, rhs)


def mk_not(t: Term) -> Term:
    return App(NOT, t)


def mk_and(a: Term, b: Term) -> Term:
    return apply(AND, a, b)


def mk_or(a: Term, b: Term) -> Term:
    return apply(OR, a, b)


def as_eq(t: Term) -> tuple[SimpleType, Term, Term] | None:
    """Return ``(index type, lhs, rhs)`` if ``t`` is a full equation."""
    head, args = spine(t)
    if isinstance(head, Const) and head.name == EQ and len(args) == 2:
        return split_type(head.type)[0][0], args[0], args[1]
    return None


def top_connective(t: Term) -> tuple[str, list[Term]] | None:
    head, args = spine(t)
    if isinstance(head, Const) and head.name in CONNECTIVES:
        arity = 1 if head.name == "not" else 2
        if len(args) == arity:
            return head.name, args
    return None


# -- typing ----------------------------------------------------------------


def type_of(t: Term, signature: Mapping[str, SimpleType] | None = None) -> SimpleType:
    """Type of ``t``; raises ``TypeCheckError`` at the first ill-typed subterm.

    With a ``signature``, non-logical constants must be declared with the
    type they carry.
    """
    if isinstance(t, Var):
        return t.type
    if isinstance(t, Const):
        if signature is not None and not is_logical(t):
            if t.name not in signature:
                raise TypeCheckError(f"unknown constant {t.name!r}")
            if signature[t.name] != t.type:
                raise TypeCheckError(
                    f"constant {t.name!r} used at {t.type}, declared {signature[t.name]}"
                )
        return t.type
    if isinstance(t, Lam):
        return Arrow(t.vtype, type_of(t.body, signature))
    fty = type_of(t.fn, signature)
    aty = type_of(t.arg, signature)
    if not isinstance(fty, Arrow):
        raise TypeCheckError(f"cannot apply a term of base type {fty}")
    if fty.dom != aty:
        raise TypeCheckError(f"argument of type {aty} where {fty.dom} is expected")
    return fty.cod


def is_well_typed(t: Term) -> bool:
    try:
        type_of(t)
    except TypeCheckError:
        return False
    return True


# -- free variables and names ----------------------------------------------


def free_vars(t: Term) -> list[Var]:
    """Free variables in order of first occurrence."""
    out: dict[Var, None] = {}
    _collect_free(t, frozenset(), out)
    return list(out)


def _collect_free(t: Term, bound: frozenset, out: dict) -> None:
    while True:
        if isinstance(t, Var):
            if t not in bound:
                out.setdefault(t)
            return
        if isinstance(t, Const):
            return
        if isinstance(t, App):
            _collect_free(t.fn, bound, out)
            t = t.arg
            continue
        bound = bound | {t.bound}
        t = t.body


def occurs_free(v: Var, t: Term) -> bool:
    return v in free_vars(t)


_SUFFIX = re.compile(r"[0-9']+$")


def fresh_name(base: str, used: Iterable[str]) -> str:
    """``base`` stripped of digits/primes plus the smallest unused numeric suffix."""
    used = set(used)
    stem = _SUFFIX.sub("", base) or base
    k = 1
    while f"{stem}{k}" in used:
        k += 1
    return f"{stem}{k}"


def all_names(t: Term) -> set[str]:
    """Every variable name occurring in ``t``, free or bound."""
    names: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            names.add(u.name)
        elif isinstance(u, App):
            stack.append(u.fn)
            stack.append(u.arg)
        elif isinstance(u, Lam):
            names.add(u.var)
            stack.append(u.body)
    return names


# -- substitution and normalization ----------------------------------------


def _subst(t: Term, s: Mapping[Var, Term]) -> Term:
    if isinstance(t, Var):
        return s.get(t, t)
    if isinstance(t, Const):
        return t
    if isinstance(t, App):
        fn = _subst(t.fn, s)
        arg = _subst(t.arg, s)
        if fn is t.fn and arg is t.arg:
            return t
        return App(fn, arg)
    v = t.bound
    body_fv = set(free_vars(t.body))
    inner = {k: u for k, u in s.items() if k != v and k in body_fv}
    if not inner:
        return t
    image_fv = {x for u in inner.values() for x in free_vars(u)}
    if v in image_fv:
        used = {x.name for x in body_fv | image_fv} | {k.name for k in inner}
        used |= all_names(t.body)
        new = Var(fresh_name(t.var, used), t.vtype)
        inner[v] = new
        return Lam(new.name, t.vtype, _subst(t.body, inner))
    return Lam(t.var, t.vtype, _subst(t.body, inner))


def beta_normalize(t: Term) -> Term:
    if isinstance(t, (Var, Const)):
        return t
    if isinstance(t, Lam):
        body = beta_normalize(t.body)
        return t if body is t.body else Lam(t.var, t.vtype, body)
    fn = beta_normalize(t.fn)
    arg = beta_normalize(t.arg)
    if isinstance(fn, Lam):
        return beta_normalize(_subst(fn.body, {fn.bound: arg}))
    if fn is t.fn and arg is t.arg:
        return t
    return App(fn, arg)


def is_beta_normal(t: Term) -> bool:
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            if isinstance(u.fn, Lam):
                return False
            stack.append(u.fn)
            stack.append(u.arg)
        elif isinstance(u, Lam):
            stack.append(u.body)
    return True


def check_substitution(sigma: Mapping[Var, Term]) -> None:
    for v, u in sigma.items():
        if type_of(u) != v.type:
            raise TypeCheckError(f"cannot bind {v.name} : {v.type} to a term of type {type_of(u)}")


def substitute(t: Term, sigma: Mapping[Var, Term]) -> Term:
    """Capture-avoiding simultaneous substitution followed by beta-normalization."""
    check_substitution(sigma)
    return beta_normalize(_subst(t, sigma) if sigma else t)


def rename(t: Term, renaming: Mapping[Var, Var]) -> Term:
    """Apply a variable-to-variable renaming; no normalization needed."""
    return _subst(t, renaming) if renaming else t


# -- comparison --------------------------------------------------------------


def alpha_equal(t: Term, u: Term) -> bool:
    return _alpha(t, u, {}, {}, 0)


def _alpha(t: Term, u: Term, bt: dict, bu: dict, depth: int) -> bool:
    if isinstance(t, Var) and isinstance(u, Var):
        lt, lu = bt.get(t), bu.get(u)
        if lt is None and lu is None:
            return t == u
        return lt == lu
    if isinstance(t, Const) and isinstance(u, Const):
        return t == u
    if isinstance(t, App) and isinstance(u, App):
        return _alpha(t.fn, u.fn, bt, bu, depth) and _alpha(t.arg, u.arg, bt, bu, depth)
    if isinstance(t, Lam) and isinstance(u, Lam):
        if t.vtype != u.vtype:
            return False
        bt = {**bt, t.bound: depth}
        bu = {**bu, u.bound: depth}
        return _alpha(t.body, u.body, bt, bu, depth + 1)
    return False


def size(t: Term) -> int:
    """Symbol count: variables, constants and binders."""
    n = 0
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, App):
            stack.append(u.fn)
            stack.append(u.arg)
        elif isinstance(u, Lam):
            n += 1
            stack.append(u.body)
        else:
            n += 1
    return n
