"""Surface syntax printer; output is accepted by ``erue.syntax``."""

from __future__ import annotations

from .terms import EQ, Arrow, Const, Lam, SimpleType, Term, Var, as_eq, spine, top_connective

_INFIX = {"and": "&", "or": "|o|"}


def show_type(ty: SimpleType) -> str:
    if isinstance(ty, Arrow):
        dom = show_type(ty.dom)
        if isinstance(ty.dom, Arrow):
            dom = f"({dom})"
        return f"{dom}>{show_type(ty.cod)}"
    return ty.name


def _is_simple(t: Term) -> bool:
    if isinstance(t, (Var, Const)):
        return True
    if isinstance(t, Lam):
        return False
    return as_eq(t) is None and top_connective(t) is None


def _operand(t: Term) -> str:
    s = show_term(t)
    return s if _is_simple(t) else f"({s})"


def show_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Lam):
        return f"^{t.var}:{show_type(t.vtype)}. {show_term(t.body)}"
    eq = as_eq(t)
    if eq is not None:
        return f"{_operand(eq[1])} = {_operand(eq[2])}"
    conn = top_connective(t)
    if conn is not None:
        name, args = conn
        if name == "not":
            return f"~{_operand(args[0])}"
        return f"{_operand(args[0])} {_INFIX[name]} {_operand(args[1])}"
    head, args = spine(t)
    if isinstance(head, Const) and head.name == EQ:
        head_s = "eq"
    elif isinstance(head, Lam):
        head_s = f"({show_term(head)})"
    else:
        head_s = show_term(head)
    return f"{head_s}({', '.join(show_term(a) for a in args)})"
