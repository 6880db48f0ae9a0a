"""Inference rules of the higher-order RUE calculus as clause transformers.

Literal positions are 0-based. Every rule raises ``RuleError`` when its
side conditions fail and otherwise returns fresh clauses without ids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .clauses import Clause, Literal, neg, pos, rename_apart, variant_equal
from .terms import (
    CONNECTIVES,
    PROP,
    Const,
    ErueError,
    Lam,
    Term,
    Var,
    alpha_equal,
    apply,
    arrow,
    as_eq,
    fresh_name,
    free_vars,
    is_beta_normal,
    is_well_typed,
    mk_and,
    mk_eq,
    mk_not,
    mk_or,
    occurs_free,
    spine,
    split_type,
    strip_lambdas,
    type_of,
)


class RuleError(ErueError):
    pass


def _lit(c: Clause, i: int) -> Literal:
    if not 0 <= i < len(c):
        raise RuleError(f"literal index {i} out of range for a clause of length {len(c)}")
    return c[i]


def _negative_eq(c: Clause, i: int):
    lit = _lit(c, i)
    if lit.positive:
        raise RuleError("literal must be negative")
    eq = as_eq(lit.atom)
    if eq is None:
        raise RuleError("literal atom is not an equation")
    return eq


def _splice(c: Clause, i: int, new: Sequence[Literal]) -> Clause:
    return Clause(c.literals[:i] + tuple(new) + c.literals[i + 1 :])


# -- rules --------------------------------------------------------------------------


def resolve(c: Clause, i: int, d: Clause, j: int) -> Clause:
    """Pair literal ``i`` of ``c`` with ``j`` of ``d`` through a negative o-equation."""
    li, lj = _lit(c, i), _lit(d, j)
    if li.positive == lj.positive:
        raise RuleError("resolved literals must have opposite polarities")
    d2, _ = rename_apart(d, {v.name for v in c.free_vars()})
    constraint = neg(mk_eq(li.atom, d2[j].atom))
    return Clause(c.without(i) + d2.without(j) + (constraint,))


def decompose(c: Clause, i: int) -> Clause:
    _, lhs, rhs = _negative_eq(c, i)
    hl, al = spine(lhs)
    hr, ar = spine(rhs)
    if isinstance(hl, Var) or isinstance(hr, Var):
        raise RuleError("flexible head; decomposition needs rigid heads")
    if isinstance(hl, Lam) or isinstance(hr, Lam):
        raise RuleError("cannot decompose an abstraction")
    if hl != hr:
        raise RuleError(f"head clash: {hl.name} vs {hr.name}")
    if hl.name in CONNECTIVES:
        raise RuleError(f"cannot decompose under connective {hl.name}")
    if len(al) != len(ar):
        raise RuleError("arity mismatch")
    return _splice(c, i, [neg(mk_eq(a, v)) for a, v in zip(al, ar)])


def solve_subst(c: Clause, i: int, keep: bool, side: int | None = None) -> Clause:
    """Eliminate a constraint ``X = u`` (or ``u = X``) by binding ``X`` to ``u``.

    ``side`` selects which side holds the variable (0 left, 1 right); by
    default the first orientation passing the occurs-check is used.
    """
    _, lhs, rhs = _negative_eq(c, i)
    options = []
    if side in (None, 0) and isinstance(lhs, Var):
        options.append((lhs, rhs))
    if side in (None, 1) and isinstance(rhs, Var):
        options.append((rhs, lhs))
    if not options:
        raise RuleError("constraint has no variable side")
    for v, u in options:
        if not occurs_free(v, u):
            break
    else:
        raise RuleError(f"occurs-check: {v.name} occurs in its binding")
    rest = c if keep else Clause(c.without(i))
    return rest.substitute({v: u})


def solve_chain(c: Clause, i: int, j: int) -> Clause:
    """Join ``s = X`` (literal i) and ``X = u`` (literal j) into ``s = u``."""
    if i == j:
        raise RuleError("chain needs two distinct literals")
    _, s, x = _negative_eq(c, i)
    _, y, u = _negative_eq(c, j)
    if not isinstance(x, Var) or not isinstance(y, Var):
        raise RuleError("chain needs a variable on the inner sides")
    if x != y:
        raise RuleError(f"chain variables differ: {x.name} vs {y.name}")
    joined = neg(mk_eq(s, u))
    lits = []
    for k, lit in enumerate(c.literals):
        if k == i:
            lits.append(joined)
        elif k != j:
            lits.append(lit)
    return Clause(tuple(lits))


def trivial(c: Clause, i: int) -> Clause:
    _, lhs, rhs = _negative_eq(c, i)
    if not alpha_equal(lhs, rhs):
        raise RuleError("sides are not alpha-equal")
    return Clause(c.without(i))


def flex_rigid_sides(atom: Term) -> tuple[Var, Const] | None:
    """``(flex head, rigid head)`` if the equation ``atom`` is a flex-rigid pair."""
    eq = as_eq(atom)
    if eq is None:
        return None
    found = []
    for flex, rigid in ((eq[1], eq[2]), (eq[2], eq[1])):
        fprefix, fbody = strip_lambdas(flex)
        fhead, _ = spine(fbody)
        rprefix, rbody = strip_lambdas(rigid)
        rhead, _ = spine(rbody)
        if isinstance(fhead, Var) and fhead not in fprefix and isinstance(rhead, Const):
            found.append((fhead, rhead))
    return found[0] if len(found) == 1 else None


def check_binding(c: Clause, i: int, head: Var, rigid: Const, binding: Term) -> None:
    """Raise unless ``binding`` is an admissible partial binding for ``head``."""
    if not is_well_typed(binding) or not is_beta_normal(binding):
        raise RuleError("binding must be well-typed and beta-normal")
    if type_of(binding) != head.type:
        raise RuleError(f"binding type {type_of(binding)} differs from {head.type}")
    prefix, body = strip_lambdas(binding)
    if len(prefix) != len(split_type(head.type)[0]):
        raise RuleError("binding must abstract over every argument of the variable")
    bhead, args = spine(body)
    if bhead != rigid and bhead not in prefix:
        raise RuleError("binding head is neither the rigid head nor a bound argument")
    clause_vars = set(c.free_vars())
    literal_vars = set(free_vars(c[i].atom))
    helpers = set()
    for arg in args:
        g, ws = spine(arg)
        if not isinstance(g, Var) or g in prefix:
            raise RuleError("binding arguments must be helper-variable applications")
        if g in clause_vars or g == head or g in helpers:
            raise RuleError(f"helper variable {g.name} is not fresh")
        helpers.add(g)
        for w in ws:
            if not isinstance(w, Var) or (w not in prefix and w not in literal_vars):
                raise RuleError("helper arguments must be bound or constrained variables")


def flex_rigid(c: Clause, i: int, binding: Term) -> Clause:
    """Record ``F = binding`` as a new constraint for the flex head ``F`` of literal i."""
    _negative_eq(c, i)
    sides = flex_rigid_sides(c[i].atom)
    if sides is None:
        raise RuleError("literal is not a flex-rigid pair")
    head, rigid = sides
    check_binding(c, i, head, rigid, binding)
    return Clause(c.literals + (neg(mk_eq(head, binding)),))


def partial_bindings(c: Clause, i: int) -> list[Term]:
    """Imitation and projection bindings for the flex head of literal ``i``.

    Helpers take the bound arguments only (the textbook shape).
    """
    sides = flex_rigid_sides(c[i].atom)
    if sides is None:
        return []
    head, rigid = sides
    arg_tys, result = split_type(head.type)
    used = {v.name for v in c.free_vars()}
    prefix = []
    for ty in arg_tys:
        name = fresh_name("Y", used)
        used.add(name)
        prefix.append(Var(name, ty))

    def build(h: Term, h_arg_tys) -> Term:
        args = []
        for ty in h_arg_tys:
            g = Var(fresh_name("H", used), _arrow_from([v.type for v in prefix], ty))
            used.add(g.name)
            args.append(apply(g, *prefix))
        body = apply(h, *args)
        for v in reversed(prefix):
            body = Lam(v.name, v.type, body)
        return body

    out = []
    r_args, r_result = split_type(rigid.type)
    if r_result == result:
        out.append(build(rigid, r_args))
    for v in prefix:
        v_args, v_result = split_type(v.type)
        if v_result == result:
            out.append(build(v, v_args))
    return out


def _arrow_from(doms, cod):
    return arrow(*doms, cod) if doms else cod


def factor(c: Clause, i: int, j: int) -> Clause:
    if i == j:
        raise RuleError("factoring needs two distinct literals")
    li, lj = _lit(c, i), _lit(c, j)
    if li.positive != lj.positive:
        raise RuleError("factored literals must have the same polarity")
    return _splice(c, j, [neg(mk_eq(li.atom, lj.atom))])


def equiv(c: Clause, i: int) -> Clause:
    ty, p, q = _negative_eq(c, i)
    if ty != PROP:
        raise RuleError("equivalence expansion needs an equation between propositions")
    expanded = mk_or(mk_and(p, q), mk_and(mk_not(p), mk_not(q)))
    return _splice(c, i, [neg(expanded)])


def cnf_step(c: Clause, i: int) -> list[Clause]:
    lit = _lit(c, i)
    head, args = spine(lit.atom)
    if not isinstance(head, Const) or head.name not in CONNECTIVES:
        raise RuleError("literal has no top connective")
    if head.name == "not":
        return [_splice(c, i, [Literal(args[0], not lit.positive)])]
    a, b = args
    sign = pos if lit.positive else neg
    # negative or / positive and split the clause; the duals stay in one clause
    splits = (head.name == "or") != lit.positive
    if splits:
        return [_splice(c, i, [sign(a)]), _splice(c, i, [sign(b)])]
    return [_splice(c, i, [sign(a), sign(b)])]


def connective_count(c: Clause) -> int:
    n = 0
    for lit in c.literals:
        stack = [lit.atom]
        while stack:
            t = stack.pop()
            head, args = spine(t)
            if isinstance(head, Const) and head.name in CONNECTIVES:
                n += 1
                stack.extend(args)
    return n


def _connective_position(c: Clause) -> int | None:
    for k, lit in enumerate(c.literals):
        head, _ = spine(lit.atom)
        if isinstance(head, Const) and head.name in CONNECTIVES:
            return k
    return None


def cnf_all(c: Clause) -> list[Clause]:
    """Clausify until no literal has a connective at the top; variants merged."""
    done: list[Clause] = []
    todo = [c]
    while todo:
        d = todo.pop(0)
        k = _connective_position(d)
        if k is None:
            if not any(variant_equal(d, e) for e in done):
                done.append(d)
        else:
            todo.extend(cnf_step(d, k))
    return done


# -- enumerating rule applications -------------------------------------------------------

RULES = ("Res", "Dec", "Solve", "Triv", "FlexRig", "Fac", "Equiv", "Cnf")
SOLVE_MODES = ("drop", "keep", "chain")


@dataclass(frozen=True)
class Application:
    """One kernel call: ``op`` with ``args`` applied to the premises."""

    rule: str
    op: str
    args: tuple
    results: tuple[Clause, ...]

    @property
    def mode(self) -> str | None:
        if self.op == "solve_subst":
            return "keep" if self.args[1] else "drop"
        if self.op == "solve_chain":
            return "chain"
        return None

    @property
    def positions(self) -> tuple[int, ...]:
        if self.op in ("resolve", "solve_chain", "factor"):
            return self.args[:2]
        if self.op == "cnf_all":
            return ()
        return self.args[:1]


def run(op: str, args: tuple, premises: Sequence[Clause]) -> tuple[Clause, ...]:
    """Re-execute a recorded kernel call."""
    c = premises[0]
    if op == "resolve":
        return (resolve(c, args[0], premises[1], args[1]),)
    if op == "cnf_step":
        return tuple(cnf_step(c, *args))
    if op == "cnf_all":
        return tuple(cnf_all(c))
    fn = _UNARY[op]
    return (fn(c, *args),)


_UNARY: dict[str, Callable] = {
    "decompose": decompose,
    "solve_subst": solve_subst,
    "solve_chain": solve_chain,
    "trivial": trivial,
    "flex_rigid": flex_rigid,
    "factor": factor,
    "equiv": equiv,
}

BindingSource = Callable[[Clause, int], Iterable[Term]]


def _try(rule: str, op: str, args: tuple, premises) -> Application | None:
    try:
        return Application(rule, op, args, run(op, args, premises))
    except RuleError:
        return None


def _param_space(rule: str, premises: Sequence[Clause], bindings: BindingSource | None):
    c = premises[0]
    n = len(c)
    if rule == "Res":
        d = premises[1]
        for i in range(n):
            for j in range(len(d)):
                if c[i].positive != d[j].positive:
                    yield "resolve", (i, j)
    elif rule == "Dec":
        for i in range(n):
            yield "decompose", (i,)
    elif rule == "Solve":
        for keep in (False, True):
            for i in range(n):
                for side in (0, 1):
                    yield "solve_subst", (i, keep, side)
        for i in range(n):
            for j in range(n):
                if i != j:
                    yield "solve_chain", (i, j)
    elif rule == "Triv":
        for i in range(n):
            yield "trivial", (i,)
    elif rule == "FlexRig":
        source = bindings or partial_bindings
        for i in range(n):
            if c[i].positive or flex_rigid_sides(c[i].atom) is None:
                continue
            for b in source(c, i):
                yield "flex_rigid", (i, b)
    elif rule == "Fac":
        for i in range(n):
            for j in range(n):
                if i != j and c[i].positive == c[j].positive:
                    yield "factor", (i, j)
    elif rule == "Equiv":
        for i in range(n):
            yield "equiv", (i,)
    elif rule == "Cnf":
        for i in range(n):
            yield "cnf_step", (i,)
    else:
        raise RuleError(f"unknown rule {rule!r}")


def applications(
    rule: str, premises: Sequence[Clause], bindings: BindingSource | None = None
) -> Iterator[Application]:
    """Every successful parameterization of ``rule`` on ``premises``, in a fixed order."""
    expected = 2 if rule == "Res" else 1
    if len(premises) != expected:
        raise RuleError(f"{rule} takes {expected} premise(s), got {len(premises)}")
    for op, args in _param_space(rule, premises, bindings):
        app = _try(rule, op, args, premises)
        if app is not None:
            yield app
