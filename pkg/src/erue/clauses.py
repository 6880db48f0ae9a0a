"""Literals and clauses, with comparison up to renaming and literal order."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .pretty import show_term
from .terms import (
    PROP,
    App,
    Const,
    ErueError,
    Lam,
    Term,
    TypeCheckError,
    Var,
    beta_normalize,
    fresh_name,
    free_vars,
    is_beta_normal,
    rename,
    size,
    substitute,
    type_of,
)


@dataclass(frozen=True)
class Literal:
    atom: Term
    positive: bool

    def __post_init__(self):
        if type_of(self.atom) != PROP:
            raise TypeCheckError(f"literal atom is not a proposition: {show_term(self.atom)}")

    def __str__(self) -> str:
        return f"{'+' if self.positive else '-'}({show_term(self.atom)})"

    def negated(self) -> "Literal":
        return Literal(self.atom, not self.positive)


def pos(atom: Term) -> Literal:
    return Literal(beta_normalize(atom), True)


def neg(atom: Term) -> Literal:
    return Literal(beta_normalize(atom), False)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]
    id: str | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    def __getitem__(self, i: int) -> Literal:
        return self.literals[i]

    def __str__(self) -> str:
        if not self.literals:
            return "[]"
        return " | ".join(str(lit) for lit in self.literals)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def named(self, cid: str | None) -> "Clause":
        return replace(self, id=cid)

    def free_vars(self) -> list[Var]:
        seen: dict[Var, None] = {}
        for lit in self.literals:
            for v in free_vars(lit.atom):
                seen.setdefault(v)
        return list(seen)

    def weight(self) -> int:
        return sum(size(lit.atom) for lit in self.literals)

    def without(self, *indices: int) -> tuple[Literal, ...]:
        drop = set(indices)
        return tuple(lit for k, lit in enumerate(self.literals) if k not in drop)

    def substitute(self, sigma: Mapping[Var, Term]) -> "Clause":
        return Clause(tuple(Literal(substitute(l.atom, sigma), l.positive) for l in self.literals))

    def rename(self, renaming: Mapping[Var, Var]) -> "Clause":
        return Clause(tuple(Literal(rename(l.atom, renaming), l.positive) for l in self.literals))


def check_clause(c: Clause) -> None:
    """Raise if any kernel invariant fails for ``c``."""
    for lit in c.literals:
        if type_of(lit.atom) != PROP:
            raise TypeCheckError(f"atom {show_term(lit.atom)} is not of type o")
        if not is_beta_normal(lit.atom):
            raise ErueError(f"atom {show_term(lit.atom)} is not beta-normal")


# -- renaming apart -----------------------------------------------------------


def rename_apart(c: Clause, avoid: Iterable[str]) -> tuple[Clause, dict[Var, Var]]:
    """Variant of ``c`` whose free variables avoid the names in ``avoid``.

    Only variables whose names clash are renamed; the renaming is returned.
    """
    avoid = set(avoid)
    fvs = c.free_vars()
    used = avoid | {v.name for v in fvs}
    renaming: dict[Var, Var] = {}
    for v in fvs:
        if v.name in avoid:
            new = fresh_name(v.name, used)
            used.add(new)
            renaming[v] = Var(new, v.type)
    if not renaming:
        return c, {}
    return c.rename(renaming).named(c.id), renaming


# -- variant equality ---------------------------------------------------------


def _match(t: Term, u: Term, ren: dict, inv: dict, bt: dict, bu: dict, depth: int) -> bool:
    """Extend the bijection ``ren``/``inv`` so that ``t`` renames to ``u``."""
    if isinstance(t, Var) and isinstance(u, Var):
        lt, lu = bt.get(t), bu.get(u)
        if lt is not None or lu is not None:
            return lt == lu
        if t.type != u.type:
            return False
        if t in ren:
            return ren[t] == u
        if u in inv:
            return False
        ren[t] = u
        inv[u] = t
        return True
    if isinstance(t, Const) and isinstance(u, Const):
        return t == u
    if isinstance(t, App) and isinstance(u, App):
        return _match(t.fn, u.fn, ren, inv, bt, bu, depth) and _match(
            t.arg, u.arg, ren, inv, bt, bu, depth
        )
    if isinstance(t, Lam) and isinstance(u, Lam):
        if t.vtype != u.vtype:
            return False
        return _match(
            t.body, u.body, ren, inv, {**bt, t.bound: depth}, {**bu, u.bound: depth}, depth + 1
        )
    return False


def match_renaming(t: Term, u: Term, ren: dict | None = None) -> dict[Var, Var] | None:
    """Bijective free-variable renaming taking ``t`` to ``u`` (up to alpha), or None."""
    ren = dict(ren or {})
    inv = {v: k for k, v in ren.items()}
    return ren if _match(t, u, ren, inv, {}, {}, 0) else None


def variant_equal(c: Clause, d: Clause) -> bool:
    """True iff ``c`` and ``d`` agree up to free-variable renaming and literal order."""
    if len(c) != len(d):
        return False
    if shape_key(c) != shape_key(d):
        return False
    return _assign(list(c.literals), list(d.literals), [False] * len(d), {}, {})


def _assign(left: list, right: list, used: list, ren: dict, inv: dict) -> bool:
    if not left:
        return True
    lit, rest = left[0], left[1:]
    for k, other in enumerate(right):
        if used[k] or other.positive != lit.positive:
            continue
        ren2, inv2 = dict(ren), dict(inv)
        if _match(lit.atom, other.atom, ren2, inv2, {}, {}, 0):
            used[k] = True
            if _assign(rest, right, used, ren2, inv2):
                return True
            used[k] = False
    return False


clause_variant_equal = variant_equal


def clause_sets_equal(cs: Iterable[Clause], ds: Iterable[Clause]) -> bool:
    """Multiset equality of clause lists up to variants."""
    cs, ds = list(cs), list(ds)
    if len(cs) != len(ds):
        return False
    used = [False] * len(ds)

    def go(k: int) -> bool:
        if k == len(cs):
            return True
        for j, d in enumerate(ds):
            if not used[j] and variant_equal(cs[k], d):
                used[j] = True
                if go(k + 1):
                    return True
                used[j] = False
        return False

    return go(0)


def _skeleton(t: Term, out: list, bound: dict, depth: int = 0) -> None:
    if isinstance(t, Var):
        out.append(f"#{bound[t]}" if t in bound else "?")
    elif isinstance(t, Const):
        out.append(t.name)
    elif isinstance(t, App):
        out.append("(")
        _skeleton(t.fn, out, bound, depth)
        _skeleton(t.arg, out, bound, depth)
        out.append(")")
    else:
        out.append("^")
        _skeleton(t.body, out, {**bound, t.bound: depth}, depth + 1)


def shape_key(c: Clause) -> tuple[str, ...]:
    """Renaming- and order-invariant fingerprint; equal for all variants."""
    keys = []
    for lit in c.literals:
        out = ["+" if lit.positive else "-"]
        _skeleton(lit.atom, out, {})
        keys.append("".join(out))
    return tuple(sorted(keys))
