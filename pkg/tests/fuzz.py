"""Seeded fuzzing of kernel rule applications over the signature {a, f, g}.

Each trial builds a random clause around a literal shaped for one rule,
applies the rule and checks the structural guarantees of its result.
"""

from collections import Counter

from erue import calculus
from erue.calculus import RuleError
from erue.clauses import Clause, check_clause, neg
from erue.terms import PROP, apply, as_eq, eq_const, spine, top_connective, type_of
from gen import SIG, X, Y, Z, TermGen

FULL_SIG = {**SIG, "p": PROP, "q": PROP}

KINDS = (
    "resolve",
    "decompose",
    "solve_drop",
    "solve_keep",
    "solve_chain",
    "trivial",
    "flex_rigid",
    "factor",
    "equiv",
    "cnf_step",
    "cnf_all",
    "occurs_check",
)


class Violation(Exception):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise Violation(msg)


def _well_formed(results) -> None:
    for c in results:
        check_clause(c)
        for lit in c.literals:
            _require(type_of(lit.atom, FULL_SIG) == PROP, f"atom not of type o in {c}")


def _trial(kind: str, gen: TermGen) -> None:
    r = gen.rng
    if kind == "resolve":
        c, d = gen.clause(), gen.clause()
        i, j = r.randrange(len(c)), r.randrange(len(d))
        if c[i].positive == d[j].positive:
            lits = list(d.literals)
            lits[j] = lits[j].negated()
            d = Clause(tuple(lits))
        out = calculus.resolve(c, i, d, j)
        _well_formed([out])
        _require(len(out) == len(c) + len(d) - 1, "resolve changes length by |c| + |d| - 1")
    elif kind == "decompose":
        lit = gen.same_head_eq()
        c, k = gen.insert(gen.clause(0, 2), lit)
        arity = len(spine(as_eq(lit.atom)[1])[1])
        out = calculus.decompose(c, k)
        _well_formed([out])
        _require(len(out) == len(c) - 1 + arity, "decompose replaces one literal by arity many")
    elif kind in ("solve_drop", "solve_keep"):
        lit, v = gen.var_eq()
        c, k = gen.insert(gen.clause(0, 2), lit)
        keep = kind == "solve_keep"
        side = 0 if as_eq(lit.atom)[1] == v else 1
        out = calculus.solve_subst(c, k, keep, side)
        _well_formed([out])
        _require(len(out) == len(c) - (0 if keep else 1), "solve length delta")
        _require(v not in out.free_vars(), "solved variable must be eliminated")
    elif kind == "solve_chain":
        v = r.choice((X, Y, Z))
        s, u = gen.ind(), gen.ind()
        c = gen.clause(0, 2)
        c, i = gen.insert(c, neg(apply(eq_const(v.type), s, v)))
        c, j = gen.insert(c, neg(apply(eq_const(v.type), v, u)))
        if i >= j:
            i += 1
        out = calculus.solve_chain(c, i, j)
        _well_formed([out])
        _require(len(out) == len(c) - 1, "solve_chain removes one literal")
    elif kind == "trivial":
        t = gen.ind() if r.random() < 0.7 else gen.prop()
        c, k = gen.insert(gen.clause(0, 2), neg(apply(eq_const(type_of(t)), t, t)))
        out = calculus.trivial(c, k)
        _well_formed([out])
        _require(len(out) == len(c) - 1, "trivial removes one literal")
    elif kind == "flex_rigid":
        lit, head, rigid = gen.flex_rigid_eq()
        c, k = gen.insert(gen.clause(0, 2), lit)
        bindings = calculus.partial_bindings(c, k)
        _require(bool(bindings), "a flex-rigid pair always has an imitation")
        out = calculus.flex_rigid(c, k, r.choice(bindings))
        _well_formed([out])
        _require(len(out) == len(c) + 1, "flex_rigid adds one literal")
    elif kind == "factor":
        c = gen.clause(2, 4)
        pairs = [(i, j) for i in range(len(c)) for j in range(len(c)) if i != j and c[i].positive == c[j].positive]
        if not pairs:
            c = Clause(c.literals + (c[0],))
            pairs = [(0, len(c) - 1)]
        i, j = r.choice(pairs)
        out = calculus.factor(c, i, j)
        _well_formed([out])
        _require(len(out) == len(c), "factor keeps the length")
    elif kind == "equiv":
        lit = neg(apply(eq_const(PROP), gen.prop(1), gen.prop(1)))
        c, k = gen.insert(gen.clause(0, 2), lit)
        out = calculus.equiv(c, k)
        _well_formed([out])
        _require(len(out) == len(c), "equiv keeps the length")
    elif kind == "cnf_step":
        lit = gen.literal()
        while top_connective(lit.atom) is None:
            lit = gen.literal()
        c, k = gen.insert(gen.clause(0, 2), lit)
        outs = calculus.cnf_step(c, k)
        _well_formed(outs)
        _require(len(outs) in (1, 2), "cnf_step yields one or two clauses")
        for o in outs:
            _require(len(o) - len(c) in (0, 1), "cnf_step length delta")
            _require(calculus.connective_count(o) < calculus.connective_count(c), "cnf_step removes a connective")
    elif kind == "cnf_all":
        c = gen.clause()
        n = calculus.connective_count(c)
        outs = calculus.cnf_all(c)
        _well_formed(outs)
        _require(1 <= len(outs) <= 2 ** n, "clausification size bound")
        for o in outs:
            _require(calculus._connective_position(o) is None, "clausified literal keeps a top connective")
    elif kind == "occurs_check":
        lit = gen.occurs_eq()
        c, k = gen.insert(gen.clause(0, 2), lit)
        try:
            calculus.solve_subst(c, k, r.random() < 0.5, 0)
        except RuleError:
            return
        raise Violation(f"occurs-check not enforced on {lit}")


def fuzz_kernel(n: int, seed: int = 2024):
    """Run ``n`` trials; return ``(per-kind counts, violations)``."""
    gen = TermGen(seed)
    counts: Counter = Counter()
    violations = []
    for t in range(n):
        kind = KINDS[t % len(KINDS)]
        counts[kind] += 1
        try:
            _trial(kind, gen)
        except Exception as exc:  # a rejected or crashing trial is a violation too
            violations.append((t, kind, f"{type(exc).__name__}: {exc}"))
    return counts, violations
