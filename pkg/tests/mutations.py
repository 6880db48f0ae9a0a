"""Single mutations of expected clauses: polarity flips and a <-> f(a) swaps."""

from erue.clauses import Clause, Literal
from erue.terms import IND, App, Arrow, Const, Lam, Term

A = Const("a", IND)
FA = App(Const("f", Arrow(IND, IND)), A)


def _swaps(t: Term):
    """Every term obtained by swapping exactly one occurrence of a / f(a)."""
    if t == A:
        yield FA
    elif t == FA:
        yield A
    if isinstance(t, App):
        for fn in _swaps(t.fn):
            yield App(fn, t.arg)
        for arg in _swaps(t.arg):
            yield App(t.fn, arg)
    elif isinstance(t, Lam):
        for body in _swaps(t.body):
            yield Lam(t.var, t.vtype, body)


def mutations(c: Clause):
    for k, lit in enumerate(c.literals):
        lits = list(c.literals)
        lits[k] = lit.negated()
        yield f"flip literal {k + 1}", Clause(tuple(lits))
        for n, atom in enumerate(_swaps(lit.atom)):
            lits = list(c.literals)
            lits[k] = Literal(atom, lit.positive)
            yield f"swap {n + 1} in literal {k + 1}", Clause(tuple(lits))


def _expected_clause(text: str, signature) -> Clause:
    from erue.syntax import parse_clause

    return parse_clause(text, signature)


def mutated_scripts(script, problem):
    """Yield ``(step, description, mutated script)`` for every single mutation.

    Exactly one expected clause of one step is replaced by a mutant; all
    other lines are untouched, so a sound checker must fail at that step.
    """
    from dataclasses import replace

    from erue.clauses import variant_equal

    for k, step in enumerate(script.steps):
        for e, text in enumerate(step.expect):
            original = _expected_clause(text, problem.signature)
            for desc, mutant in mutations(original):
                if variant_equal(mutant, original):
                    continue
                expect = list(step.expect)
                expect[e] = str(mutant)
                steps = list(script.steps)
                steps[k] = replace(step, expect=tuple(expect))
                yield step, f"{','.join(step.results)} clause {e + 1}: {desc}", replace(script, steps=steps)


def run_mutation_suite(script, problem):
    """Return ``(total, false acceptances)``; each miss is ``(description, outcome)``."""
    from erue.checker import check_script

    total, misses = 0, []
    for step, desc, mutated in mutated_scripts(script, problem):
        total += 1
        report = check_script(mutated, problem)
        failed = report.failed_step
        if failed is None:
            misses.append((desc, "accepted"))
        elif failed.step.line != step.line:
            misses.append((desc, f"rejected at line {failed.step.line}"))
    return total, misses
