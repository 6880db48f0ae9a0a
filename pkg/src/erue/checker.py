"""Proof scripts: parsing, printing and step-by-step verification.

Script syntax, one declaration per line::

    problem "counterexample.erp"
    step C3 = FlexRig(C2; bind X := f(H(X))) expect -(f(g(X)) = X) | -(X = f(H(X)))
    step C5, C6 = Cnf*(C4) expect +(A) | +(B) ; -(A) | -(B)
    step C13 = Triv(C12) expect empty

A step names the rule and premises but not literal positions or Solve
modes; the checker searches the small parameter space of the rule for an
application whose result matches the expectation up to variants. ``*``
allows up to three iterated applications (for ``Cnf``: clausify fully).
An optional ``; at 2, 1`` fixes the leading (1-based) literal positions.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from . import calculus
from .calculus import Application, RuleError, cnf_all
from .clauses import Clause, clause_sets_equal
from .syntax import (
    DATA_DIR,
    ParseError,
    Problem,
    TokenStream,
    elaborate_clause,
    elaborate_term,
    load_problem,
    parse_raw_clause,
    parse_raw_term,
    tokenize,
)
from .terms import ErueError

MAX_ITERATIONS = 3


@dataclass(frozen=True)
class ProofStep:
    results: tuple[str, ...]
    rule: str
    premises: tuple[str, ...]
    expect: tuple[str, ...]
    starred: bool = False
    binding: tuple[str, str] | None = None
    positions: tuple[int, ...] = ()
    line: int = 0

    @property
    def label(self) -> str:
        return f"{self.rule}{'*' if self.starred else ''}({', '.join(self.premises)})"

    def format(self) -> str:
        args = ", ".join(self.premises)
        if self.binding is not None:
            args += f"; bind {self.binding[0]} := {self.binding[1]}"
        if self.positions:
            args += f"; at {', '.join(str(p) for p in self.positions)}"
        star = "*" if self.starred else ""
        return (
            f"step {', '.join(self.results)} = {self.rule}{star}({args}) "
            f"expect {' ; '.join(self.expect)}"
        )


@dataclass
class ProofScript:
    problem: str
    steps: list[ProofStep] = field(default_factory=list)
    name: str | None = None
    base_dir: Path | None = None

    @property
    def has_goal(self) -> bool:
        return bool(self.steps) and self.steps[-1].expect in (("empty",), ("[]",))

    def format(self) -> str:
        lines = [f'problem "{self.problem}"']
        lines += [s.format() for s in self.steps]
        return "\n".join(lines) + "\n"


# -- parsing -----------------------------------------------------------------------------


def _parse_step(text: str, lineno: int) -> ProofStep:
    ts = TokenStream(tokenize(text, lineno))
    ts.expect("step")
    results = [ts.ident().text]
    while ts.accept(","):
        results.append(ts.ident().text)
    ts.expect("=")
    rule_tok = ts.ident()
    if rule_tok.text not in calculus.RULES:
        raise ParseError(f"unknown rule {rule_tok.text!r}", rule_tok.line, rule_tok.col)
    starred = ts.accept("*")
    if starred and rule_tok.text == "Res":
        raise ParseError("Res cannot be iterated", rule_tok.line, rule_tok.col)
    ts.expect("(")
    premises = [ts.ident().text]
    while ts.accept(","):
        premises.append(ts.ident().text)
    binding = None
    positions: list[int] = []
    while ts.accept(";"):
        if ts.accept("bind"):
            var = ts.ident()
            if not var.text[0].isupper():
                raise ParseError("bound name must be a variable", var.line, var.col)
            ts.expect(":=")
            start = ts.peek.start
            parse_raw_term(ts)
            binding = (var.text, text[start : ts.tokens[ts.pos - 1].end])
        elif ts.accept("at"):
            positions.append(_position(ts))
            while ts.accept(","):
                positions.append(_position(ts))
        else:
            ts.fail("expected 'bind' or 'at'")
    ts.expect(")")
    ts.expect("expect")
    expect = [_clause_text(ts, text)]
    while ts.accept(";"):
        expect.append(_clause_text(ts, text))
    if ts.peek.kind != "eof":
        ts.fail("unexpected trailing input")
    if len(expect) != len(results):
        raise ParseError(
            f"{len(results)} result id(s) but {len(expect)} expected clause(s)", lineno, 1
        )
    return ProofStep(
        tuple(results),
        rule_tok.text,
        tuple(premises),
        tuple(expect),
        starred,
        binding,
        tuple(positions),
        lineno,
    )


def _position(ts: TokenStream) -> int:
    tok = ts.next()
    if tok.kind != "number" or int(tok.text) < 1:
        raise ParseError("literal positions are positive integers", tok.line, tok.col)
    return int(tok.text)


def _clause_text(ts: TokenStream, text: str) -> str:
    start = ts.peek.start
    parse_raw_clause(ts)
    return " ".join(text[start : ts.tokens[ts.pos - 1].end].split())


def parse_script(text: str, name: str | None = None, base_dir: Path | None = None) -> ProofScript:
    problem = None
    steps: list[ProofStep] = []
    seen: set[str] = set()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("%", 1)[0].strip()
        if not line:
            continue
        if line.startswith("problem"):
            ts = TokenStream(tokenize(line, lineno))
            ts.expect("problem")
            tok = ts.next()
            if tok.kind != "string":
                raise ParseError("expected a quoted path", tok.line, tok.col)
            if problem is not None:
                raise ParseError("duplicate problem line", lineno, 1)
            problem = tok.text[1:-1]
            continue
        if not line.startswith("step"):
            raise ParseError(f"expected 'problem' or 'step'", lineno, 1)
        step = _parse_step(line, lineno)
        for rid in step.results:
            if rid in seen:
                raise ParseError(f"duplicate result id {rid!r}", lineno, 1)
            seen.add(rid)
        steps.append(step)
    if problem is None:
        raise ParseError("missing problem line", 1, 1)
    return ProofScript(problem, steps, name, base_dir)


def load_script(path: str | Path) -> ProofScript:
    p = Path(path)
    return parse_script(p.read_text(), name=str(path), base_dir=p.parent)


def builtin_scripts() -> dict[str, ProofScript]:
    return {
        "refutation_I": load_script_builtin("ref1"),
        "refutation_II": load_script_builtin("ref2"),
    }


def load_script_builtin(key: str) -> ProofScript:
    path = DATA_DIR / f"{key}.ers"
    return parse_script(path.read_text(), name=key, base_dir=DATA_DIR)


# -- checking -------------------------------------------------------------------------------


@dataclass
class StepReport:
    step: ProofStep
    status: str  # verified | failed | error
    applications: tuple[Application, ...] = ()
    clauses: tuple[Clause, ...] = ()
    reason: str | None = None
    nearest: str | None = None

    @property
    def modes(self) -> tuple[str, ...]:
        return tuple(a.mode for a in self.applications if a.mode is not None)

    @property
    def mode(self) -> str | None:
        return ",".join(self.modes) or None

    @property
    def chain(self) -> bool:
        return "chain" in self.modes


VERDICT_EXIT = {"refuted": 0, "no-goal": 1, "failed": 2, "error": 3}


@dataclass
class CheckReport:
    name: str
    problem: str
    inputs: list[Clause]
    steps: list[StepReport]
    verdict: str
    message: str | None = None

    @property
    def exit_code(self) -> int:
        return VERDICT_EXIT[self.verdict]

    @property
    def ok(self) -> bool:
        return self.verdict == "refuted"

    @property
    def verified_count(self) -> int:
        return sum(1 for s in self.steps if s.status == "verified")

    @property
    def chain_steps(self) -> list[str]:
        return [",".join(s.step.results) for s in self.steps if s.chain]

    @property
    def failed_step(self) -> StepReport | None:
        for s in self.steps:
            if s.status != "verified":
                return s
        return None

    def text(self) -> str:
        total = len(self.steps)
        head = f"% {self.name}: {self.verdict}, {self.verified_count} step(s) verified"
        if self.message:
            head += f" - {self.message}"
        lines = [head, f'problem "{self.problem}"']
        width = max([len(c.id or "") for c in self.inputs] + [3])
        for s in self.steps:
            width = max(width, len(", ".join(s.step.results)))
        for c in self.inputs:
            lines.append(f"{'':6}{c.id:<{width}}  {'input'}: {c}")
        for s in self.steps:
            ids = ", ".join(s.step.results)
            if s.status == "verified":
                body = " ; ".join(str(c) for c in s.clauses)
                row = f"{'ok':6}{ids:<{width}}  {s.step.label}: {body}"
                if s.chain:
                    row += "   {chain}"
                lines.append(row)
            else:
                lines.append(
                    f"{s.status.upper():6}{ids:<{width}}  {s.step.label}: line {s.step.line}: {s.reason}"
                )
                if s.nearest:
                    lines.append(f"{'':6}{'':<{width}}  nearest: {s.nearest}")
        if total == 0:
            lines.append("(no steps)")
        return "\n".join(lines) + "\n"

    def machine(self) -> str:
        lines = []
        for s in self.steps:
            row = f"{','.join(s.step.results)} {s.step.rule}{'*' if s.step.starred else ''} {s.status}"
            if s.mode:
                row += f" {s.mode}"
            lines.append(row)
        lines.append(f"verdict {self.verdict}")
        return "\n".join(lines) + "\n"


class StepFailure(ErueError):
    def __init__(self, reason: str, status: str = "failed", nearest: str | None = None):
        super().__init__(reason)
        self.reason, self.status, self.nearest = reason, status, nearest


def _binding_source(step: ProofStep, premise: Clause, signature):
    if step.binding is None:
        return None
    var, text = step.binding
    var_types = {v.name: v.type for v in premise.free_vars()}
    if var not in var_types:
        raise StepFailure(f"{var} is not a variable of {step.premises[0]}")
    try:
        ts = TokenStream(tokenize(text, step.line))
        raw = parse_raw_term(ts)
        term = elaborate_term(raw, signature, var_types, expected=var_types[var])
    except ParseError as exc:
        raise StepFailure(f"binding: {exc}", status="error") from exc

    def source(c: Clause, i: int):
        sides = calculus.flex_rigid_sides(c[i].atom)
        if sides is not None and sides[0].name == var:
            yield term

    return source


def _candidates(step: ProofStep, premises: list[Clause], bindings) -> Iterator[tuple[Application, ...]]:
    """Applications (or chains of them, for starred steps) in search order."""
    if step.rule == "Cnf" and step.starred:
        yield (Application("Cnf", "cnf_all", (), tuple(cnf_all(premises[0]))),)
        return

    def first_level():
        for app in calculus.applications(step.rule, premises, bindings):
            if step.positions and tuple(p + 1 for p in app.positions) != step.positions:
                continue
            yield app

    level = [(app,) for app in first_level()]
    yield from level
    if not step.starred:
        return
    for _ in range(MAX_ITERATIONS - 1):
        nxt = []
        for chain in level:
            last = chain[-1]
            if len(last.results) != 1:
                continue
            for app in calculus.applications(step.rule, [last.results[0]], bindings):
                nxt.append(chain + (app,))
        yield from nxt
        level = nxt


def check_step(state: dict[str, Clause], step: ProofStep, signature) -> StepReport:
    """Verify one step against ``state``; on success the expected clauses are bound."""
    try:
        premises = []
        for pid in step.premises:
            if pid not in state:
                raise StepFailure(f"unknown premise {pid!r}")
            premises.append(state[pid])
        expected = []
        for k, text in enumerate(step.expect):
            try:
                expected.append(_elaborate(text, signature, step))
            except ParseError as exc:
                raise StepFailure(f"expectation {k + 1}: {exc}", status="error") from exc
        bindings = _binding_source(step, premises[0], signature)
        seen = []
        try:
            for chain in _candidates(step, premises, bindings):
                results = chain[-1].results
                if clause_sets_equal(results, expected):
                    named = tuple(c.named(rid) for c, rid in zip(expected, step.results))
                    for c in named:
                        state[c.id] = c
                    return StepReport(step, "verified", chain, named)
                seen.append(results)
        except RuleError as exc:
            raise StepFailure(str(exc)) from exc
        raise StepFailure(
            f"no application of {step.rule} yields the expected clause",
            nearest=_nearest(seen, expected),
        )
    except StepFailure as exc:
        return StepReport(step, exc.status, reason=exc.reason, nearest=exc.nearest)


def _elaborate(text: str, signature, step: ProofStep) -> Clause:
    ts = TokenStream(tokenize(text, step.line))
    raw = parse_raw_clause(ts)
    if ts.peek.kind != "eof":
        ts.fail("unexpected trailing input")
    return elaborate_clause(raw, signature)


def _nearest(seen: list[tuple[Clause, ...]], expected: list[Clause]) -> str | None:
    target = " ; ".join(str(c) for c in expected)
    best, best_score = None, -1.0
    for results in seen:
        text = " ; ".join(str(c) for c in results)
        score = difflib.SequenceMatcher(None, text, target).ratio()
        if score > best_score:
            best, best_score = text, score
    return best


def check_script(script: ProofScript, problem: Problem | None = None) -> CheckReport:
    name = script.name or "script"
    if problem is None:
        try:
            problem = load_problem(script.problem, script.base_dir)
        except (OSError, ErueError) as exc:
            return CheckReport(name, script.problem, [], [], "error", f"cannot load problem: {exc}")
    state = {c.id: c for c in problem.clauses}
    reports = []
    for step in script.steps:
        clash = [r for r in step.results if r in state]
        if clash:
            rep = StepReport(step, "error", reason=f"result id {clash[0]!r} is not fresh")
        else:
            rep = check_step(state, step, problem.signature)
        reports.append(rep)
        if rep.status != "verified":
            verdict = "error" if rep.status == "error" else "failed"
            msg = f"line {step.line}: {rep.reason}"
            return CheckReport(name, script.problem, list(problem.clauses), reports, verdict, msg)
    if script.steps and len(reports[-1].clauses) == 1 and reports[-1].clauses[0].is_empty:
        verdict = "refuted"
    else:
        verdict = "no-goal"
    return CheckReport(name, script.problem, list(problem.clauses), reports, verdict)


def replay(report: StepReport, state: dict[str, Clause]) -> tuple[Clause, ...]:
    """Re-run the recorded parameterization of a verified step through the kernel."""
    clauses = [state[p] for p in report.step.premises]
    results: tuple[Clause, ...] = ()
    for k, app in enumerate(report.applications):
        premises = clauses if k == 0 else [results[0]]
        results = calculus.run(app.op, app.args, premises)
    return results
