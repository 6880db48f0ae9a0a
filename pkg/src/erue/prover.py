"""Bounded given-clause saturation over the kernel rules.

Two modes: ``ho`` uses every rule; ``fo`` drops FlexRig, Equiv, Cnf and the
chain reading of Solve, which approximates first-order RUE-resolution.
It does not reconstruct the viability conditions of the original
first-order calculus.
"""

from __future__ import annotations

import heapq
import itertools
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import calculus
from .calculus import Application, RuleError
from .checker import ProofScript, ProofStep
from .clauses import Clause, check_clause, match_renaming, shape_key, variant_equal
from .syntax import Problem, TokenStream, elaborate_term, parse_raw_term, tokenize, ParseError
from .terms import Const, Term, Var, as_eq, fresh_name, free_vars, rename, spine, split_type, type_of
from .pretty import show_term, show_type

HO, FO = "ho", "fo"


@dataclass(frozen=True)
class SearchLimits:
    max_clauses: int = 100_000
    max_weight: int = 40
    # FlexRig steps allowed on any single derivation path
    max_helper_depth: int = 2
    max_depth: int = 40
    time_budget: float = 60.0

    def __post_init__(self):
        for name in ("max_clauses", "max_weight", "max_helper_depth", "max_depth", "time_budget"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class Hint:
    var: Var
    binding: Term

    def __str__(self) -> str:
        return f"bind {self.var.name} := {show_term(self.binding)}"


@dataclass(frozen=True)
class ModeConfig:
    mode: str = HO
    hints: tuple[Hint, ...] = ()
    # the chain reading of Solve; always off in first-order mode
    chain: bool = False

    def __post_init__(self):
        if self.mode not in (HO, FO):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def rules(self) -> tuple[str, ...]:
        if self.mode == FO:
            return ("Triv", "Dec", "Solve", "Fac")
        return ("Triv", "Dec", "Solve", "Fac", "Equiv", "Cnf", "FlexRig")


def parse_hints(text: str, signature) -> tuple[Hint, ...]:
    """Hint file: one ``bind <Var> := <term>`` per line, ``%`` comments."""
    hints = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        ts = TokenStream(tokenize(line, lineno))
        ts.expect("bind")
        var = ts.ident()
        if not var.text[0].isupper():
            raise ParseError("hint must bind a variable", var.line, var.col)
        ts.expect(":=")
        raw_term = parse_raw_term(ts)
        if ts.peek.kind != "eof":
            ts.fail("unexpected trailing input")
        # the hinted variable defaults to type i unless the binding pins it
        term = elaborate_term(raw_term, signature, {})
        hints.append(Hint(Var(var.text, type_of(term)), term))
    return tuple(hints)


@dataclass
class Node:
    clause: Clause
    seq: int
    app: Application | None = None
    parents: tuple["Node", ...] = ()
    index: int = 0
    depth: int = 0
    flex_depth: int = 0

    @property
    def weight(self) -> int:
        return self.clause.weight()


@dataclass
class SaturationReport:
    outcome: str  # refutation | exhausted | saturated
    mode: str
    generated: int
    kept: int
    processed: int
    script: ProofScript | None = None
    proof_length: int = 0
    limit: str | None = None
    stats: dict = field(default_factory=dict)
    elapsed: float = 0.0
    execution: str = "sequential"

    @property
    def found(self) -> bool:
        return self.outcome == "refutation"

    def text(self) -> str:
        lines = [
            f"outcome: {self.outcome}" + (f" ({self.limit})" if self.limit else ""),
            f"mode: {self.mode} ({self.execution})",
            f"generated: {self.generated}",
            f"kept: {self.kept}",
            f"processed: {self.processed}",
        ]
        if self.found:
            lines.append(f"proof steps: {self.proof_length}")
        for key in sorted(self.stats):
            value = self.stats[key]
            if isinstance(value, dict):
                inner = ", ".join(f"{k}: {v}" for k, v in sorted(value.items()))
                lines.append(f"{key}: {{{inner}}}")
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"


class _Stop(Exception):
    def __init__(self, outcome: str, limit: str | None = None, node: Node | None = None):
        self.outcome, self.limit, self.node = outcome, limit, node


def _hint_bindings(hints: Sequence[Hint]):
    """Binding source: instantiated hints first, then textbook partial bindings."""

    def source(c: Clause, i: int) -> Iterator[Term]:
        sides = calculus.flex_rigid_sides(c[i].atom)
        if sides is None:
            return
        head, rigid = sides
        used = {v.name for v in c.free_vars()}
        for hint in hints:
            if hint.var.type != head.type:
                continue
            ren: dict[Var, Var] = {hint.var: head}
            for v in free_vars(hint.binding):
                if v != hint.var:
                    new = fresh_name(v.name, used)
                    used.add(new)
                    ren[v] = Var(new, v.type)
            b = rename(hint.binding, ren)
            try:
                calculus.check_binding(c, i, head, rigid, b)
            except RuleError:
                continue
            yield b
        yield from calculus.partial_bindings(c, i)

    return source


def _head_label(c: Const) -> str:
    if c.name == "=":
        return f"=_{show_type(split_type(c.type)[0][0])}"
    return c.name


class _Saturation:
    def __init__(self, problem: Problem, config: ModeConfig, limits: SearchLimits):
        self.problem = problem
        self.config = config
        self.limits = limits
        self.seq = itertools.count()
        self.passive: list = []
        self.active: list[Node] = []
        self.index: dict[tuple, list[Clause]] = {}
        self.generated = 0
        self.kept = 0
        self.processed = 0
        self.discarded: Counter = Counter()
        self.rule_counts: Counter = Counter()
        self.clashes: Counter = Counter()
        self.bindings = _hint_bindings(config.hints)
        self.start = time.monotonic()

    # -- bookkeeping ---------------------------------------------------------

    def _is_variant(self, c: Clause) -> bool:
        return any(variant_equal(c, d) for d in self.index.get(shape_key(c), ()))

    def _keep(self, node: Node) -> None:
        self.index.setdefault(shape_key(node.clause), []).append(node.clause)
        heapq.heappush(self.passive, (node.weight, node.seq, node))
        self.kept += 1

    def _offer(self, node: Node) -> None:
        self.generated += 1
        if node.clause.is_empty:
            raise _Stop("refutation", node=node)
        if self.generated >= self.limits.max_clauses:
            raise _Stop("exhausted", "max clauses")
        if node.weight > self.limits.max_weight:
            self.discarded["weight"] += 1
        elif node.depth > self.limits.max_depth:
            self.discarded["depth"] += 1
        elif node.flex_depth > self.limits.max_helper_depth:
            self.discarded["helper depth"] += 1
        elif self._is_variant(node.clause):
            self.discarded["variant"] += 1
        else:
            self._keep(node)

    def _emit(self, app: Application, parents: tuple[Node, ...]) -> None:
        self.rule_counts[app.rule] += 1
        depth = 1 + max(p.depth for p in parents)
        flex = max(p.flex_depth for p in parents) + (app.rule == "FlexRig")
        for k, c in enumerate(app.results):
            check_clause(c)
            self._offer(Node(c, next(self.seq), app, parents, k, depth, flex))

    # -- inference generation ------------------------------------------------------

    def _record_clashes(self, c: Clause) -> None:
        for lit in c.literals:
            eq = None if lit.positive else as_eq(lit.atom)
            if eq is None:
                continue
            hl, _ = spine(eq[1])
            hr, _ = spine(eq[2])
            if isinstance(hl, Const) and isinstance(hr, Const) and hl != hr:
                self.clashes[f"{_head_label(hl)}/{_head_label(hr)}"] += 1

    def _infer(self, given: Node) -> None:
        bindings = self.bindings if self.config.mode == HO else None
        for rule in self.config.rules:
            for app in calculus.applications(rule, [given.clause], bindings):
                if app.op == "solve_chain" and (self.config.mode == FO or not self.config.chain):
                    continue
                self._emit(app, (given,))
        for other in self.active:
            pairs = [(given, other)] if other is given else [(given, other), (other, given)]
            for left, right in pairs:
                for app in calculus.applications("Res", [left.clause, right.clause]):
                    self._emit(app, (left, right))

    def run(self) -> SaturationReport:
        try:
            for c in self.problem.clauses:
                node = Node(c, next(self.seq))
                if c.is_empty:
                    raise _Stop("refutation", node=node)
                if not self._is_variant(c):
                    self._keep(node)
            while self.passive:
                if time.monotonic() - self.start > self.limits.time_budget:
                    raise _Stop("exhausted", "time")
                _, _, given = heapq.heappop(self.passive)
                self.processed += 1
                self._record_clashes(given.clause)
                self.active.append(given)
                self._infer(given)
            raise _Stop("saturated")
        except _Stop as stop:
            return self._report(stop)

    def _report(self, stop: _Stop) -> SaturationReport:
        stats = {
            "discarded": dict(self.discarded),
            "inferences": dict(self.rule_counts),
            "head clashes": dict(self.clashes),
        }
        report = SaturationReport(
            stop.outcome,
            self.config.mode,
            self.generated,
            self.kept,
            self.processed,
            limit=stop.limit,
            stats=stats,
            elapsed=time.monotonic() - self.start,
        )
        if stop.node is not None:
            report.script = emit_script(stop.node, self.problem)
            report.proof_length = len(report.script.steps)
        return report


def prove(problem: Problem, mode: ModeConfig | None = None, limits: SearchLimits | None = None) -> SaturationReport:
    return _Saturation(problem, mode or ModeConfig(), limits or SearchLimits()).run()


def fo_exhaustion_report(problem: Problem, limits: SearchLimits | None = None) -> SaturationReport:
    return prove(problem, ModeConfig(FO), limits)


# -- proof extraction --------------------------------------------------------------


def emit_script(goal: Node, problem: Problem) -> ProofScript:
    """Script containing exactly the ancestors of ``goal``, in creation order."""
    ancestors: dict[int, Node] = {}
    stack = [goal]
    while stack:
        n = stack.pop()
        if n.seq in ancestors or n.app is None:
            continue
        ancestors[n.seq] = n
        stack.extend(n.parents)
    input_ids = {c.id for c in problem.clauses}
    counter = itertools.count(1)

    def fresh_id() -> str:
        while True:
            cid = f"D{next(counter)}"
            if cid not in input_ids:
                return cid

    def name(n: Node) -> str:
        return n.clause.id if n.app is None else group_ids[id(n.app)][n.index]

    group_ids: dict[int, tuple[str, ...]] = {}
    steps = []
    for n in sorted(ancestors.values(), key=lambda n: n.seq):
        if id(n.app) in group_ids:
            continue
        ids = tuple(fresh_id() for _ in n.app.results)
        group_ids[id(n.app)] = ids
        binding = None
        if n.app.op == "flex_rigid":
            lit = n.parents[0].clause[n.app.args[0]]
            head, _ = calculus.flex_rigid_sides(lit.atom)
            binding = (head.name, show_term(n.app.args[1]))
        expect = tuple("empty" if c.is_empty else str(c) for c in n.app.results)
        premises = tuple(name(p) for p in n.parents)
        steps.append(ProofStep(ids, n.app.rule, premises, expect, binding=binding))
    return ProofScript(problem.source or "problem.erp", steps)
