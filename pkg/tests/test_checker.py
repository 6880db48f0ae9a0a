import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from erue.checker import (
    ProofStep,
    builtin_scripts,
    check_script,
    check_step,
    load_script,
    load_script_builtin,
    parse_script,
    replay,
)
from erue.clauses import clause_sets_equal
from erue.syntax import ParseError, load_problem, parse_clause
from erue.terms import PROP
from gen import clauses
from mutations import run_mutation_suite


@pytest.fixture(scope="module")
def problem():
    return load_problem("counterexample.erp")


def _state(problem):
    return {c.id: c for c in problem.clauses}


def _step(text: str) -> ProofStep:
    return parse_script(f'problem "counterexample.erp"\n{text}\n').steps[0]


class TestGoldenScripts:
    def test_first_refutation(self):
        report = check_script(load_script_builtin("ref1"))
        assert report.verdict == "refuted" and report.exit_code == 0
        assert report.verified_count == 11
        assert report.steps[-1].clauses[0].is_empty

    def test_second_refutation(self):
        report = check_script(load_script_builtin("ref2"))
        assert report.verdict == "refuted"
        assert report.verified_count == 20
        assert report.text().rstrip().endswith("Triv(C23): []")

    def test_chain_mode_only_in_first(self):
        assert check_script(load_script_builtin("ref1")).chain_steps == ["C4"]
        assert check_script(load_script_builtin("ref2")).chain_steps == []

    def test_starred_steps(self):
        report = check_script(load_script_builtin("ref2"))
        by_id = {s.step.results[0]: s for s in report.steps}
        assert len(by_id["C5"].clauses) == 2
        assert len(by_id["C8"].applications) == 2  # double decomposition

    def test_builtin_keys(self):
        assert set(builtin_scripts()) == {"refutation_I", "refutation_II"}

    def test_solve_modes(self):
        report = check_script(load_script_builtin("ref1"))
        modes = {s.step.results[0]: s.mode for s in report.steps if s.step.rule == "Solve"}
        assert modes == {"C4": "chain", "C9": "keep", "C12": "drop"}


class TestCheckStep:
    def test_resolution(self, problem):
        state = _state(problem)
        rep = check_step(state, _step("step C3 = Res(C1, C2) expect -((g(f(a)) = a) = (f(g(X)) = X))"), problem.signature)
        assert rep.status == "verified"
        assert "C3" in state

    def test_expectation_up_to_renaming(self, problem):
        state = _state(problem)
        rep = check_step(state, _step("step C3 = Res(C1, C2) expect -((g(f(a)) = a) = (f(g(Z)) = Z))"), problem.signature)
        assert rep.status == "verified"

    def test_wrong_expectation_reports_nearest(self, problem):
        state = _state(problem)
        rep = check_step(state, _step("step C3 = Res(C1, C2) expect -((g(a) = a) = (f(g(X)) = X))"), problem.signature)
        assert rep.status == "failed"
        assert rep.nearest == "-((g(f(a)) = a) = (f(g(X)) = X))"
        assert "C3" not in state

    def test_unknown_premise(self, problem):
        rep = check_step(_state(problem), _step("step C3 = Dec(C9) expect empty"), problem.signature)
        assert rep.status == "failed" and "unknown premise" in rep.reason

    def test_rule_not_applicable(self, problem):
        rep = check_step(_state(problem), _step("step C3 = Triv(C1) expect empty"), problem.signature)
        assert rep.status == "failed"

    def test_binding_for_unknown_variable(self, problem):
        rep = check_step(
            _state(problem), _step("step C3 = FlexRig(C2; bind Q := f(H(X))) expect empty"), problem.signature
        )
        assert rep.status == "failed" and "not a variable" in rep.reason

    def test_bad_expectation_is_error(self, problem):
        rep = check_step(_state(problem), _step("step C3 = Dec(C2) expect +(h(a) = a)"), problem.signature)
        assert rep.status == "error"

    def test_positions(self, problem):
        state = _state(problem)
        text = "step C3 = Res(C1, C2; at 1, 1) expect -((g(f(a)) = a) = (f(g(X)) = X))"
        assert check_step(state, _step(text), problem.signature).status == "verified"
        text = "step C4 = Res(C1, C2; at 2, 1) expect -((g(f(a)) = a) = (f(g(X)) = X))"
        assert check_step(state, _step(text), problem.signature).status == "failed"


class TestParseScript:
    def test_fields(self):
        s = _step("step C5, C6 = Cnf*(C4) expect +(a = a) ; -(a = a)")
        assert s.results == ("C5", "C6") and s.rule == "Cnf" and s.starred
        assert s.expect == ("+(a = a)", "-(a = a)")

    def test_binding_text(self):
        s = _step("step C11 = FlexRig(C10; bind H := ^Y:i. a) expect empty")
        assert s.binding == ("H", "^Y:i. a")

    @pytest.mark.parametrize(
        "line, msg",
        [
            ("step C3 = Paramod(C1) expect empty", "unknown rule"),
            ("step C3 = Res*(C1, C2) expect empty", "iterated"),
            ("step C3, C4 = Cnf*(C1) expect empty", "expected clause"),
            ("step C3 = Dec(C1) expect empty extra", "trailing"),
            ("step C3 = Dec(C1; at 0) expect empty", "positive"),
            ("lemma C3", "expected 'problem' or 'step'"),
        ],
    )
    def test_rejects(self, line, msg):
        with pytest.raises(ParseError, match=msg):
            parse_script(f'problem "x.erp"\n{line}\n')

    def test_missing_problem(self):
        with pytest.raises(ParseError, match="missing problem"):
            parse_script("step C3 = Dec(C1) expect empty\n")

    def test_duplicate_result(self):
        with pytest.raises(ParseError, match="duplicate"):
            parse_script('problem "x"\nstep C3 = Dec(C1) expect empty\nstep C3 = Dec(C1) expect empty\n')

    @pytest.mark.parametrize("key", ["ref1", "ref2"])
    def test_format_round_trip(self, key):
        script = load_script_builtin(key)
        again = parse_script(script.format())
        assert again.steps == [dataclasses.replace(a, line=b.line) for a, b in zip(script.steps, again.steps)]
        assert again.format() == script.format()


class TestVerdicts:
    def test_no_goal(self):
        script = parse_script('problem "counterexample.erp"\nstep C3 = FlexRig(C2; bind X := f(H(X))) expect -(f(g(X)) = X) | -(X = f(H(X)))\n')
        report = check_script(script)
        assert report.verdict == "no-goal" and report.exit_code == 1

    def test_failure_stops(self):
        text = load_script_builtin("ref1").format().replace("expect -(a = H(f(a)))", "expect -(a = H(a))", 1)
        report = check_script(parse_script(text))
        assert report.verdict == "failed" and report.exit_code == 2
        assert report.failed_step.step.results == ("C10",)
        assert len(report.steps) == 8

    def test_missing_problem_file(self):
        report = check_script(parse_script('problem "nowhere.erp"\n'))
        assert report.verdict == "error" and report.exit_code == 3

    def test_id_clash(self):
        report = check_script(parse_script('problem "counterexample.erp"\nstep C1 = Triv(C2) expect empty\n'))
        assert report.verdict == "error" and "not fresh" in report.failed_step.reason

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "prop.ers"
        path.write_text('problem "prop_pair.erp"\nstep D1 = Res(C1, C2) expect -(p = p)\nstep D2 = Triv(D1) expect empty\n')
        assert check_script(load_script(path)).ok


@pytest.mark.parametrize("key", ["ref1", "ref2"])
def test_report_is_deterministic(key):
    texts = {check_script(load_script_builtin(key)).text() for _ in range(3)}
    assert len(texts) == 1


@pytest.mark.parametrize("key", ["ref1", "ref2"])
def test_replay_reproduces_expectations(key):
    script = load_script_builtin(key)
    problem = load_problem(script.problem, script.base_dir)
    report = check_script(script, problem)
    state = _state(problem)
    for rep in report.steps:
        again = replay(rep, state)
        assert clause_sets_equal(again, rep.clauses)
        for c in rep.clauses:
            state[c.id] = c


@pytest.mark.parametrize("key", ["ref1", "ref2"])
def test_every_single_mutation_rejected_at_its_step(key):
    script = load_script_builtin(key)
    problem = load_problem(script.problem, script.base_dir)
    total, misses = run_mutation_suite(script, problem)
    assert total > 0
    assert misses == []


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_checker_rejects_random_wrong_expectations(data):
    """A random clause other than the true result is never accepted for a golden step."""
    script = load_script_builtin("ref1")
    problem = load_problem(script.problem, script.base_dir)
    k = data.draw(st.integers(0, len(script.steps) - 1))
    state = _state(problem)
    for step in script.steps[:k]:
        check_step(state, step, problem.signature)
    step = script.steps[k]
    guess = data.draw(clauses)
    truth = parse_clause(step.expect[0], problem.signature)
    rep = check_step(dict(state), dataclasses.replace(step, expect=(str(guess),)), {**problem.signature, "p": PROP, "q": PROP})
    if rep.status == "verified":
        assert clause_sets_equal([guess], [truth])

