import pytest
from hypothesis import given, settings

from erue.clauses import variant_equal
from erue.pretty import show_term
from erue.syntax import (
    DATA_DIR,
    ParseError,
    format_problem,
    load_problem,
    parse_clause,
    parse_problem,
    parse_term,
    resolve_path,
)
from erue.terms import IND, PROP, App, Arrow, Lam, Var, alpha_equal, beta_normalize, free_vars, type_of
from gen import A, F, G, SIG, X, clauses, ind_terms


class TestParseTerm:
    def test_application(self):
        assert parse_term("f(g(a))", SIG) == App(F, App(G, A))

    def test_variable_defaults_to_individual(self):
        assert parse_term("X", SIG) == X

    def test_flex_head_type_inferred(self):
        t = parse_term("H(f(X))", SIG)
        assert t == App(Var("H", Arrow(IND, IND)), App(F, X))

    def test_lambda(self):
        t = parse_term("^Y:i. f(Y)", SIG)
        assert isinstance(t, Lam) and type_of(t) == Arrow(IND, IND)

    def test_lambda_application_reduces(self):
        assert parse_term("(^Y:i. f(Y))(a)", SIG) == App(F, A)

    def test_equation_between_equations(self):
        t = parse_term("(a = a) = (f(a) = a)", SIG)
        assert type_of(t) == PROP

    def test_iff_expands(self):
        t = parse_term("(a = a) <=> (f(a) = a)", SIG)
        assert show_term(t) == "((a = a) & (f(a) = a)) |o| ((~(a = a)) & (~(f(a) = a)))"

    def test_unknown_constant(self):
        with pytest.raises(ParseError, match="unknown constant"):
            parse_term("h(a)", SIG)

    def test_ill_typed(self):
        with pytest.raises(ParseError):
            parse_term("f(f)", SIG)

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse_term("f(a) a", SIG)

    def test_error_position(self):
        with pytest.raises(ParseError) as exc:
            parse_term("f(a))", SIG)
        assert exc.value.col == 5


class TestParseClause:
    def test_two_literals(self):
        c = parse_clause("-(f(g(X)) = X) | +(a = a)", SIG)
        assert len(c) == 2
        assert not c[0].positive and c[1].positive

    def test_empty(self):
        assert parse_clause("empty", SIG).is_empty
        assert parse_clause("[]", SIG).is_empty

    def test_literal_must_be_proposition(self):
        with pytest.raises(ParseError):
            parse_clause("+(f(a))", SIG)

    def test_shared_variable_types(self):
        c = parse_clause("-(H(a) = a) | -(H = ^Y:i. a)", SIG)
        hs = {v for v in c.free_vars()}
        assert hs == {Var("H", Arrow(IND, IND))}


class TestProblems:
    def test_counterexample(self):
        p = load_problem("counterexample.erp")
        assert set(p.signature) == {"a", "f", "g"}
        assert [c.id for c in p.clauses] == ["C1", "C2"]
        assert str(p.clause("C2")) == "-(f(g(X)) = X)"

    def test_format_round_trip(self):
        p = load_problem("counterexample.erp")
        q = parse_problem(format_problem(p))
        assert q.signature == p.signature
        assert all(variant_equal(c, d) for c, d in zip(p.clauses, q.clauses))

    @pytest.mark.parametrize(
        "text, msg",
        [
            ("const and : o.", "logical"),
            ("const F : i.", "lowercase"),
            ("const a : i. const a : i.", "duplicate constant"),
            ("const a : i. clause C : +(a = a). clause C : +(a = a).", "duplicate clause"),
            ("axiom C : +(a = a).", "expected 'const' or 'clause'"),
            ("const a : i", "expected"),
        ],
    )
    def test_rejects(self, text, msg):
        with pytest.raises(ParseError, match=msg):
            parse_problem(text)

    def test_resolve_path_falls_back_to_data(self):
        assert resolve_path("counterexample.erp") == DATA_DIR / "counterexample.erp"
        with pytest.raises(FileNotFoundError):
            resolve_path("no-such-file.erp")


# -- print/parse round trips ---------------------------------------------------------


@settings(max_examples=200)
@given(ind_terms)
def test_term_round_trip(t):
    n = beta_normalize(t)
    back = parse_term(show_term(n), SIG, {v.name: v.type for v in free_vars(n)})
    assert alpha_equal(back, n)


@settings(max_examples=200)
@given(clauses)
def test_clause_round_trip(c):
    sig = {**SIG, "p": PROP, "q": PROP}
    back = parse_clause(str(c), sig)
    assert back == c or variant_equal(back, c)

