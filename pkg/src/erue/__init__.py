"""Higher-order RUE-resolution: a proof kernel and script checker, plus a bounded prover."""

from .calculus import (
    RuleError,
    cnf_all,
    cnf_step,
    decompose,
    equiv,
    factor,
    flex_rigid,
    resolve,
    solve_chain,
    solve_subst,
    trivial,
)
from .checker import CheckReport, ProofScript, ProofStep, builtin_scripts, check_script, check_step, parse_script
from .clauses import Clause, Literal, clause_variant_equal, rename_apart
from .prover import ModeConfig, SaturationReport, SearchLimits, fo_exhaustion_report, prove
from .syntax import ParseError, Problem, load_problem, parse_clause, parse_problem, parse_term
from .terms import (
    IND,
    PROP,
    App,
    Arrow,
    Base,
    Const,
    ErueError,
    Lam,
    TypeCheckError,
    Var,
    alpha_equal,
    beta_normalize,
    substitute,
    type_of,
)

__version__ = "0.1.0"
