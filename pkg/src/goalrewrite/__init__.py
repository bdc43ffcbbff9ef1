"""Goal rewriting, recycling and abduction for normal logic programs."""

from .completion import Completion, Mode, completed_definition, negate_body
from .dependency import build_dependency_graph, order_goals
from .engine import LoopClass, Trace, classify_loop, expand_step, initial_goal, rewrite
from .normal_form import FALSE, NormalForm, SuccessRecord, dumps, loads
from .oracle import (Models, OracleRefusal, PartialStableModel, check_completeness,
                     check_soundness, enumerate_models, f_p)
from .program import (Atom, Literal, ParseError, Program, ProgramError, Rule, Var,
                      ground_program, instantiate_body_only_variables, parse_literal,
                      parse_program, parse_query)
from .recycling import (ComputedRule, Policy, RewriteSystem, apply_recycling, base_system,
                        batch_solve, computed_rule_from_normal_form, extend_system)

__all__ = [
    "Atom", "Completion", "ComputedRule", "FALSE", "Literal", "LoopClass", "Mode", "Models",
    "NormalForm", "OracleRefusal", "ParseError", "PartialStableModel", "Policy", "Program",
    "ProgramError", "RewriteSystem", "Rule", "SuccessRecord", "Trace", "Var",
    "apply_recycling", "base_system", "batch_solve", "build_dependency_graph",
    "check_completeness", "check_soundness", "classify_loop", "completed_definition",
    "computed_rule_from_normal_form", "dumps", "enumerate_models", "expand_step",
    "extend_system", "f_p", "ground_program", "initial_goal",
    "instantiate_body_only_variables", "loads", "negate_body", "order_goals",
    "parse_literal", "parse_program", "parse_query", "rewrite",
]
