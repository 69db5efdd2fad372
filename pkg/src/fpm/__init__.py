"""Counted Turing programs, padding transforms, a universal evaluator and inversion checks."""

from .bounds import PolyBound, compose_bounds, counter_budget, eval_bound, leq_bound
from .machine import (
    ChoiceProgram,
    PolyProgram,
    RunOutcome,
    TMProgram,
    WordFunction,
    parse_program,
    program_function,
    run_counted,
    serialize_program,
)
from .words import decode3, encode3, hash_affix, hash_strip

__all__ = [
    "ChoiceProgram",
    "PolyBound",
    "PolyProgram",
    "RunOutcome",
    "TMProgram",
    "WordFunction",
    "compose_bounds",
    "counter_budget",
    "decode3",
    "encode3",
    "eval_bound",
    "hash_affix",
    "hash_strip",
    "leq_bound",
    "parse_program",
    "program_function",
    "run_counted",
    "serialize_program",
]
