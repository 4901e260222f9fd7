"""Reference-counted functional IR: passes, interpreter and tooling."""
from .borrow import BorrowError, collect_owned, format_beta, infer_borrow, make_owned_wrappers
from .check import Violation, check_wellformed
from .interp import (
    NULLTOK,
    InterpError,
    PCtor,
    PPap,
    RunStats,
    Tag,
    check_heap_tags,
    eval_pure,
    eval_rc,
    format_value,
    mark_mt,
)
from .ir import BORROWED, OWNED, Borrow, Dialect, Fn, Program, free_vars
from .pipeline import CompileError, PipelineConfig, compile_program, full_pipeline
from .rc import insert_rc
from .reuse import insert_reset_reuse
from .syntax import ParseError, parse_program, print_program

__all__ = [
    "BORROWED",
    "NULLTOK",
    "OWNED",
    "Borrow",
    "BorrowError",
    "CompileError",
    "Dialect",
    "Fn",
    "InterpError",
    "PCtor",
    "PPap",
    "ParseError",
    "PipelineConfig",
    "Program",
    "RunStats",
    "Tag",
    "Violation",
    "check_heap_tags",
    "check_wellformed",
    "collect_owned",
    "compile_program",
    "eval_pure",
    "eval_rc",
    "format_beta",
    "format_value",
    "free_vars",
    "full_pipeline",
    "infer_borrow",
    "insert_rc",
    "insert_reset_reuse",
    "make_owned_wrappers",
    "mark_mt",
    "parse_program",
    "print_program",
]
