"""The three-step compiler from the pure dialect to the RC dialect."""
from __future__ import annotations

from dataclasses import dataclass

from .borrow import BorrowSig, annotate, infer_borrow, make_owned_wrappers
from .check import Violation, check_wellformed
from .ir import Dialect, Program
from .rc import insert_rc
from .reuse import insert_reset_reuse

PASSES = ("reuse", "borrow", "rc")


class CompileError(Exception):
    def __init__(self, violations: list[Violation]):
        super().__init__("\n".join(str(v) for v in violations))
        self.violations = violations


@dataclass(frozen=True)
class PipelineConfig:
    passes: tuple[str, ...] = PASSES
    tail_calls: bool = True

    def __post_init__(self):
        unknown = [s for s in self.passes if s not in PASSES]
        if unknown:
            raise ValueError(f"unknown pass(es): {', '.join(unknown)}")
        if list(self.passes) != [s for s in PASSES if s in self.passes]:
            raise ValueError(f"passes must be an ordered subset of {','.join(PASSES)}")

    @classmethod
    def parse(cls, spec: str, **kw) -> "PipelineConfig":
        return cls(tuple(s.strip() for s in spec.split(",") if s.strip()), **kw)


@dataclass
class Compiled:
    program: Program
    beta: BorrowSig


def compile_program(p: Program, config: PipelineConfig = PipelineConfig(), check: bool = True) -> Compiled:
    """Run the selected passes.

    Without the borrow pass the signature comes from the source annotations
    (``@`` borrowed, otherwise owned).
    """
    if check:
        violations = check_wellformed(p, Dialect.PURE)
        if violations:
            raise CompileError(violations)
    if "reuse" in config.passes:
        p = insert_reset_reuse(p)
    if "borrow" in config.passes:
        beta = infer_borrow(p, tail_calls=config.tail_calls)
    else:
        beta = {c: f.borrows for c, f in p.items()}
    if "borrow" in config.passes or "rc" in config.passes:
        p, beta = make_owned_wrappers(p, beta)
    if "rc" in config.passes:
        p = insert_rc(p, beta)
    else:
        p = annotate(p, beta)
    return Compiled(p, beta)


def full_pipeline(p: Program) -> Program:
    return compile_program(p).program
