"""Command-line interface.

Exit codes: 0 ok, 1 usage, 2 check or compile failure, 3 runtime error,
4 differential failure.
"""
from __future__ import annotations

import argparse
import sys

from .analysis import analyze_reuse_guards, verify_tokens
from .borrow import BorrowError, format_beta
from .check import check_wellformed
from .difftest import differential_check
from .gen import GenConfig, gen_program
from .interp import InterpError, eval_pure, eval_rc, format_value
from .ir import Dialect, has_rc_instrs
from .pipeline import CompileError, PipelineConfig, compile_program
from .syntax import ParseError, parse_program, print_program

EXIT_OK, EXIT_USAGE, EXIT_CHECK, EXIT_RUNTIME, EXIT_DIFF = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


class _Failure(Exception):
    def __init__(self, code: int, msg: str):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as err:
        raise _Failure(EXIT_USAGE, f"{path}: {err.strerror}") from None


def _load(path: str, allow_fresh: bool):
    try:
        return parse_program(_read(path), allow_fresh=allow_fresh)
    except ParseError as err:
        raise _Failure(EXIT_CHECK, f"{path}:{err}") from None


def _config(args) -> PipelineConfig:
    try:
        return PipelineConfig.parse(args.passes, tail_calls=not args.no_tail_calls)
    except ValueError as err:
        raise _Failure(EXIT_USAGE, str(err)) from None


def _compile(path: str, p, config: PipelineConfig):
    try:
        return compile_program(p, config)
    except CompileError as err:
        raise _Failure(EXIT_CHECK, "\n".join(f"{path}: {v}" for v in err.violations)) from None
    except BorrowError as err:
        raise _Failure(EXIT_CHECK, f"{path}: {err}") from None


def cmd_check(args, out) -> int:
    dialect = Dialect(args.dialect)
    p = _load(args.file, allow_fresh=dialect is Dialect.RC)
    violations = check_wellformed(p, dialect)
    for v in violations:
        print(f"{args.file}: {v}", file=sys.stderr)
    if violations:
        return EXIT_CHECK
    print(f"{args.file}: ok ({len(p)} definitions)", file=out)
    return EXIT_OK


def cmd_compile(args, out) -> int:
    p = _load(args.file, allow_fresh=False)
    c = _compile(args.file, p, _config(args))
    out.write(format_beta(c.beta) if args.emit == "beta" else print_program(c.program))
    return EXIT_OK


def cmd_run(args, out) -> int:
    if args.oracle:
        p = _load(args.file, allow_fresh=False)
        violations = check_wellformed(p, Dialect.PURE)
        if violations:
            raise _Failure(EXIT_CHECK, "\n".join(f"{args.file}: {v}" for v in violations))
        try:
            value = eval_pure(p, args.entry, max_steps=args.max_steps)
        except InterpError as err:
            raise _Failure(EXIT_RUNTIME, f"{args.file}: {err}") from None
        print(format_value(value), file=out)
        return EXIT_OK
    if args.compile:
        p = _load(args.file, allow_fresh=False)
        p = _compile(args.file, p, _config(args)).program
    else:
        p = _load(args.file, allow_fresh=True)
        violations = check_wellformed(p, Dialect.RC)
        if violations:
            raise _Failure(EXIT_CHECK, "\n".join(f"{args.file}: {v}" for v in violations))
    try:
        value, stats = eval_rc(p, args.entry, task_consts=args.task or (), max_steps=args.max_steps)
    except InterpError as err:
        if args.stats and err.stats is not None:
            out.write("".join(line + "\n" for line in err.stats.lines()))
        raise _Failure(EXIT_RUNTIME, f"{args.file}: {err}") from None
    print(format_value(value), file=out)
    if args.stats:
        out.write("".join(line + "\n" for line in stats.lines()))
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    p = _load(args.file, allow_fresh=True)
    if args.compile or not any(has_rc_instrs(f.body) for f in p.defs.values()):
        p = _compile(args.file, p, _config(args)).program
    out.write(analyze_reuse_guards(p).format())
    bad = verify_tokens(p)
    for v in bad:
        print(f"token: {v}", file=out)
    print(f"token check: {len(bad)} violation(s)", file=out)
    return EXIT_CHECK if bad else EXIT_OK


def cmd_fuzz(args, out) -> int:
    failed = 0
    for seed in range(args.seed0, args.seed0 + args.seeds):
        cfg = GenConfig(seed=seed, max_fns=args.max_fns, max_body_len=args.max_body_len)
        v = differential_check(gen_program(cfg))
        if not v.ok:
            failed += 1
            print(f"seed {seed}: {v}", file=out)
            if v.minimized is not None:
                out.write(print_program(v.minimized))
    print(f"fuzz: {args.seeds} programs, {args.seeds - failed} passed, {failed} failed", file=out)
    return EXIT_DIFF if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rcir", description="Reference-counted functional IR toolkit.")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def pipeline_opts(sp):
        sp.add_argument("--passes", default="reuse,borrow,rc", help="ordered subset of reuse,borrow,rc")
        sp.add_argument("--no-tail-calls", action="store_true", help="skip the tail-call borrow refinement")

    sp = sub.add_parser("check", help="parse and check well-formedness")
    sp.add_argument("file")
    sp.add_argument("--dialect", choices=["pure", "rc"], default="pure")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("compile", help="run compiler passes and print the result")
    sp.add_argument("file")
    pipeline_opts(sp)
    sp.add_argument("--emit", choices=["ir", "beta"], default="ir")
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("run", help="execute a nullary entry point")
    sp.add_argument("file")
    sp.add_argument("--entry", default="main")
    sp.add_argument("--stats", action="store_true", help="print run counters after the value")
    sp.add_argument("--oracle", "--pure-oracle", dest="oracle", action="store_true",
                    help="evaluate a pure program with the reference evaluator")
    sp.add_argument("--compile", action="store_true", help="compile a pure program before running it")
    sp.add_argument("--task", action="append", metavar="CONST",
                    help="treat CONST as a task entry: its arguments are marked multi-threaded")
    sp.add_argument("--max-steps", type=int, default=None)
    pipeline_opts(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("analyze", help="report constructors not guarded by reuse, and check token balance")
    sp.add_argument("file")
    sp.add_argument("--compile", action="store_true", help="compile first (implied for pure input)")
    pipeline_opts(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("fuzz", help="differential testing on generated programs")
    sp.add_argument("--seeds", type=int, required=True)
    sp.add_argument("--seed0", type=int, default=0)
    sp.add_argument("--max-fns", type=int, default=4)
    sp.add_argument("--max-body-len", type=int, default=6)
    sp.set_defaults(func=cmd_fuzz)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except _Failure as err:
        print(err, file=sys.stderr)
        return err.code


if __name__ == "__main__":
    sys.exit(main())
