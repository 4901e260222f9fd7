"""Well-formedness checking for both dialects.

Violations are returned as data; nothing here raises on a bad program.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .ir import (
    Case,
    Ctor,
    Dec,
    Dialect,
    FnBody,
    FullApp,
    Inc,
    Let,
    PartApp,
    Pos,
    Program,
    Proj,
    Reset,
    Ret,
    Reuse,
    expr_vars,
    free_vars,
    iter_lets,
)


@dataclass(frozen=True)
class Violation:
    fn: str
    kind: str
    msg: str
    pos: Pos = None

    def __str__(self) -> str:
        where = f"{self.fn}"
        if self.pos is not None:
            where += f" at {self.pos[0]}:{self.pos[1]}"
        return f"{where}: [{self.kind}] {self.msg}"


def check_wellformed(p: Program, dialect: Dialect = Dialect.PURE) -> list[Violation]:
    out: list[Violation] = []
    for c, f in p.items():
        out.extend(_check_fn(p, c, f, dialect))
    return out


def _check_fn(p: Program, c: str, f, dialect: Dialect) -> list[Violation]:
    out: list[Violation] = []

    def report(kind, msg, pos=None):
        out.append(Violation(c, kind, msg, pos))

    names = list(f.params) + [let.x for let in iter_lets(f.body)]
    for name, n in Counter(names).items():
        if n > 1:
            report("duplicate-name", f"{name!r} bound {n} times")

    # scope, dialect, constants and indices: one pass with the in-scope set
    stack = [(f.body, frozenset(f.params))]
    while stack:
        b, scope = stack.pop()
        pos = getattr(b, "pos", None)
        if isinstance(b, Ret):
            if b.x not in scope:
                report("scope", f"{b.x!r} used out of scope", pos)
        elif isinstance(b, Let):
            _check_expr(p, b, scope, dialect, report)
            if dialect is Dialect.PURE and b.x not in free_vars(b.rest):
                report("dead-let", f"{b.x!r} is bound but never used", pos)
            stack.append((b.rest, scope | {b.x}))
        elif isinstance(b, Case):
            if b.x not in scope:
                report("scope", f"{b.x!r} used out of scope", pos)
            if not b.arms:
                report("empty-case", "case without arms", pos)
            for arm in b.arms:
                if arm.arity < 0:
                    report("index", "negative arm arity", pos)
                stack.append((arm.body, scope))
        elif isinstance(b, (Inc, Dec)):
            kw = "inc" if isinstance(b, Inc) else "dec"
            if dialect is Dialect.PURE:
                report("dialect", f"{kw} is not allowed in the pure dialect", pos)
            if b.x not in scope:
                report("scope", f"{b.x!r} used out of scope", pos)
            stack.append((b.rest, scope))
        else:
            report("syntax", f"unknown body node {type(b).__name__}", pos)

    out.extend(Violation(c, "reset-linearity", msg, pos) for msg, pos in _reset_linearity(f.body))
    return out


def _check_expr(p: Program, let: Let, scope, dialect: Dialect, report) -> None:
    e, pos = let.e, let.pos
    for v in expr_vars(e):
        if v not in scope:
            report("scope", f"{v!r} used out of scope", pos)
    if isinstance(e, (Reset, Reuse)) and dialect is Dialect.PURE:
        kw = "reset" if isinstance(e, Reset) else "reuse"
        report("dialect", f"{kw} is not allowed in the pure dialect", pos)
    if isinstance(e, (Ctor, Proj, Reuse)) and e.i < 1:
        report("index", f"index {e.i} must be positive", pos)
    if isinstance(e, (FullApp, PartApp)):
        if e.c not in p:
            report("unknown-const", f"constant {e.c!r} is not defined", pos)
            return
        arity = p[e.c].arity
        if isinstance(e, FullApp) and len(e.args) != arity:
            kind = "over-applied" if len(e.args) > arity else "under-applied"
            report("arity", f"call {e.c} is {kind}: {len(e.args)} args for arity {arity}", pos)
        if isinstance(e, PartApp) and len(e.args) >= arity:
            report("arity", f"pap {e.c} supplies {len(e.args)} args for arity {arity}", pos)


def _reset_linearity(body: FnBody):
    """Each reset token is used at most once per path, only by reuse or dec."""
    seen: set[tuple[str, str]] = set()

    def bad(w, msg, pos):
        if (w, msg) not in seen:
            seen.add((w, msg))
            yield f"reset token {w!r} {msg}", pos

    stack = [(body, {})]
    while stack:
        b, uses = stack.pop()
        pos = getattr(b, "pos", None)
        if isinstance(b, Let):
            uses = dict(uses)
            e = b.e
            for k, v in enumerate(expr_vars(e)):
                if v not in uses:
                    continue
                if isinstance(e, Reuse) and k == 0:
                    uses[v] += 1
                    if uses[v] > 1:
                        yield from bad(v, "used more than once on one path", pos)
                else:
                    yield from bad(v, "used other than as a reuse token or dec target", pos)
            if isinstance(e, Reset):
                uses[b.x] = 0
            stack.append((b.rest, uses))
        elif isinstance(b, Dec):
            if b.x in uses:
                uses = dict(uses)
                uses[b.x] += 1
                if uses[b.x] > 1:
                    yield from bad(b.x, "used more than once on one path", pos)
            stack.append((b.rest, uses))
        elif isinstance(b, Inc):
            if b.x in uses:
                yield from bad(b.x, "used other than as a reuse token or dec target", pos)
            stack.append((b.rest, uses))
        elif isinstance(b, Ret):
            if b.x in uses:
                yield from bad(b.x, "used other than as a reuse token or dec target", pos)
        elif isinstance(b, Case):
            if b.x in uses:
                yield from bad(b.x, "used other than as a reuse token or dec target", pos)
            for arm in b.arms:
                stack.append((arm.body, uses))
