"""Differential testing of the compiler against the reference evaluator."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .check import check_wellformed
from .gen import drop_dead_lets
from .interp import InterpError, PureValue, RunStats, eval_pure, eval_rc
from .ir import Arm, Case, Dec, Dialect, Fn, FnBody, Inc, Let, Program, Ret, called_consts, free_vars
from .pipeline import full_pipeline

Compiler = Callable[[Program], Program]


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass
class Verdict:
    status: Status
    failure: Optional[str] = None  # compile | checker | mismatch | oracle | <interpreter error kind>
    message: str = ""
    expected: Optional[PureValue] = None
    actual: Optional[PureValue] = None
    stats: Optional[RunStats] = None
    minimized: Optional[Program] = None

    @property
    def ok(self) -> bool:
        return self.status is Status.PASS

    def __str__(self) -> str:
        if self.ok:
            return "PASS"
        return f"FAIL [{self.failure}] {self.message}"


def _run(p: Program, compile: Compiler, entry: str, max_steps: int | None) -> Verdict:
    try:
        expected = eval_pure(p, entry, max_steps=max_steps)
    except InterpError as err:
        return Verdict(Status.FAIL, "oracle", str(err))
    try:
        q = compile(p)
    except Exception as err:  # noqa: BLE001 - any crash of the pipeline is a finding
        return Verdict(Status.FAIL, "compile", f"{type(err).__name__}: {err}", expected)
    violations = check_wellformed(q, Dialect.RC)
    if violations:
        return Verdict(Status.FAIL, "checker", "; ".join(map(str, violations[:3])), expected)
    try:
        actual, stats = eval_rc(q, entry, max_steps=None if max_steps is None else 4 * max_steps)
    except InterpError as err:
        return Verdict(Status.FAIL, err.kind, str(err), expected, stats=err.stats)
    if actual != expected:
        return Verdict(Status.FAIL, "mismatch", f"expected {expected}, got {actual}", expected, actual, stats)
    return Verdict(Status.PASS, None, "", expected, actual, stats)


def differential_check(
    p: Program,
    compile: Compiler = full_pipeline,
    entry: str = "main",
    *,
    shrink: bool = True,
    max_steps: int | None = 1_000_000,
) -> Verdict:
    """PASS iff the compiled program runs to the reference value with no
    interpreter error and an empty final heap.  A FAIL carries a greedily
    shrunk program that fails the same way."""
    v = _run(p, compile, entry, max_steps)
    if not v.ok and shrink and v.failure != "oracle":
        v.minimized = shrink_program(p, lambda q: _run(q, compile, entry, max_steps).failure == v.failure)
    return v


# -- shrinking ----------------------------------------------------------------


def size(p: Program) -> int:
    n = 0
    for f in p.defs.values():
        stack = [f.body]
        while stack:
            b = stack.pop()
            n += 1
            if isinstance(b, Case):
                stack.extend(a.body for a in b.arms)
            elif not isinstance(b, Ret):
                stack.append(b.rest)
    return n


def _body_variants(b: FnBody, scope: tuple[str, ...]) -> Iterator[FnBody]:
    """Bodies one step smaller than ``b``: a subtree replaced by ``ret y`` or
    a case replaced by one of its arms."""
    if not isinstance(b, Ret):
        for y in scope:
            yield Ret(y)
    if isinstance(b, Case):
        for a in b.arms:
            yield a.body
        for k, a in enumerate(b.arms):
            for nb in _body_variants(a.body, scope):
                arms = list(b.arms)
                arms[k] = Arm(a.arity, nb)
                yield Case(b.x, tuple(arms), b.pos)
    elif isinstance(b, Let):
        for nr in _body_variants(b.rest, scope + (b.x,)):
            yield Let(b.x, b.e, nr, b.pos)


def _candidates(p: Program) -> Iterator[Program]:
    reachable = {"main"}
    todo = ["main"]
    while todo:
        c = todo.pop()
        if c in p:
            for d in called_consts(p[c].body):
                if d not in reachable:
                    reachable.add(d)
                    todo.append(d)
    if len(reachable) < len(p):
        yield Program({c: f for c, f in p.items() if c in reachable})
    for c, f in p.items():
        for nb in _body_variants(f.body, f.params):
            nb = drop_dead_lets(nb)
            if free_vars(nb) <= set(f.params):
                yield p.replace(**{c: Fn(f.params, f.borrows, nb, f.pos)})


def shrink_program(p: Program, still_fails: Callable[[Program], bool], max_rounds: int = 200) -> Program:
    """Greedy: take the first smaller well-formed candidate that still fails,
    repeat until none does.  Minimality is not guaranteed."""
    for _ in range(max_rounds):
        n = size(p)
        for q in _candidates(p):
            if size(q) >= n or check_wellformed(q):
                continue
            if still_fails(q):
                p = q
                break
        else:
            return p
    return p


# -- mutation -----------------------------------------------------------------

Site = tuple[str, tuple]  # (function, path to an inc/dec node)


def rc_sites(p: Program) -> list[Site]:
    """Every ``inc``/``dec`` instruction, addressed by function and path;
    path elements are ``"r"`` (continue past a let/inc/dec) or an arm index."""
    out: list[Site] = []
    for c, f in p.items():
        stack = [(f.body, ())]
        while stack:
            b, path = stack.pop()
            if isinstance(b, (Inc, Dec)):
                out.append((c, path))
                stack.append((b.rest, path + ("r",)))
            elif isinstance(b, Let):
                stack.append((b.rest, path + ("r",)))
            elif isinstance(b, Case):
                stack.extend((a.body, path + (k,)) for k, a in enumerate(b.arms))
    return sorted(out, key=lambda s: (s[0], [str(x) for x in s[1]]))


def _delete_at(b: FnBody, path: tuple) -> FnBody:
    if not path:
        if not isinstance(b, (Inc, Dec)):
            raise ValueError("path does not address an inc/dec")
        return b.rest
    step, rest = path[0], path[1:]
    if step == "r":
        if isinstance(b, Let):
            return Let(b.x, b.e, _delete_at(b.rest, rest), b.pos)
        return type(b)(b.x, _delete_at(b.rest, rest), b.pos)
    arms = list(b.arms)
    arms[step] = Arm(arms[step].arity, _delete_at(arms[step].body, rest))
    return Case(b.x, tuple(arms), b.pos)


def delete_rc_instr(p: Program, site: Site) -> Program:
    c, path = site
    f = p[c]
    return p.replace(**{c: Fn(f.params, f.borrows, _delete_at(f.body, path), f.pos)})


def dropping_pipeline(index: int, compile: Compiler = full_pipeline) -> Compiler:
    """A deliberately broken compiler that omits the ``index``-th inc/dec
    (modulo the number present) from its output."""

    def broken(p: Program) -> Program:
        q = compile(p)
        sites = rc_sites(q)
        return delete_rc_instr(q, sites[index % len(sites)]) if sites else q

    return broken
