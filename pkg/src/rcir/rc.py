"""Insertion of ``inc``/``dec`` instructions.

``C`` compiles a body under a local borrow map; ``C_app`` walks application
arguments against the callee's parameter markers.  ``O_plus`` and ``O_minus``
add an increment before an owned use or a decrement once an owned variable
is dead.
"""
from __future__ import annotations

from .borrow import BorrowSig
from .ir import (
    BORROWED,
    OWNED,
    Arm,
    Borrow,
    Case,
    Ctor,
    Dec,
    Fn,
    FnBody,
    FullApp,
    Inc,
    Let,
    PartApp,
    Program,
    Proj,
    Reset,
    Ret,
    Reuse,
    VarApp,
    free_vars,
)

LocalBorrowMap = dict[str, Borrow]


def O_plus(x: str, live, b: FnBody, bl: LocalBorrowMap) -> FnBody:
    if bl.get(x, OWNED) is OWNED and x not in live:
        return b
    return Inc(x, b)


def O_minus_one(x: str, b: FnBody, bl: LocalBorrowMap) -> FnBody:
    if bl.get(x, OWNED) is OWNED and x not in free_vars(b):
        return Dec(x, b)
    return b


def O_minus(xs, b: FnBody, bl: LocalBorrowMap) -> FnBody:
    for x in xs:
        b = O_minus_one(x, b, bl)
    return b


def C_app(args, bs, tail: Let, bl: LocalBorrowMap) -> FnBody:
    """``tail`` is the application ``let z = e; F`` with ``F`` already compiled."""
    if not args:
        return tail
    y, rest = args[0], args[1:]
    b = bs[0] if bs else OWNED
    bs_rest = bs[1:]
    if b is OWNED:
        live = set(rest) | free_vars(tail.rest)
        return O_plus(y, live, C_app(rest, bs_rest, tail, bl), bl)
    tail = Let(tail.x, tail.e, O_minus_one(y, tail.rest, bl), tail.pos)
    return C_app(rest, bs_rest, tail, bl)


def C(b: FnBody, beta: BorrowSig, bl: LocalBorrowMap) -> FnBody:
    if isinstance(b, Ret):
        return O_plus(b.x, (), b, bl)
    if isinstance(b, Case):
        ys = sorted(free_vars(b))
        arms = tuple(Arm(a.arity, O_minus(ys, C(a.body, beta, bl), bl)) for a in b.arms)
        return Case(b.x, arms, b.pos)
    if isinstance(b, (Inc, Dec)):
        raise ValueError("input to the RC pass must not contain inc/dec")
    e = b.e
    if isinstance(e, Proj):
        if bl.get(e.x, OWNED) is OWNED:
            rest = O_minus_one(e.x, C(b.rest, beta, bl), bl)
            return Let(b.x, e, Inc(b.x, rest), b.pos)
        return Let(b.x, e, C(b.rest, beta, {**bl, b.x: BORROWED}), b.pos)
    if isinstance(e, Reset):
        return Let(b.x, e, C(b.rest, beta, bl), b.pos)
    tail = Let(b.x, e, C(b.rest, beta, bl), b.pos)
    if isinstance(e, (FullApp, PartApp)):
        return C_app(e.args, beta[e.c], tail, bl)
    if isinstance(e, VarApp):
        return C_app((e.x, e.y), (OWNED, OWNED), tail, bl)
    if isinstance(e, (Ctor, Reuse)):
        return C_app(e.args, (OWNED,) * len(e.args), tail, bl)
    raise TypeError(f"not an expression: {e!r}")


def compile_fn(f: Fn, sig: tuple[Borrow, ...], beta: BorrowSig) -> Fn:
    bl = dict(zip(f.params, sig))
    body = O_minus(f.params, C(f.body, beta, bl), bl)
    return Fn(f.params, sig, body, f.pos)


def insert_rc(p: Program, beta: BorrowSig) -> Program:
    return Program({c: compile_fn(f, beta[c], beta) for c, f in p.items()})
