"""Insertion of reset/reuse pairs into pure-dialect functions.

``R`` walks a body and, for every ``case x``, asks ``D`` to find the point in
each arm where ``x`` is dead; ``S`` then turns the first constructor of the
matching arity on each path into a ``reuse`` of the freshly reset cell.
"""
from __future__ import annotations

from .ir import (
    Arm,
    Case,
    Ctor,
    Dec,
    Fn,
    FnBody,
    Inc,
    Let,
    Program,
    Reset,
    Ret,
    Reuse,
    bound_names,
    expr_vars,
    free_vars,
)


class FreshNames:
    """Generates ``%w0``, ``%w1``, ... skipping any name already taken."""

    def __init__(self, taken=(), prefix: str = "%w"):
        self.taken = set(taken)
        self.prefix = prefix
        self.counter = 0

    def peek(self) -> str:
        while f"{self.prefix}{self.counter}" in self.taken:
            self.counter += 1
        return f"{self.prefix}{self.counter}"

    def take(self) -> str:
        name = self.peek()
        self.taken.add(name)
        self.counter += 1
        return name


def R(b: FnBody, fresh: FreshNames) -> FnBody:
    if isinstance(b, Let):
        return Let(b.x, b.e, R(b.rest, fresh), b.pos)
    if isinstance(b, Case):
        arms = []
        for arm in b.arms:
            body = R(arm.body, fresh)
            # nullary cells carry no fields worth recycling
            if arm.arity > 0:
                body = D(b.x, arm.arity, body, fresh)
            arms.append(Arm(arm.arity, body))
        return Case(b.x, tuple(arms), b.pos)
    if isinstance(b, (Inc, Dec)):
        return type(b)(b.x, R(b.rest, fresh), b.pos)
    return b


def D(z: str, n: int, b: FnBody, fresh: FreshNames) -> FnBody:
    if isinstance(b, Case):
        return Case(b.x, tuple(Arm(a.arity, D(z, n, a.body, fresh)) for a in b.arms), b.pos)
    if isinstance(b, Ret):
        return b
    if isinstance(b, Let) and (z in expr_vars(b.e) or z in free_vars(b.rest)):
        return Let(b.x, b.e, D(z, n, b.rest, fresh), b.pos)
    if isinstance(b, (Inc, Dec)) and z in free_vars(b):
        return type(b)(b.x, D(z, n, b.rest, fresh), b.pos)
    w = fresh.peek()
    replaced = S(w, n, b)
    if replaced is b:
        return b
    fresh.take()
    return Let(w, Reset(z), replaced)


def S(w: str, n: int, b: FnBody) -> FnBody:
    """Rewrite the first arity-``n`` ctor on each path; returns ``b`` itself if none."""
    if isinstance(b, Let):
        if isinstance(b.e, Ctor) and len(b.e.args) == n:
            return Let(b.x, Reuse(w, b.e.i, b.e.args), b.rest, b.pos)
        rest = S(w, n, b.rest)
        return b if rest is b.rest else Let(b.x, b.e, rest, b.pos)
    if isinstance(b, Case):
        arms = tuple(Arm(a.arity, S(w, n, a.body)) for a in b.arms)
        if all(new.body is old.body for new, old in zip(arms, b.arms)):
            return b
        return Case(b.x, arms, b.pos)
    if isinstance(b, (Inc, Dec)):
        rest = S(w, n, b.rest)
        return b if rest is b.rest else type(b)(b.x, rest, b.pos)
    return b


def insert_reset_reuse(p: Program) -> Program:
    taken = set(p.defs)
    for f in p.defs.values():
        taken.update(bound_names(f))
    fresh = FreshNames(taken)
    return Program({c: Fn(f.params, f.borrows, R(f.body, fresh), f.pos) for c, f in p.items()})
