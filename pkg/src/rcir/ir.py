"""Syntax trees for the pure and reference-counted IR dialects.

Both dialects share one set of node classes; the RC dialect merely allows
``Reset``/``Reuse`` expressions and ``Inc``/``Dec`` statements.  All nodes are
frozen dataclasses, so structural equality is ``==``.  Source positions ride
along for diagnostics but never take part in comparisons.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

Pos = Optional[tuple[int, int]]


class Dialect(enum.Enum):
    PURE = "pure"
    RC = "rc"


class Borrow(enum.Enum):
    OWNED = "O"
    BORROWED = "B"

    def __str__(self) -> str:
        return self.value


OWNED = Borrow.OWNED
BORROWED = Borrow.BORROWED


def _pos() -> Pos:
    return field(default=None, compare=False, repr=False)


# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class FullApp:
    c: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class PartApp:
    c: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class VarApp:
    x: str
    y: str


@dataclass(frozen=True)
class Ctor:
    i: int
    args: tuple[str, ...]


@dataclass(frozen=True)
class Proj:
    i: int
    x: str


@dataclass(frozen=True)
class Reset:
    x: str


@dataclass(frozen=True)
class Reuse:
    x: str
    i: int
    args: tuple[str, ...]


Expr = Union[FullApp, PartApp, VarApp, Ctor, Proj, Reset, Reuse]


def expr_vars(e: Expr) -> tuple[str, ...]:
    """Variables read by ``e``, in order of appearance (with repeats)."""
    if isinstance(e, (FullApp, PartApp, Ctor)):
        return e.args
    if isinstance(e, VarApp):
        return (e.x, e.y)
    if isinstance(e, (Proj, Reset)):
        return (e.x,)
    if isinstance(e, Reuse):
        return (e.x, *e.args)
    raise TypeError(f"not an expression: {e!r}")


# -- function bodies ----------------------------------------------------------


@dataclass(frozen=True)
class Ret:
    x: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Let:
    x: str
    e: Expr
    rest: "FnBody"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Arm:
    arity: int
    body: "FnBody"


@dataclass(frozen=True)
class Case:
    x: str
    arms: tuple[Arm, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Inc:
    x: str
    rest: "FnBody"
    pos: Pos = _pos()


@dataclass(frozen=True)
class Dec:
    x: str
    rest: "FnBody"
    pos: Pos = _pos()


FnBody = Union[Ret, Let, Case, Inc, Dec]


@dataclass(frozen=True)
class Fn:
    params: tuple[str, ...]
    borrows: tuple[Borrow, ...]
    body: FnBody
    pos: Pos = _pos()

    def __post_init__(self) -> None:
        if len(self.params) != len(self.borrows):
            raise ValueError("params and borrow markers differ in length")

    @property
    def arity(self) -> int:
        return len(self.params)


def fn(params: Iterable[str], body: FnBody, borrows: Iterable[Borrow] | None = None) -> Fn:
    params = tuple(params)
    bs = tuple(borrows) if borrows is not None else (OWNED,) * len(params)
    return Fn(params, bs, body)


@dataclass
class Program:
    """Ordered map from constant names to functions."""

    defs: dict[str, Fn] = field(default_factory=dict)

    def __getitem__(self, c: str) -> Fn:
        return self.defs[c]

    def __contains__(self, c: object) -> bool:
        return c in self.defs

    def __iter__(self) -> Iterator[str]:
        return iter(self.defs)

    def __len__(self) -> int:
        return len(self.defs)

    def items(self):
        return self.defs.items()

    def replace(self, **updates: Fn) -> "Program":
        defs = dict(self.defs)
        defs.update(updates)
        return Program(defs)


# -- traversals ---------------------------------------------------------------


def free_vars(b: FnBody) -> set[str]:
    """Variables occurring free in ``b``; a case scrutinee counts as free."""
    if isinstance(b, Ret):
        return {b.x}
    if isinstance(b, Let):
        fv = free_vars(b.rest)
        fv.discard(b.x)
        fv.update(expr_vars(b.e))
        return fv
    if isinstance(b, Case):
        fv = {b.x}
        for arm in b.arms:
            fv |= free_vars(arm.body)
        return fv
    if isinstance(b, (Inc, Dec)):
        fv = free_vars(b.rest)
        fv.add(b.x)
        return fv
    raise TypeError(f"not a function body: {b!r}")


def occurs_free(x: str, b: FnBody) -> bool:
    return x in free_vars(b)


def iter_lets(b: FnBody) -> Iterator[Let]:
    """Every ``Let`` in ``b``, in preorder."""
    stack = [b]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Let):
            yield cur
            stack.append(cur.rest)
        elif isinstance(cur, (Inc, Dec)):
            stack.append(cur.rest)
        elif isinstance(cur, Case):
            stack.extend(arm.body for arm in reversed(cur.arms))


def iter_nodes(b: FnBody) -> Iterator[FnBody]:
    stack = [b]
    while stack:
        cur = stack.pop()
        yield cur
        if isinstance(cur, (Let, Inc, Dec)):
            stack.append(cur.rest)
        elif isinstance(cur, Case):
            stack.extend(arm.body for arm in reversed(cur.arms))


def bound_names(f: Fn) -> list[str]:
    """Parameters followed by every let-bound name, with repeats."""
    return list(f.params) + [let.x for let in iter_lets(f.body)]


def called_consts(b: FnBody) -> set[str]:
    return {let.e.c for let in iter_lets(b) if isinstance(let.e, (FullApp, PartApp))}


def has_rc_instrs(b: FnBody) -> bool:
    for node in iter_nodes(b):
        if isinstance(node, (Inc, Dec)):
            return True
        if isinstance(node, Let) and isinstance(node.e, (Reset, Reuse)):
            return True
    return False


def erase_incdec(b: FnBody) -> FnBody:
    """Drop every ``inc``/``dec`` statement."""
    if isinstance(b, (Inc, Dec)):
        return erase_incdec(b.rest)
    if isinstance(b, Let):
        return Let(b.x, b.e, erase_incdec(b.rest), b.pos)
    if isinstance(b, Case):
        return Case(b.x, tuple(Arm(a.arity, erase_incdec(a.body)) for a in b.arms), b.pos)
    return b


def erase_reuse(b: FnBody) -> FnBody:
    """Drop ``reset`` bindings and turn every ``reuse`` back into a plain ctor."""
    if isinstance(b, Let):
        if isinstance(b.e, Reset):
            return erase_reuse(b.rest)
        e = Ctor(b.e.i, b.e.args) if isinstance(b.e, Reuse) else b.e
        return Let(b.x, e, erase_reuse(b.rest), b.pos)
    if isinstance(b, (Inc, Dec)):
        return type(b)(b.x, erase_reuse(b.rest), b.pos)
    if isinstance(b, Case):
        return Case(b.x, tuple(Arm(a.arity, erase_reuse(a.body)) for a in b.arms), b.pos)
    return b


def map_bodies(p: Program, f) -> Program:
    return Program({c: Fn(d.params, d.borrows, f(d.body), d.pos) for c, d in p.items()})


def is_tail_call(b: FnBody) -> bool:
    return (
        isinstance(b, Let)
        and isinstance(b.e, FullApp)
        and isinstance(b.rest, Ret)
        and b.rest.x == b.x
    )
