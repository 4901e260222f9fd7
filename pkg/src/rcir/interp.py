"""Instrumented heap interpreter for the RC dialect and a reference evaluator
for the pure dialect.

The RC machine runs bodies with an explicit frame stack, so IR recursion depth
is bounded by memory rather than the Python stack.  Locations come from a
monotone counter and are never recycled; a freed location therefore stays
absent forever and any later access is reported deterministically.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from .ir import (
    Case,
    Ctor,
    Dec,
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
)

NULLTOK = 0


class Tag(enum.Enum):
    ST = "ST"
    MT = "MT"
    PERSISTENT = "P"


# -- errors -------------------------------------------------------------------


class InterpError(Exception):
    kind = "InterpError"

    def __init__(self, msg: str, fn: str | None = None, pos=None):
        where = ""
        if fn is not None:
            where = f"{fn}"
            if pos is not None:
                where += f" at {pos[0]}:{pos[1]}"
            where += ": "
        super().__init__(f"{self.kind}: {where}{msg}")
        self.msg = msg
        self.fn = fn
        self.pos = pos
        self.stats: RunStats | None = None


class RcUnderflow(InterpError):
    kind = "RcUnderflow"


class UseAfterFree(InterpError):
    kind = "UseAfterFree"


class ReuseSizeMismatch(InterpError):
    kind = "ReuseSizeMismatch"


class CaseOnPap(InterpError):
    kind = "CaseOnPap"


class ProjOutOfRange(InterpError):
    kind = "ProjOutOfRange"


class Leak(InterpError):
    kind = "Leak"


class UnknownConst(InterpError):
    kind = "UnknownConst"


class BadApplication(InterpError):
    """Arity mismatch, application of a constructor cell, or a pap that is too full."""

    kind = "BadApplication"


class UnboundVar(InterpError):
    kind = "UnboundVar"


class NoMatchingArm(InterpError):
    kind = "NoMatchingArm"


class ResetOnPap(InterpError):
    kind = "ResetOnPap"


class HeapCycle(InterpError):
    kind = "HeapCycle"


class StepLimit(InterpError):
    kind = "StepLimit"


# -- heap ---------------------------------------------------------------------


@dataclass
class CtorCell:
    i: int
    fields: list[int]


@dataclass
class PapCell:
    c: str
    args: tuple[int, ...]


Value = Union[CtorCell, PapCell]


@dataclass
class HeapCell:
    value: Value
    rc: int
    tag: Tag = Tag.ST

    def children(self) -> list[int]:
        v = self.value
        kids = v.fields if isinstance(v, CtorCell) else v.args
        return [k for k in kids if k != NULLTOK]


def _shape(value: Value) -> str:
    if isinstance(value, CtorCell):
        return f"C{value.i}/{len(value.fields)}"
    return "pap"


@dataclass
class RunStats:
    allocations: int = 0
    reuse_uniq: int = 0
    reuse_fresh: int = 0
    inc_ops: int = 0
    dec_ops: int = 0
    atomic_rc_ops: int = 0
    peak_live: int = 0
    final_live: int = 0
    # (const, token var) -> [unique, shared]
    reset_sites: dict = field(default_factory=dict)
    # (const, cell shape) -> fresh allocations
    alloc_sites: Counter = field(default_factory=Counter)
    # const -> [unique, fresh]
    reuse_sites: dict = field(default_factory=dict)

    @property
    def reset_uniq(self) -> int:
        return sum(u for u, _ in self.reset_sites.values())

    @property
    def reset_shared(self) -> int:
        return sum(s for _, s in self.reset_sites.values())

    def allocs_in(self, fn: str, shape: str | None = None) -> int:
        return sum(n for (c, s), n in self.alloc_sites.items() if c == fn and shape in (None, s))

    def lines(self) -> list[str]:
        out = [
            f"allocations={self.allocations}",
            f"reuse_uniq={self.reuse_uniq}",
            f"reuse_fresh={self.reuse_fresh}",
            f"reset_uniq={self.reset_uniq}",
            f"reset_shared={self.reset_shared}",
            f"inc_ops={self.inc_ops}",
            f"dec_ops={self.dec_ops}",
            f"atomic_rc_ops={self.atomic_rc_ops}",
            f"peak_live={self.peak_live}",
            f"final_live={self.final_live}",
        ]
        for (c, w), (u, s) in sorted(self.reset_sites.items()):
            out.append(f"reset[{c}.{w}]={u}/{s}")
        for c, (u, f) in sorted(self.reuse_sites.items()):
            out.append(f"reuse[{c}]={u}/{f}")
        for (c, shape), n in sorted(self.alloc_sites.items()):
            out.append(f"alloc[{c}:{shape}]={n}")
        return out


class Heap:
    """Partial map from locations to cells, with reference-count bookkeeping.

    Every applied ``inc``/``dec`` on a real cell is counted, including the ones
    performed implicitly by var-app, reset and recursive frees.  Persistent
    cells ignore both and are not counted.
    """

    def __init__(self, stats: RunStats | None = None, trace: list | None = None):
        self.cells: dict[int, HeapCell] = {}
        self.next_loc = NULLTOK + 1
        self.stats = stats if stats is not None else RunStats()
        self.trace = trace
        self._live = 0

    def __contains__(self, loc: int) -> bool:
        return loc in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def live(self) -> int:
        return self._live

    def alloc(self, value: Value, site: str = "?") -> int:
        loc = self.next_loc
        self.next_loc += 1
        self.cells[loc] = HeapCell(value, 1)
        self._live += 1
        st = self.stats
        st.allocations += 1
        st.alloc_sites[(site, _shape(value))] += 1
        st.peak_live = max(st.peak_live, self._live)
        return loc

    def get(self, loc: int) -> HeapCell:
        cell = self.cells.get(loc)
        if cell is None:
            what = "null token" if loc == NULLTOK else f"freed location {loc}"
            raise UseAfterFree(f"access to {what}")
        return cell

    def _count(self, op: str, loc: int, cell: HeapCell) -> None:
        st = self.stats
        if op == "inc":
            st.inc_ops += 1
        else:
            st.dec_ops += 1
        if cell.tag is Tag.MT:
            st.atomic_rc_ops += 1
        if self.trace is not None:
            self.trace.append((op, loc, cell.tag))

    def inc(self, loc: int) -> None:
        cell = self.cells.get(loc)
        if cell is None:
            raise UseAfterFree(f"inc of {'null token' if loc == NULLTOK else f'freed location {loc}'}")
        if cell.tag is Tag.PERSISTENT:
            return
        self._count("inc", loc, cell)
        cell.rc += 1

    def dec(self, loc: int) -> None:
        if loc == NULLTOK:
            return
        work = [loc]
        first = True
        while work:
            l = work.pop()
            cell = self.cells.get(l)
            if cell is None:
                if first:
                    raise RcUnderflow(f"dec of absent location {l}")
                raise RcUnderflow(f"recursive dec reached absent location {l}")
            first = False
            if cell.tag is Tag.PERSISTENT:
                continue
            self._count("dec", l, cell)
            if cell.rc > 1:
                cell.rc -= 1
                continue
            del self.cells[l]
            self._live -= 1
            work.extend(reversed(cell.children()))

    def reachable(self, loc: int) -> list[int]:
        seen, out, stack = set(), [], [loc]
        while stack:
            l = stack.pop()
            if l == NULLTOK or l in seen:
                continue
            seen.add(l)
            out.append(l)
            stack.extend(self.get(l).children())
        return out

    def make_persistent(self, loc: int) -> None:
        """Test hook: tag every cell reachable from ``loc`` persistent."""
        for l in self.reachable(loc):
            cell = self.cells[l]
            if cell.tag is not Tag.PERSISTENT:
                cell.tag = Tag.PERSISTENT
                self._live -= 1

    def check_acyclic(self) -> bool:
        color: dict[int, int] = {}
        for root in self.cells:
            if root in color:
                continue
            stack = [(root, iter(self.cells[root].children()))]
            color[root] = 1
            while stack:
                node, it = stack[-1]
                for child in it:
                    if child not in self.cells:
                        continue
                    c = color.get(child, 0)
                    if c == 1:
                        return False
                    if c == 0:
                        color[child] = 1
                        stack.append((child, iter(self.cells[child].children())))
                        break
                else:
                    color[node] = 2
                    stack.pop()
        return True


# -- thread tags --------------------------------------------------------------


@dataclass(frozen=True)
class TagViolation:
    loc: int
    child: int
    msg: str


def check_heap_tags(heap: Heap) -> list[TagViolation]:
    """Persistent cells may reach only persistent cells; MT cells only MT or
    persistent ones."""
    out = []
    for loc, cell in heap.cells.items():
        if cell.tag is Tag.ST:
            continue
        for child in cell.children():
            ctag = heap.cells[child].tag if child in heap.cells else None
            if ctag is None:
                continue
            if cell.tag is Tag.PERSISTENT and ctag is not Tag.PERSISTENT:
                out.append(TagViolation(loc, child, f"persistent cell {loc} reaches {ctag.name} cell {child}"))
            elif cell.tag is Tag.MT and ctag is Tag.ST:
                out.append(TagViolation(loc, child, f"MT cell {loc} reaches ST cell {child}"))
    return out


class TagInvariantError(Exception):
    pass


def mark_mt(heap: Heap, loc: int, validate: bool = False) -> int:
    """Tag every single-threaded cell reachable from ``loc`` multi-threaded.

    The walk stops at cells that are already MT or persistent, so every cell
    is visited at most once over a run.  Returns the number of cells marked.
    """
    if validate:
        bad = check_heap_tags(heap)
        if bad:
            raise TagInvariantError("; ".join(v.msg for v in bad))
    if loc == NULLTOK:
        return 0
    marked = 0
    stack = [loc]
    while stack:
        l = stack.pop()
        cell = heap.get(l)
        if cell.tag is not Tag.ST:
            continue
        cell.tag = Tag.MT
        marked += 1
        stack.extend(cell.children())
    return marked


# -- values read back out of the heap ------------------------------------------


class PureValue:
    __slots__ = ()

    def __eq__(self, other):
        if not isinstance(other, PureValue):
            return NotImplemented
        return values_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return format_value(self)


class PCtor(PureValue):
    __slots__ = ("i", "children")

    def __init__(self, i: int, children=()):
        self.i = i
        self.children = tuple(children)

    def __repr__(self) -> str:
        return f"PCtor({self.i}, {list(self.children)!r})"


class PPap(PureValue):
    __slots__ = ("c", "args")

    def __init__(self, c: str, args=()):
        self.c = c
        self.args = tuple(args)

    def __repr__(self) -> str:
        return f"PPap({self.c!r}, {list(self.args)!r})"


def values_equal(a: PureValue, b: PureValue) -> bool:
    seen = set()
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        key = (id(x), id(y))
        if x is y or key in seen:
            continue
        seen.add(key)
        if isinstance(x, PCtor) and isinstance(y, PCtor):
            if x.i != y.i or len(x.children) != len(y.children):
                return False
            stack.extend(zip(x.children, y.children))
        elif isinstance(x, PPap) and isinstance(y, PPap):
            if x.c != y.c or len(x.args) != len(y.args):
                return False
            stack.extend(zip(x.args, y.args))
        else:
            return False
    return True


def format_value(v: PureValue) -> str:
    """``(C i v1 .. vn)`` for constructors, ``<pap c k>`` for partial apps."""
    out: list[str] = []
    stack: list = [v]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, PPap):
            out.append(f"<pap {item.c} {len(item.args)}>")
        else:
            out.append(f"(C {item.i}")
            stack.append(")")
            for child in reversed(item.children):
                stack.append(child)
                stack.append(" ")
    return "".join(out)


def read_out(heap: Heap, loc: int) -> PureValue:
    """Deep copy of the value at ``loc``.  Only a miscompiled program can tie
    a cycle (by recycling a cell that is still referenced); that raises."""
    memo: dict[int, PureValue] = {}
    expanding: set[int] = set()
    stack = [(loc, False)]
    while stack:
        l, ready = stack.pop()
        if l in memo:
            continue
        if not ready:
            # anything pushed after l's expansion lies below l
            if l in expanding:
                raise HeapCycle(f"cell {l} reaches itself")
            expanding.add(l)
        cell = heap.get(l)
        kids = cell.value.fields if isinstance(cell.value, CtorCell) else list(cell.value.args)
        if not ready:
            stack.append((l, True))
            for k in kids:
                if k == NULLTOK:
                    raise UseAfterFree(f"read of nulled field in cell {l}")
                if k not in memo:
                    stack.append((k, False))
            continue
        if isinstance(cell.value, CtorCell):
            memo[l] = PCtor(cell.value.i, [memo[k] for k in kids])
        else:
            memo[l] = PPap(cell.value.c, [memo[k] for k in kids])
    return memo[loc]


# -- the RC machine -----------------------------------------------------------


class Machine:
    """Big-step RC semantics with an explicit call stack.

    ``task_consts`` names constants treated as task entry points: their
    arguments are passed through ``mark_mt`` before the body runs, the way
    spawning a task marks the closure's reachable values.
    """

    def __init__(
        self,
        program: Program,
        *,
        task_consts=(),
        max_steps: Optional[int] = None,
        debug: bool = False,
        trace: list | None = None,
    ):
        self.program = program
        self.task_consts = frozenset(task_consts)
        self.max_steps = max_steps
        self.debug = debug
        self.stats = RunStats()
        self.heap = Heap(self.stats, trace)
        self.steps = 0

    def run(self, entry: str, args=()) -> int:
        """Evaluate ``entry`` applied to owned locations ``args``; returns the result location."""
        f = self.program.defs.get(entry)
        if f is None:
            raise UnknownConst(f"entry {entry!r} is not defined")
        if f.arity != len(args):
            raise BadApplication(f"entry {entry!r} takes {f.arity} arguments")
        return self._exec(entry, dict(zip(f.params, args)), f.body)

    def _exec(self, fn: str, env: dict, body) -> int:
        program, heap, stats = self.program, self.heap, self.stats
        frames: list[tuple] = []
        while True:
            self.steps += 1
            if self.max_steps is not None and self.steps > self.max_steps:
                raise StepLimit(f"exceeded {self.max_steps} steps", fn, body.pos)
            if self.debug:
                self._check_invariants(fn, body)
            pos = body.pos
            try:
                if isinstance(body, Ret):
                    loc = _lookup(env, body.x)
                    if not frames:
                        return loc
                    fn, env, x, body = frames.pop()
                    env[x] = loc
                    continue
                if isinstance(body, Case):
                    cell = heap.get(_lookup(env, body.x))
                    if not isinstance(cell.value, CtorCell):
                        raise CaseOnPap(f"case on partial application {cell.value.c!r}")
                    i = cell.value.i
                    if i > len(body.arms):
                        raise NoMatchingArm(f"constructor {i} but only {len(body.arms)} arms")
                    body = body.arms[i - 1].body
                    continue
                if isinstance(body, Inc):
                    heap.inc(_lookup(env, body.x))
                    body = body.rest
                    continue
                if isinstance(body, Dec):
                    heap.dec(_lookup(env, body.x))
                    body = body.rest
                    continue
                # Let
                x, e = body.x, body.e
                if isinstance(e, FullApp):
                    f = program.defs.get(e.c)
                    if f is None:
                        raise UnknownConst(f"constant {e.c!r} is not defined")
                    if len(e.args) != f.arity:
                        raise BadApplication(f"call {e.c} with {len(e.args)} args, arity {f.arity}")
                    locs = [_lookup(env, a) for a in e.args]
                    frames.append((fn, env, x, body.rest))
                    fn, env, body = self._enter(e.c, f, locs)
                    continue
                if isinstance(e, VarApp):
                    lx = _lookup(env, e.x)
                    ly = _lookup(env, e.y)
                    cell = heap.get(lx)
                    if not isinstance(cell.value, PapCell):
                        raise BadApplication(f"application of constructor cell {lx}")
                    c, stored = cell.value.c, cell.value.args
                    f = program.defs.get(c)
                    if f is None:
                        raise UnknownConst(f"constant {c!r} is not defined")
                    for l in stored:
                        heap.inc(l)
                    heap.dec(lx)
                    locs = [*stored, ly]
                    if len(locs) == f.arity:
                        frames.append((fn, env, x, body.rest))
                        fn, env, body = self._enter(c, f, locs)
                        continue
                    if len(locs) > f.arity:
                        raise BadApplication(f"over-application of {c}")
                    env[x] = heap.alloc(PapCell(c, tuple(locs)), fn)
                elif isinstance(e, PartApp):
                    f = program.defs.get(e.c)
                    if f is None:
                        raise UnknownConst(f"constant {e.c!r} is not defined")
                    if len(e.args) >= f.arity:
                        raise BadApplication(f"pap {e.c} with {len(e.args)} args, arity {f.arity}")
                    env[x] = heap.alloc(PapCell(e.c, tuple(_lookup(env, a) for a in e.args)), fn)
                elif isinstance(e, Ctor):
                    env[x] = heap.alloc(CtorCell(e.i, [_lookup(env, a) for a in e.args]), fn)
                elif isinstance(e, Proj):
                    cell = heap.get(_lookup(env, e.x))
                    if not isinstance(cell.value, CtorCell):
                        raise CaseOnPap(f"projection from partial application {cell.value.c!r}")
                    fields = cell.value.fields
                    if not 1 <= e.i <= len(fields):
                        raise ProjOutOfRange(f"proj {e.i} of a cell with {len(fields)} fields")
                    if fields[e.i - 1] == NULLTOK:
                        raise UseAfterFree(f"proj {e.i} of a reset cell")
                    env[x] = fields[e.i - 1]
                elif isinstance(e, Reset):
                    env[x] = self._reset(fn, x, _lookup(env, e.x))
                elif isinstance(e, Reuse):
                    env[x] = self._reuse(fn, _lookup(env, e.x), e.i, [_lookup(env, a) for a in e.args])
                else:
                    raise TypeError(f"not an expression: {e!r}")
                body = body.rest
            except InterpError as err:
                if err.fn is None:
                    raise type(err)(err.msg, fn, pos) from None
                raise

    def _enter(self, c: str, f, locs):
        if c in self.task_consts:
            for l in locs:
                mark_mt(self.heap, l)
        return c, dict(zip(f.params, locs)), f.body

    def _reset(self, fn: str, w: str, loc: int) -> int:
        heap = self.heap
        cell = heap.get(loc)
        site = self.stats.reset_sites.setdefault((fn, w), [0, 0])
        # only single-threaded cells can be owned exclusively
        if cell.rc == 1 and cell.tag is Tag.ST:
            if not isinstance(cell.value, CtorCell):
                raise ResetOnPap("reset of a unique partial application")
            kids = cell.value.fields
            cell.value.fields = [NULLTOK] * len(kids)
            for k in kids:
                heap.dec(k)
            site[0] += 1
            return loc
        heap.dec(loc)
        site[1] += 1
        return NULLTOK

    def _reuse(self, fn: str, tok: int, i: int, locs: list[int]) -> int:
        heap, stats = self.heap, self.stats
        site = stats.reuse_sites.setdefault(fn, [0, 0])
        if tok == NULLTOK:
            stats.reuse_fresh += 1
            site[1] += 1
            return heap.alloc(CtorCell(i, locs), fn)
        cell = heap.get(tok)
        v = cell.value
        if not isinstance(v, CtorCell) or cell.rc != 1 or any(k != NULLTOK for k in v.fields):
            raise ReuseSizeMismatch(f"reuse token {tok} does not name a reset cell")
        if len(v.fields) != len(locs):
            raise ReuseSizeMismatch(f"cell has {len(v.fields)} fields, ctor needs {len(locs)}")
        cell.value = CtorCell(i, locs)
        stats.reuse_uniq += 1
        site[0] += 1
        return tok

    def _check_invariants(self, fn, body) -> None:
        for loc, cell in self.heap.cells.items():
            if cell.rc < 1:
                raise RcUnderflow(f"cell {loc} has rc {cell.rc}", fn, body.pos)
        if not self.heap.check_acyclic():
            raise InterpError("heap contains a cycle", fn, body.pos)
        bad = check_heap_tags(self.heap)
        if bad:
            raise InterpError(bad[0].msg, fn, body.pos)


def _lookup(env: dict, x: str) -> int:
    try:
        return env[x]
    except KeyError:
        raise UnboundVar(f"variable {x!r} is unbound") from None


def eval_rc(
    p: Program,
    entry: str = "main",
    *,
    task_consts=(),
    max_steps: Optional[int] = None,
    debug: bool = False,
    trace: list | None = None,
) -> tuple[PureValue, RunStats]:
    """Run nullary ``entry``, read the result back, drop it, and demand an empty heap."""
    m = Machine(p, task_consts=task_consts, max_steps=max_steps, debug=debug, trace=trace)
    try:
        loc = m.run(entry)
        value = read_out(m.heap, loc)
        m.heap.dec(loc)
    except InterpError as err:
        err.stats = m.stats
        raise
    m.stats.final_live = m.heap.live()
    if m.stats.final_live:
        err = Leak(f"{m.stats.final_live} cell(s) still live after the result was dropped", entry)
        err.stats = m.stats
        raise err
    return value, m.stats


# -- the pure reference evaluator ---------------------------------------------


def eval_pure(p: Program, entry: str = "main", max_steps: Optional[int] = 1_000_000) -> PureValue:
    """Evaluate without reference counts: values are immutable trees, nothing is freed."""
    f = p.defs.get(entry)
    if f is None:
        raise UnknownConst(f"entry {entry!r} is not defined")
    if f.arity:
        raise BadApplication(f"entry {entry!r} is not nullary")
    fn, env, body = entry, {}, f.body
    frames: list[tuple] = []
    steps = 0
    while True:
        steps += 1
        if max_steps is not None and steps > max_steps:
            raise StepLimit(f"exceeded {max_steps} steps", fn, body.pos)
        if isinstance(body, Ret):
            v = _lookup(env, body.x)
            if not frames:
                return v
            fn, env, x, body = frames.pop()
            env[x] = v
            continue
        if isinstance(body, Case):
            v = _lookup(env, body.x)
            if not isinstance(v, PCtor):
                raise CaseOnPap(f"case on partial application {v.c!r}", fn, body.pos)
            if v.i > len(body.arms):
                raise NoMatchingArm(f"constructor {v.i} but only {len(body.arms)} arms", fn, body.pos)
            body = body.arms[v.i - 1].body
            continue
        if isinstance(body, (Inc, Dec)):
            body = body.rest
            continue
        x, e = body.x, body.e
        if isinstance(e, (FullApp, VarApp)):
            if isinstance(e, FullApp):
                c, args = e.c, [_lookup(env, a) for a in e.args]
            else:
                pap = _lookup(env, e.x)
                if not isinstance(pap, PPap):
                    raise BadApplication("application of a constructor value", fn, body.pos)
                c, args = pap.c, [*pap.args, _lookup(env, e.y)]
            callee = p.defs.get(c)
            if callee is None:
                raise UnknownConst(f"constant {c!r} is not defined", fn, body.pos)
            if len(args) < callee.arity and isinstance(e, VarApp):
                env[x] = PPap(c, args)
                body = body.rest
                continue
            if len(args) != callee.arity:
                raise BadApplication(f"{c} applied to {len(args)} args, arity {callee.arity}", fn, body.pos)
            frames.append((fn, env, x, body.rest))
            fn, env, body = c, dict(zip(callee.params, args)), callee.body
            continue
        if isinstance(e, PartApp):
            callee = p.defs.get(e.c)
            if callee is None:
                raise UnknownConst(f"constant {e.c!r} is not defined", fn, body.pos)
            if len(e.args) >= callee.arity:
                raise BadApplication(f"pap {e.c} with {len(e.args)} args", fn, body.pos)
            env[x] = PPap(e.c, [_lookup(env, a) for a in e.args])
        elif isinstance(e, (Ctor, Reuse)):
            env[x] = PCtor(e.i, [_lookup(env, a) for a in e.args])
        elif isinstance(e, Proj):
            v = _lookup(env, e.x)
            if not isinstance(v, PCtor):
                raise CaseOnPap(f"projection from partial application {v.c!r}", fn, body.pos)
            if not 1 <= e.i <= len(v.children):
                raise ProjOutOfRange(f"proj {e.i} of a value with {len(v.children)} fields", fn, body.pos)
            env[x] = v.children[e.i - 1]
        elif isinstance(e, Reset):
            env[x] = None
        else:
            raise TypeError(f"not an expression: {e!r}")
        body = body.rest
