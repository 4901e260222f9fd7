"""Static checks over RC-dialect programs."""
from __future__ import annotations

from dataclasses import dataclass, field

from .ir import (
    BORROWED,
    OWNED,
    Arm,
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
    is_tail_call,
    iter_lets,
    iter_nodes,
)
from .syntax import FRESH_PREFIX

# -- reuse guards -------------------------------------------------------------


@dataclass(frozen=True)
class UnguardedCtor:
    fn: str
    var: str
    i: int
    arity: int
    pos: tuple | None

    def __str__(self) -> str:
        where = f"{self.pos[0]}:{self.pos[1]}" if self.pos else "?"
        return f"{self.fn}: let {self.var} = ctor {self.i} ({self.arity} fields) at {where}"


@dataclass
class ReuseReport:
    entries: list[UnguardedCtor] = field(default_factory=list)
    guarded: dict[str, int] = field(default_factory=dict)

    def unguarded(self, fn: str | None = None, min_arity: int = 0) -> int:
        return sum(1 for e in self.entries if fn in (None, e.fn) and e.arity >= min_arity)

    def by_fn(self) -> dict[str, int]:
        out = {c: 0 for c in self.guarded}
        for e in self.entries:
            out[e.fn] = out.get(e.fn, 0) + 1
        return out

    def format(self) -> str:
        lines = []
        for c, n in self.by_fn().items():
            lines.append(f"{c}: unguarded={n} guarded={self.guarded.get(c, 0)}")
            lines.extend(f"  {e}" for e in self.entries if e.fn == c)
        return "\n".join(lines) + ("\n" if lines else "")


def analyze_reuse_guards(p: Program) -> ReuseReport:
    """Every constructor allocation that no ``reuse`` guards, per function."""
    report = ReuseReport()
    for c, f in p.items():
        report.guarded[c] = 0
        for let in iter_lets(f.body):
            if isinstance(let.e, Reuse):
                report.guarded[c] += 1
            elif isinstance(let.e, Ctor):
                report.entries.append(UnguardedCtor(c, let.x, let.e.i, len(let.e.args), let.pos))
    return report


# -- token balance ------------------------------------------------------------


@dataclass(frozen=True)
class TokenViolation:
    fn: str
    kind: str  # underflow | leak | dangling
    var: str
    pos: tuple | None
    path: tuple[int, ...]

    def __str__(self) -> str:
        where = f" at {self.pos[0]}:{self.pos[1]}" if self.pos else ""
        arms = "/".join(map(str, self.path)) or "-"
        return f"{self.fn}: {self.kind} of {self.var}{where} (arms {arms})"


class _PathState:
    """Owned tokens held per variable along one control path.

    A variable holding no token is still usable when it is borrowed, or is a
    projection whose source is still usable.
    """

    __slots__ = ("tokens", "source", "borrowed")

    def __init__(self, tokens, source, borrowed):
        self.tokens = tokens
        self.source = source
        self.borrowed = borrowed

    def copy(self) -> "_PathState":
        return _PathState(dict(self.tokens), dict(self.source), set(self.borrowed))

    def usable(self, x: str) -> bool:
        while True:
            if self.tokens.get(x, 0) > 0 or x in self.borrowed:
                return True
            x = self.source.get(x)
            if x is None:
                return False


def verify_tokens(p: Program, fns=None) -> list[TokenViolation]:
    """Walk every control path of every function and check that each owned
    token is consumed exactly once and nothing is used after its last token
    is gone.  Parameter markers are read from the functions themselves."""
    out: list[TokenViolation] = []
    for c, f in p.items():
        if fns is not None and c not in fns:
            continue
        out.extend(_verify_fn(p, c, f))
    return out


def _verify_fn(p: Program, c: str, f: Fn) -> list[TokenViolation]:
    out: list[TokenViolation] = []
    tokens = {y: 1 for y, b in zip(f.params, f.borrows) if b is OWNED}
    borrowed = {y for y, b in zip(f.params, f.borrows) if b is BORROWED}
    start = _PathState(tokens, {}, borrowed)
    stack = [(f.body, start, (), f.pos)]

    while stack:
        b, st, path, pos = stack.pop()
        failed = False

        def report(kind: str, x: str) -> None:
            nonlocal failed
            out.append(TokenViolation(c, kind, x, pos, path))
            failed = True

        def use(x: str) -> None:
            if not st.usable(x):
                report("dangling", x)

        def consume(x: str) -> None:
            if st.tokens.get(x, 0) <= 0:
                report("underflow", x)
            else:
                st.tokens[x] -= 1

        while not failed:
            pos = b.pos or pos
            if isinstance(b, Ret):
                consume(b.x)
                if not failed:
                    for x, n in sorted(st.tokens.items()):
                        if n:
                            report("leak", x)
                break
            if isinstance(b, Case):
                use(b.x)
                if not failed:
                    for k in range(len(b.arms) - 1, -1, -1):
                        stack.append((b.arms[k].body, st.copy(), path + (k + 1,), pos))
                break
            if isinstance(b, Inc):
                use(b.x)
                st.tokens[b.x] = st.tokens.get(b.x, 0) + 1
                b = b.rest
                continue
            if isinstance(b, Dec):
                consume(b.x)
                b = b.rest
                continue
            x, e = b.x, b.e
            if isinstance(e, Proj):
                use(e.x)
                st.source[x] = e.x
                if e.x in st.borrowed:
                    st.borrowed.add(x)
            elif isinstance(e, Reset):
                consume(e.x)
                st.tokens[x] = 1
            elif isinstance(e, (Ctor, Reuse)):
                if isinstance(e, Reuse):
                    consume(e.x)
                for a in e.args:
                    consume(a)
                st.tokens[x] = 1
            elif isinstance(e, FullApp):
                callee = p.defs.get(e.c)
                sig = callee.borrows if callee is not None else (OWNED,) * len(e.args)
                # borrowed positions are checked before any owned argument is handed over
                for a, bi in zip(e.args, sig):
                    if bi is BORROWED:
                        use(a)
                for a, bi in zip(e.args, sig):
                    if bi is OWNED:
                        consume(a)
                st.tokens[x] = 1
            elif isinstance(e, PartApp):
                for a in e.args:
                    consume(a)
                st.tokens[x] = 1
            elif isinstance(e, VarApp):
                consume(e.x)
                consume(e.y)
                st.tokens[x] = 1
            b = b.rest
    return out


# -- tail calls ---------------------------------------------------------------


def tail_calls(b: FnBody) -> list[tuple[str, str]]:
    """``(result var, callee)`` for every ``let r = call c ..; ret r``."""
    return [(n.x, n.e.c) for n in iter_nodes(b) if is_tail_call(n)]


def check_tail_calls(source: Program, compiled: Program) -> list[tuple[str, str, str]]:
    """Tail calls of ``source`` that are no longer tail calls in ``compiled``.

    Sites are matched by their result variable, which is unique within a
    function.  Returns ``(fn, var, callee)`` triples.
    """
    broken = []
    for c, f in source.items():
        g = compiled.defs.get(c)
        sites = {let.x: let for let in iter_lets(g.body)} if g is not None else {}
        for r, d in tail_calls(f.body):
            let = sites.get(r)
            if let is None or not is_tail_call(let):
                broken.append((c, r, d))
    return broken


# -- canonical naming ---------------------------------------------------------


def _rename_expr(e, m):
    g = lambda v: m.get(v, v)  # noqa: E731
    if isinstance(e, FullApp):
        return FullApp(e.c, tuple(map(g, e.args)))
    if isinstance(e, PartApp):
        return PartApp(e.c, tuple(map(g, e.args)))
    if isinstance(e, VarApp):
        return VarApp(g(e.x), g(e.y))
    if isinstance(e, Ctor):
        return Ctor(e.i, tuple(map(g, e.args)))
    if isinstance(e, Proj):
        return Proj(e.i, g(e.x))
    if isinstance(e, Reset):
        return Reset(g(e.x))
    return Reuse(g(e.x), e.i, tuple(map(g, e.args)))


def rename_body(b: FnBody, m: dict[str, str]) -> FnBody:
    if isinstance(b, Ret):
        return Ret(m.get(b.x, b.x), b.pos)
    if isinstance(b, Let):
        return Let(m.get(b.x, b.x), _rename_expr(b.e, m), rename_body(b.rest, m), b.pos)
    if isinstance(b, Case):
        return Case(m.get(b.x, b.x), tuple(Arm(a.arity, rename_body(a.body, m)) for a in b.arms), b.pos)
    return type(b)(m.get(b.x, b.x), rename_body(b.rest, m), b.pos)


def alpha_normalize(p: Program) -> Program:
    """Rename generated ``%`` variables to ``%v0``, ``%v1``, ... by first binding
    occurrence in each function, so equal programs with different fresh-name
    choices compare equal."""
    defs = {}
    for c, f in p.items():
        m: dict[str, str] = {}
        for y in f.params:
            if y.startswith(FRESH_PREFIX):
                m[y] = f"{FRESH_PREFIX}v{len(m)}"
        for let in iter_lets(f.body):
            if let.x.startswith(FRESH_PREFIX) and let.x not in m:
                m[let.x] = f"{FRESH_PREFIX}v{len(m)}"
        params = tuple(m.get(y, y) for y in f.params)
        defs[c] = Fn(params, f.borrows, rename_body(f.body, m), f.pos)
    return Program(defs)
