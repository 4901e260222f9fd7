"""Borrow-signature inference and owned wrappers for partial applications."""
from __future__ import annotations

import networkx as nx

from .ir import (
    BORROWED,
    OWNED,
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
    called_consts,
    iter_lets,
    iter_nodes,
    is_tail_call,
)

BorrowSig = dict[str, tuple[Borrow, ...]]

WRAPPER_PREFIX = "%own_"


class BorrowError(Exception):
    """A manual ``@`` annotation contradicts reset safety."""


def collect_owned(b: FnBody, beta: BorrowSig) -> set[str]:
    """Variables that must not be borrowed: reset targets, owned call
    arguments, var-app operands, pap arguments, and projection sources whose
    projections land in the set."""
    if isinstance(b, Ret):
        return set()
    if isinstance(b, Case):
        out: set[str] = set()
        for arm in b.arms:
            out |= collect_owned(arm.body, beta)
        return out
    if isinstance(b, (Inc, Dec)):
        return collect_owned(b.rest, beta)
    s = collect_owned(b.rest, beta)
    e = b.e
    if isinstance(e, (Ctor, Reuse)):
        pass
    elif isinstance(e, Reset):
        s.add(e.x)
    elif isinstance(e, FullApp):
        if e.c not in beta:
            raise KeyError(f"unknown constant {e.c!r}")
        s.update(x for x, bi in zip(e.args, beta[e.c]) if bi is OWNED)
    elif isinstance(e, VarApp):
        s.update((e.x, e.y))
    elif isinstance(e, PartApp):
        # every pap target is, or is about to be wrapped as, all-owned
        if e.c not in beta:
            raise KeyError(f"unknown constant {e.c!r}")
        s.update(e.args)
    elif isinstance(e, Proj):
        if b.x in s:
            s.add(e.x)
    return s


def _reset_reachable(b: FnBody) -> set[str]:
    """Variables that are reset, directly or through projections."""
    s: set[str] = set()
    for let in reversed(list(iter_lets(b))):
        if isinstance(let.e, Reset):
            s.add(let.e.x)
        elif isinstance(let.e, Proj) and let.x in s:
            s.add(let.e.x)
    return s


def local_borrow_map(f: Fn, sig: tuple[Borrow, ...]) -> dict[str, Borrow]:
    """Borrow status of every variable of ``f``: parameters follow ``sig``,
    projections of borrowed values are borrowed, the rest owned."""
    bl = dict(zip(f.params, sig))
    for let in iter_lets(f.body):
        if isinstance(let.e, Proj) and bl.get(let.e.x, OWNED) is BORROWED:
            bl[let.x] = BORROWED
        else:
            bl.setdefault(let.x, OWNED)
    return bl


def call_graph(p: Program) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(p.defs)
    for c, f in p.items():
        g.add_edges_from((c, d) for d in called_consts(f.body) if d in p)
    return g


def infer_borrow(p: Program, tail_calls: bool = True, stats: dict | None = None) -> BorrowSig:
    """Infer a borrow signature for every constant of ``p``.

    Parameters start borrowed and flip to owned once they show up in
    ``collect_owned``; groups of mutually recursive constants are iterated
    together, callees first.  Parameters annotated ``@`` stay borrowed.  With
    ``tail_calls`` set, arguments that are owned at a tail call force the
    callee's parameter to owned as well, so no ``dec`` lands after the call.
    """
    frozen = {c: tuple(b is BORROWED for b in f.borrows) for c, f in p.items()}
    for c, f in p.items():
        hit = [y for y, fz in zip(f.params, frozen[c]) if fz and y in _reset_reachable(f.body)]
        if hit:
            raise BorrowError(f"{c}: parameter(s) {', '.join(hit)} annotated borrowed but reset")

    beta: BorrowSig = {c: (BORROWED,) * f.arity for c, f in p.items()}
    rounds = productive = 0

    def flip(c: str, positions) -> bool:
        sig = list(beta[c])
        changed = False
        for i in positions:
            if sig[i] is BORROWED and not frozen[c][i]:
                sig[i] = OWNED
                changed = True
        beta[c] = tuple(sig)
        return changed

    g = call_graph(p)
    cond = nx.condensation(g)
    order = [cond.nodes[n]["members"] for n in reversed(list(nx.topological_sort(cond)))]
    # deterministic member order within a group
    position = {c: k for k, c in enumerate(p.defs)}
    order = [sorted(scc, key=position.__getitem__) for scc in order]

    def fixpoint() -> None:
        nonlocal rounds, productive
        for scc in order:
            while True:
                rounds += 1
                changed = False
                for c in scc:
                    f = p[c]
                    owned = collect_owned(f.body, beta)
                    changed |= flip(c, [i for i, y in enumerate(f.params) if y in owned])
                if not changed:
                    break
                productive += 1

    fixpoint()
    while tail_calls:
        changed = False
        for c, f in p.items():
            bl = local_borrow_map(f, beta[c])
            for node in iter_nodes(f.body):
                if is_tail_call(node) and node.e.c in beta:
                    d = node.e.c
                    changed |= flip(d, [i for i, x in enumerate(node.e.args) if bl[x] is OWNED])
        if not changed:
            break
        productive += 1
        fixpoint()

    if stats is not None:
        stats["rounds"] = rounds
        stats["productive"] = productive  # rounds that flipped at least one entry
    return beta


def make_owned_wrappers(p: Program, beta: BorrowSig) -> tuple[Program, BorrowSig]:
    """Route every ``pap c`` with a borrowed parameter through ``%own_c``."""
    needed: list[str] = []
    for f in p.defs.values():
        for let in iter_lets(f.body):
            e = let.e
            if isinstance(e, PartApp) and BORROWED in beta[e.c] and e.c not in needed:
                needed.append(e.c)
    if not needed:
        return p, beta

    names = {c: WRAPPER_PREFIX + c for c in needed}

    def retarget(b: FnBody) -> FnBody:
        if isinstance(b, Let):
            e = b.e
            if isinstance(e, PartApp) and e.c in names:
                e = PartApp(names[e.c], e.args)
            return Let(b.x, e, retarget(b.rest), b.pos)
        if isinstance(b, Case):
            return Case(b.x, tuple(type(a)(a.arity, retarget(a.body)) for a in b.arms), b.pos)
        if isinstance(b, (Inc, Dec)):
            return type(b)(b.x, retarget(b.rest), b.pos)
        return b

    defs = {c: Fn(f.params, f.borrows, retarget(f.body), f.pos) for c, f in p.items()}
    beta = dict(beta)
    for c in needed:
        f = p[c]
        body = Let("%r", FullApp(c, f.params), Ret("%r"))
        defs[names[c]] = Fn(f.params, (OWNED,) * f.arity, body)
        beta[names[c]] = (OWNED,) * f.arity
    return Program(defs), beta


def annotate(p: Program, beta: BorrowSig) -> Program:
    """Copy ``beta`` into each function's parameter markers."""
    return Program({c: Fn(f.params, beta[c], f.body, f.pos) for c, f in p.items()})


def format_beta(beta: BorrowSig) -> str:
    return "".join(f"{c}: {''.join(str(b) for b in sig)}".rstrip() + "\n" for c, sig in beta.items())
