"""Random generator of well-typed, terminating pure-dialect programs.

Programs are built over a small set of algebraic types.  Functions are
generated in order and may only call earlier functions, plus themselves on a
value that is structurally smaller than one of their parameters, so every run
terminates.  Partial applications only target first-order functions (no
function-typed parameters), which keeps variable applications from closing a
cycle through the call order.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .interp import StepLimit, eval_pure
from .ir import Arm, Case, Ctor, FnBody, FullApp, Let, PartApp, Program, Proj, Ret, VarApp, fn, free_vars

Type = tuple

BOOL: Type = ("Bool",)
NAT: Type = ("Nat",)
FN: Type = ("Fn",)  # Nat -> Nat


def List(a: Type) -> Type:
    return ("List", a)


def Pair(a: Type, b: Type) -> Type:
    return ("Pair", a, b)


def Opt(a: Type) -> Type:
    return ("Opt", a)


def Tree(a: Type) -> Type:
    return ("Tree", a)


def ctors(t: Type) -> list[list[Type]]:
    """Field types of each constructor, in index order."""
    k = t[0]
    if k == "Bool":
        return [[], []]
    if k == "Nat":
        return [[], [NAT]]
    if k == "List":
        return [[], [t[1], t]]
    if k == "Pair":
        return [[t[1], t[2]]]
    if k == "Opt":
        return [[], [t[1]]]
    if k == "Tree":
        return [[], [t, t[1], t]]
    raise ValueError(f"no constructors for {t}")


def max_arity(t: Type) -> int:
    return max(len(c) for c in ctors(t))


DATA_TYPES = (BOOL, NAT, List(NAT), Pair(NAT, BOOL), Opt(NAT), Tree(NAT), List(Pair(NAT, NAT)), Pair(List(NAT), NAT))


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    max_fns: int = 4
    max_body_len: int = 6
    max_ctor_arity: int = 3
    max_steps: int = 200_000

    def __post_init__(self):
        for name in ("max_fns", "max_body_len", "max_ctor_arity"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass
class _Sig:
    params: list[Type]
    result: Type

    @property
    def first_order(self) -> bool:
        return FN not in self.params


@dataclass
class _Scope:
    vars: list[tuple[str, Type]] = field(default_factory=list)
    known: dict[str, int] = field(default_factory=dict)  # var -> constructor index
    smaller: set[str] = field(default_factory=set)
    self_called: bool = False

    def copy(self) -> "_Scope":
        return _Scope(list(self.vars), dict(self.known), set(self.smaller), self.self_called)

    def of_type(self, t: Type) -> list[str]:
        return [x for x, u in self.vars if u == t]


class _Gen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.types = [t for t in DATA_TYPES if max_arity(t) <= cfg.max_ctor_arity]
        self.sigs: dict[str, _Sig] = {}
        self.defs = {}

    # -- naming
    def fresh(self) -> str:
        self.counter += 1
        return f"v{self.counter}"

    # -- values
    def value(self, t: Type, sc: _Scope, lets: list, depth: int = 0, size: int = 0) -> str:
        """A variable of type ``t``: an existing one, or a freshly built value.
        ``size`` > 0 forces a fresh spine of about that length."""
        have = sc.of_type(t)
        if have and size == 0 and self.rng.random() < 0.75:
            return self.rng.choice(have)
        if t == FN:
            return self.pap(sc, lets, depth)
        return self.build(t, sc, lets, depth, size)

    def build(self, t: Type, sc: _Scope, lets: list, depth: int = 0, size: int = 0) -> str:
        rng = self.rng
        options = ctors(t)
        recursive = [k for k, fs in enumerate(options) if t in fs]
        nullary = [k for k, fs in enumerate(options) if not fs]
        if size > 0 and recursive:
            k = recursive[0]
        elif (depth >= 2 or size < 0) and nullary:
            k = nullary[0]
        else:
            k = rng.randrange(len(options))
        args = []
        for ft in options[k]:
            if ft == t and size > 0:
                args.append(self.value(ft, sc, lets, depth + 1, size - 1 if size > 1 else -1))
            else:
                args.append(self.value(ft, sc, lets, depth + 1, -1 if size < 0 else 0))
        return self.bind(Ctor(k + 1, tuple(args)), t, sc, lets)

    def bind(self, e, t: Type, sc: _Scope, lets: list) -> str:
        x = self.fresh()
        lets.append((x, e))
        sc.vars.append((x, t))
        return x

    def pap(self, sc: _Scope, lets: list, depth: int) -> str:
        targets = [
            c for c, s in self.sigs.items()
            if s.params and s.first_order and s.result == NAT and s.params[-1] == NAT and c != self.current
        ]
        c = self.rng.choice(targets)
        args = tuple(self.value(t, sc, lets, depth + 1) for t in self.sigs[c].params[:-1])
        return self.bind(PartApp(c, args), FN, sc, lets)

    # -- instructions
    def step(self, sc: _Scope, lets: list, main: bool) -> None:
        rng = self.rng
        kinds = ["ctor", "call", "call", "proj"]
        if self.rec_param is not None and not sc.self_called and any(
            t == self.sigs[self.current].params[self.rec_param] for x, t in sc.vars if x in sc.smaller
        ):
            kinds += ["self"] * 3
        if sc.of_type(FN):
            kinds += ["vapp", "vapp"]
        if self.pap_ok:
            kinds.append("pap")
        kind = rng.choice(kinds)
        if kind == "ctor":
            t = rng.choice(self.types)
            self.build(t, sc, lets, 0, size=rng.randint(1, 5) if main else 0)
        elif kind == "call":
            callees = [c for c in self.sigs if c not in (self.current, "main")]
            if not callees:
                return
            c = rng.choice(callees)
            s = self.sigs[c]
            args = tuple(self.value(t, sc, lets, 0, size=rng.randint(0, 4) if main else 0) for t in s.params)
            self.bind(FullApp(c, args), s.result, sc, lets)
        elif kind == "self":
            s = self.sigs[self.current]
            k = self.rec_param
            small = [x for x, t in sc.vars if x in sc.smaller and t == s.params[k]]
            args = [self.value(t, sc, lets) for t in s.params]
            args[k] = rng.choice(small)
            sc.self_called = True
            self.bind(FullApp(self.current, tuple(args)), s.result, sc, lets)
        elif kind == "vapp":
            g = rng.choice(sc.of_type(FN))
            n = self.value(NAT, sc, lets)
            self.bind(VarApp(g, n), NAT, sc, lets)
        elif kind == "pap":
            self.pap(sc, lets, 0)
        elif kind == "proj":
            pairs = [(x, t) for x, t in sc.vars if t[0] == "Pair"]
            if pairs:
                x, t = rng.choice(pairs)
                i = rng.randint(1, 2)
                self.bind(Proj(i, x), t[i], sc, lets)

    @property
    def pap_ok(self) -> bool:
        return any(
            s.params and s.first_order and s.result == NAT and s.params[-1] == NAT
            for c, s in self.sigs.items()
            if c != self.current
        )

    def body(self, sc: _Scope, budget: int, result: Type, depth: int = 0, main: bool = False) -> FnBody:
        rng = self.rng
        lets: list = []
        while budget > 0:
            scrutinees = [
                (x, t) for x, t in sc.vars if t[0] not in ("Pair", "Fn") and x not in sc.known
            ]
            if depth < 3 and scrutinees and rng.random() < 0.3:
                x, t = rng.choice(scrutinees)
                arms = []
                for i, fields in enumerate(ctors(t), start=1):
                    inner = sc.copy()
                    inner.known[x] = i
                    arm_lets: list = []
                    for j, ft in enumerate(fields, start=1):
                        if rng.random() < 0.8:
                            y = self.bind(Proj(j, x), ft, inner, arm_lets)
                            if ft == t and (x in sc.smaller or x == self.rec_var):
                                inner.smaller.add(y)
                    rest = self.body(inner, budget - 2, result, depth + 1, main)
                    arms.append(Arm(len(fields), _wrap(arm_lets, rest)))
                return _wrap(lets, Case(x, tuple(arms)))
            self.step(sc, lets, main)
            budget -= 1
        r = self.value(result, sc, lets)
        return _wrap(lets, Ret(r))

    def function(self, c: str, sig: _Sig) -> None:
        self.current = c
        self.counter = 0
        params = [f"p{k}" for k in range(len(sig.params))]
        sc = _Scope(vars=list(zip(params, sig.params)))
        recursive = [k for k, t in enumerate(sig.params) if t[0] in ("Nat", "List", "Tree")]
        self.rec_param = self.rng.choice(recursive) if recursive and self.rng.random() < 0.7 else None
        self.rec_var = params[self.rec_param] if self.rec_param is not None else None
        self.sigs[c] = sig
        body = self.body(sc, self.rng.randint(1, self.cfg.max_body_len), sig.result)
        self.defs[c] = fn(params, drop_dead_lets(body))

    def program(self) -> Program:
        rng = self.rng
        n = rng.randint(1, self.cfg.max_fns)
        # the first function is always Nat -> Nat so partial applications exist
        sigs = [_Sig([NAT], NAT)]
        for _ in range(n - 1):
            k = rng.randint(1, 3)
            params = [rng.choice(self.types + [FN]) for _ in range(k)]
            sigs.append(_Sig(params, rng.choice(self.types)))
        for k, sig in enumerate(sigs):
            self.function(f"f{k}", sig)
        self.current = "main"
        self.rec_param = None
        self.rec_var = None
        self.counter = 0
        self.sigs["main"] = _Sig([], rng.choice(self.types))
        body = self.body(_Scope(), self.cfg.max_body_len + 2, self.sigs["main"].result, main=True)
        self.defs["main"] = fn([], drop_dead_lets(body))
        return Program(dict(self.defs))


def _wrap(lets, tail: FnBody) -> FnBody:
    for x, e in reversed(lets):
        tail = Let(x, e, tail)
    return tail


def drop_dead_lets(b: FnBody) -> FnBody:
    """Remove bindings whose variable is never used; every expression of the
    pure dialect is side-effect free, so this preserves meaning."""
    if isinstance(b, Ret):
        return b
    if isinstance(b, Case):
        return Case(b.x, tuple(Arm(a.arity, drop_dead_lets(a.body)) for a in b.arms), b.pos)
    rest = drop_dead_lets(b.rest)
    if b.x not in free_vars(rest):
        return rest
    return Let(b.x, b.e, rest, b.pos)


def gen_program(cfg: GenConfig) -> Program:
    """Deterministic in ``cfg``.  Candidates whose reference run exceeds the
    step budget are discarded and the next candidate from the same seed is
    tried."""
    rng = random.Random(cfg.seed)
    for _ in range(1000):
        p = _Gen(cfg, random.Random(rng.getrandbits(64))).program()
        try:
            eval_pure(p, "main", max_steps=cfg.max_steps)
        except StepLimit:
            continue
        return p
    raise RuntimeError(f"no terminating candidate for seed {cfg.seed} within the step budget")

