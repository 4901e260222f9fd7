"""Textual format: tokenizer, recursive-descent parser and canonical printer.

Grammar (``--`` starts a line comment)::

    program := fndef*
    fndef   := "def" CONST "(" param* ")" "=" body
    param   := ["@"] VAR
    body    := "ret" VAR | "let" VAR "=" expr ";" body | "case" VAR "of" arm+
             | "inc" VAR ";" body | "dec" VAR ";" body
    arm     := "|" "C" INT "/" INT "->" body
    expr    := "ctor" INT VAR* | "proj" INT VAR | "call" CONST VAR*
             | "pap" CONST VAR* | "vapp" VAR VAR | "reset" VAR
             | "reuse" VAR "ctor" INT VAR*

A case nested inside a non-final arm makes ``arm+`` ambiguous.  Arms attach
to the innermost open case, except that a ``|`` beginning a line to the left
of the indentation of the innermost case closes it.  The printer indents
nested cases, so printed programs always re-parse to the same tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .ir import (
    BORROWED,
    OWNED,
    Arm,
    Case,
    Ctor,
    Dec,
    Expr,
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
)

KEYWORDS = frozenset(
    "def ret let case of inc dec ctor proj call pap vapp reset reuse".split()
)

FRESH_PREFIX = "%"

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<arrow>->)
  | (?P<ident>%?[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<punct>[()=;|/@])
    """,
    re.VERBOSE,
)

_ARM_TAG_RE = re.compile(r"C([0-9]+)$")


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | punct | arrow | eof
    text: str
    line: int
    col: int
    bol: bool  # first token on its line


def tokenize(text: str, allow_fresh: bool = False) -> list[Token]:
    toks: list[Token] = []
    line, line_start, bol = 1, 0, True
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
            bol = True
        elif kind in ("ws", "comment"):
            pass
        else:
            tok_text = m.group()
            if kind == "ident" and tok_text.startswith(FRESH_PREFIX) and not allow_fresh:
                raise ParseError(f"reserved name {tok_text!r} in source", line, col)
            toks.append(Token(kind, tok_text, line, col, bol))
            bol = False
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1, True))
    return toks


class _Parser:
    def __init__(self, toks: list[Token]):
        self.toks = toks
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def name(self, what: str = "variable") -> str:
        tok = self.tok
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.advance()
        return tok.text

    def integer(self, positive: bool = False) -> int:
        tok = self.tok
        if tok.kind != "int":
            self.error(f"expected integer, found {tok.text or 'end of input'!r}")
        self.advance()
        n = int(tok.text)
        if positive and n < 1:
            self.error("index must be positive", tok)
        return n

    def var_list(self) -> tuple[str, ...]:
        out = []
        while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            out.append(self.advance().text)
        return tuple(out)

    def line_indent(self, tok_index: int) -> int:
        j = tok_index
        while j > 0 and not self.toks[j].bol:
            j -= 1
        return self.toks[j].col

    # program := fndef*
    def program(self) -> Program:
        defs: dict[str, Fn] = {}
        while self.tok.kind != "eof":
            start = self.tok
            c, f = self.fndef()
            if c in defs:
                raise ParseError(f"duplicate definition of {c!r}", start.line, start.col)
            defs[c] = f
        return Program(defs)

    def fndef(self) -> tuple[str, Fn]:
        start = self.expect("def")
        c = self.name("constant name")
        self.expect("(")
        params, borrows = [], []
        while self.tok.text != ")":
            b = OWNED
            if self.tok.text == "@":
                self.advance()
                b = BORROWED
            ptok = self.tok
            y = self.name("parameter")
            if y in params:
                self.error(f"duplicate parameter {y!r}", ptok)
            params.append(y)
            borrows.append(b)
        self.expect(")")
        self.expect("=")
        body = self.body()
        return c, Fn(tuple(params), tuple(borrows), body, (start.line, start.col))

    def body(self) -> FnBody:
        tok = self.tok
        pos = (tok.line, tok.col)
        if tok.text == "ret" and tok.kind == "ident":
            self.advance()
            return Ret(self.name(), pos)
        if tok.text == "let" and tok.kind == "ident":
            self.advance()
            x = self.name()
            self.expect("=")
            e = self.expr()
            self.expect(";")
            return Let(x, e, self.body(), pos)
        if tok.text in ("inc", "dec") and tok.kind == "ident":
            self.advance()
            x = self.name()
            self.expect(";")
            node = Inc if tok.text == "inc" else Dec
            return node(x, self.body(), pos)
        if tok.text == "case" and tok.kind == "ident":
            case_index = self.i
            self.advance()
            x = self.name()
            self.expect("of")
            return self.arms(x, pos, self.line_indent(case_index))
        self.error(f"expected function body, found {tok.text or 'end of input'!r}")

    def arms(self, x: str, pos, indent: int) -> Case:
        arms: list[Arm] = []
        while self.tok.text == "|":
            bar = self.tok
            if arms and bar.bol and bar.col < indent:
                break
            self.advance()
            index, arity = self.arm_tag()
            if index != len(arms) + 1:
                self.error(f"arm C{index} out of order (expected C{len(arms) + 1})", bar)
            self.expect("->")
            arms.append(Arm(arity, self.body()))
        if not arms:
            self.error("case needs at least one arm")
        return Case(x, tuple(arms), pos)

    def arm_tag(self) -> tuple[int, int]:
        tok = self.tok
        if tok.kind != "ident":
            self.error("expected constructor tag 'C<index>'")
        self.advance()
        if tok.text == "C":
            index = self.integer(positive=True)
        else:
            m = _ARM_TAG_RE.match(tok.text)
            if not m:
                self.error("expected constructor tag 'C<index>'", tok)
            index = int(m.group(1))
            if index < 1:
                self.error("index must be positive", tok)
        self.expect("/")
        arity = self.integer()
        return index, arity

    def expr(self) -> Expr:
        tok = self.tok
        if tok.kind != "ident" or tok.text not in KEYWORDS:
            self.error(f"expected expression, found {tok.text or 'end of input'!r}")
        self.advance()
        kw = tok.text
        if kw == "ctor":
            i = self.integer(positive=True)
            return Ctor(i, self.var_list())
        if kw == "proj":
            i = self.integer(positive=True)
            return Proj(i, self.name())
        if kw == "call":
            return FullApp(self.name("constant name"), self.var_list())
        if kw == "pap":
            return PartApp(self.name("constant name"), self.var_list())
        if kw == "vapp":
            x = self.name()
            return VarApp(x, self.name())
        if kw == "reset":
            return Reset(self.name())
        if kw == "reuse":
            x = self.name()
            self.expect("ctor")
            i = self.integer(positive=True)
            return Reuse(x, i, self.var_list())
        self.error(f"unknown expression keyword {kw!r}", tok)


def parse_program(text: str, allow_fresh: bool = False) -> Program:
    """Parse ``text`` into a Program.

    Names starting with ``%`` are reserved for compiler-generated binders and
    are rejected unless ``allow_fresh`` is set (e.g. when re-reading the output
    of the compiler).
    """
    return _Parser(tokenize(text, allow_fresh)).program()


def parse_body(text: str, allow_fresh: bool = True) -> FnBody:
    p = _Parser(tokenize(text, allow_fresh))
    b = p.body()
    if p.tok.kind != "eof":
        p.error(f"trailing input {p.tok.text!r}")
    return b


# -- printing -----------------------------------------------------------------


def _vars(xs) -> str:
    return "".join(" " + x for x in xs)


def format_expr(e: Expr) -> str:
    if isinstance(e, Ctor):
        return f"ctor {e.i}{_vars(e.args)}"
    if isinstance(e, Proj):
        return f"proj {e.i} {e.x}"
    if isinstance(e, FullApp):
        return f"call {e.c}{_vars(e.args)}"
    if isinstance(e, PartApp):
        return f"pap {e.c}{_vars(e.args)}"
    if isinstance(e, VarApp):
        return f"vapp {e.x} {e.y}"
    if isinstance(e, Reset):
        return f"reset {e.x}"
    if isinstance(e, Reuse):
        return f"reuse {e.x} ctor {e.i}{_vars(e.args)}"
    raise TypeError(f"not an expression: {e!r}")


def _body_lines(b: FnBody, indent: int, out: list[str]) -> None:
    pad = " " * indent
    while True:
        if isinstance(b, Ret):
            out.append(f"{pad}ret {b.x}")
            return
        if isinstance(b, Let):
            out.append(f"{pad}let {b.x} = {format_expr(b.e)};")
            b = b.rest
        elif isinstance(b, Inc):
            out.append(f"{pad}inc {b.x};")
            b = b.rest
        elif isinstance(b, Dec):
            out.append(f"{pad}dec {b.x};")
            b = b.rest
        elif isinstance(b, Case):
            out.append(f"{pad}case {b.x} of")
            for i, arm in enumerate(b.arms, 1):
                out.append(f"{pad}| C {i}/{arm.arity} ->")
                _body_lines(arm.body, indent + 2, out)
            return
        else:
            raise TypeError(f"not a function body: {b!r}")


def format_body(b: FnBody, indent: int = 0) -> str:
    out: list[str] = []
    _body_lines(b, indent, out)
    return "\n".join(out)


def format_fn(c: str, f: Fn) -> str:
    params = " ".join(("@" if b.value == "B" else "") + y for y, b in zip(f.params, f.borrows))
    return f"def {c} ({params}) =\n{format_body(f.body, 2)}\n"


def print_program(p: Program) -> str:
    """Canonical text: two-space indentation, one instruction per line."""
    return "\n".join(format_fn(c, f) for c, f in p.items())
