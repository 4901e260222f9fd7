import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcir import corpus
from rcir.check import check_wellformed
from rcir.gen import GenConfig, gen_program
from rcir.ir import Dialect, erase_incdec, erase_reuse, map_bodies
from rcir.pipeline import PipelineConfig, compile_program, full_pipeline
from rcir.syntax import parse_program


def kinds(text, dialect=Dialect.PURE):
    return sorted(v.kind for v in check_wellformed(parse_program(text, allow_fresh=True), dialect))


def test_pure_map_is_clean():
    assert check_wellformed(corpus.load("map")) == []


def test_compiled_map_with_rc_lines_removed_is_pure():
    q = full_pipeline(corpus.load("map"))
    stripped = map_bodies(q, lambda b: erase_reuse(erase_incdec(b)))
    assert check_wellformed(stripped, Dialect.PURE) == []


@pytest.mark.parametrize(
    "text, expected",
    [
        ("def f (x) =\n  let y = ctor 1 z;\n  ret y", ["scope"]),
        ("def f (x) =\n  ret y", ["scope"]),
        ("def f (x) =\n  case y of\n  | C 1/0 -> ret x", ["scope"]),
        ("def f (x) =\n  let y = ctor 1;\n  ret x", ["dead-let"]),
        ("def f (x) =\n  let x = ctor 1;\n  ret x", ["duplicate-name"]),
        ("def f (x) =\n  case x of\n  | C 1/0 ->\n    let y = ctor 1;\n    ret y\n  | C 2/0 ->\n    let y = ctor 2;\n    ret y",
         ["duplicate-name"]),
        ("def f (x) =\n  let y = call g x;\n  ret y", ["unknown-const"]),
        ("def f (x) =\n  let y = call f x x;\n  ret y", ["arity"]),
        ("def f (x) =\n  let y = call f;\n  ret y", ["arity"]),
        ("def f (x) =\n  let y = pap f x;\n  ret y", ["arity"]),
        ("def f (x) =\n  inc x;\n  ret x", ["dialect"]),
        ("def f (x) =\n  let w = reset x;\n  let y = reuse w ctor 1;\n  ret y", ["dialect", "dialect"]),
    ],
)
def test_violations(text, expected):
    assert kinds(text) == expected


def test_violations_carry_positions():
    (v,) = check_wellformed(parse_program("def f (x) =\n  let y = ctor 1 z;\n  ret y"))
    assert v.fn == "f" and v.pos == (2, 3)
    assert "z" in str(v) and "2:3" in str(v)


def test_reset_token_used_twice():
    text = """
def f (x) =
  let w = reset x;
  let a = reuse w ctor 1;
  let b = reuse w ctor 1 a;
  ret b
"""
    assert kinds(text, Dialect.RC) == ["reset-linearity"]


def test_reset_token_used_as_value():
    text = "def f (x) =\n  let w = reset x;\n  let a = ctor 1 w;\n  ret a"
    assert kinds(text, Dialect.RC) == ["reset-linearity"]


def test_reset_token_once_per_arm_is_fine():
    text = """
def f (x y) =
  let w = reset x;
  case y of
  | C 1/0 ->
    let a = reuse w ctor 1;
    ret a
  | C 2/0 ->
    dec w;
    ret y
"""
    assert kinds(text, Dialect.RC) == []


def test_rc_dialect_allows_dead_lets():
    assert kinds("def f (x) =\n  let y = ctor 1;\n  dec y;\n  ret x", Dialect.RC) == []


@pytest.mark.parametrize("passes", [("reuse",), ("reuse", "borrow"), ("reuse", "rc"), ("reuse", "borrow", "rc"), ("rc",)])
def test_pass_output_checks_on_corpus(passes):
    for name in corpus.names():
        q = compile_program(corpus.load(name), PipelineConfig(passes)).program
        assert check_wellformed(q, Dialect.RC) == [], name


@given(st.integers(0, 100_000))
def test_pass_output_checks_on_generated(seed):
    p = gen_program(GenConfig(seed=seed))
    assert check_wellformed(p) == []
    for passes in [("reuse",), ("reuse", "borrow", "rc"), ("borrow", "rc")]:
        q = compile_program(p, PipelineConfig(passes)).program
        assert check_wellformed(q, Dialect.RC) == []
