import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcir import corpus
from rcir.analysis import check_tail_calls
from rcir.borrow import BorrowError, collect_owned, format_beta, infer_borrow, make_owned_wrappers
from rcir.gen import GenConfig, gen_program
from rcir.ir import BORROWED, OWNED, PartApp, Ret, iter_lets
from rcir.pipeline import PipelineConfig, compile_program, full_pipeline
from rcir.reuse import insert_reset_reuse
from rcir.syntax import parse_program

O, B = OWNED, BORROWED


def inferred(name, **kw):
    return infer_borrow(insert_reset_reuse(corpus.load(name)), **kw)


def test_collect_owned_examples():
    p = insert_reset_reuse(corpus.load("hasNone"))
    assert collect_owned(p["hasNone"].body, {"hasNone": (B,), "main": ()}) == set()
    assert collect_owned(Ret("x"), {}) == set()
    q = insert_reset_reuse(corpus.load("map"))
    beta = {c: (B,) * f.arity for c, f in q.items()}
    owned = collect_owned(q["map"].body, beta)
    assert owned & set(q["map"].params) == {"f", "xs"}
    # the element handed to f is a var-app operand as well
    assert owned == {"f", "xs", "x"}


def test_collect_owned_unknown_constant():
    p = parse_program("def f (x) =\n  let y = call g x;\n  ret y\ndef g (z) =\n  ret z\n")
    with pytest.raises(KeyError):
        collect_owned(p["f"].body, {"f": (B,)})


def test_collect_owned_projection_chain():
    p = parse_program("def f (x) =\n  let y = proj 1 x;\n  let z = proj 1 y;\n  let w = reset z;\n  ret x\n", allow_fresh=True)
    assert collect_owned(p["f"].body, {"f": (B,)}) == {"x", "y", "z"}


def test_signatures():
    assert inferred("hasNone")["hasNone"] == (B,)
    assert inferred("map")["map"] == (O, O)
    assert inferred("tailcall")["f"] == (O,)
    assert inferred("tailcall", tail_calls=False)["f"] == (B,)
    assert inferred("isNil")["isNil"] == (B,)
    assert inferred("goForward")["goForward"] == (O,)


def test_fig4_literal_id_is_borrowed():
    assert inferred("id")["id"] == (B,)
    assert inferred("mkPairOf")["mkPairOf"] == (B,)


def test_format_beta():
    assert format_beta({"map": (O, O), "hasNone": (B,), "main": ()}) == "map: OO\nhasNone: B\nmain:\n"


def test_manual_annotation_is_frozen():
    p = parse_program("def k (@x) =\n  let a = ctor 1 x;\n  let b = ctor 1 a;\n  let r = call g b x;\n  ret r\ndef g (u v) =\n  let w = vapp u v;\n  ret w\n")
    beta = infer_borrow(insert_reset_reuse(p))
    assert beta["k"] == (B,)
    assert beta["g"] == (O, O)


def test_manual_annotation_conflicting_with_reset():
    p = parse_program("def k (@xs) =\n  case xs of\n  | C 1/1 ->\n    let h = proj 1 xs;\n    let r = ctor 1 h;\n    ret r\n")
    with pytest.raises(BorrowError, match="xs"):
        infer_borrow(insert_reset_reuse(p))


def test_mutual_recursion_iterated_jointly():
    text = """
def even (n) =
  case n of
  | C 1/0 ->
    let t = ctor 2;
    ret t
  | C 2/1 ->
    let m = proj 1 n;
    let r = call odd m;
    let b = ctor 1 r;
    ret b

def odd (n) =
  case n of
  | C 1/0 ->
    let f = ctor 1;
    ret f
  | C 2/1 ->
    let m = proj 1 n;
    let w = ctor 1 m;
    let r = call even w;
    let b = ctor 1 r;
    ret b
"""
    beta = infer_borrow(parse_program(text))
    # even only hands a projection to odd, which keeps it borrowed
    assert beta == {"even": (B,), "odd": (B,)}


# -- owned wrappers -----------------------------------------------------------

PAP_HASNONE = corpus.source("hasNone") + """
def usePap (xs) =
  let g = pap hasNone;
  let r = vapp g xs;
  ret r
"""


def test_wrapper_created_for_borrowed_pap_target():
    p = insert_reset_reuse(parse_program(PAP_HASNONE))
    beta = infer_borrow(p)
    q, beta2 = make_owned_wrappers(p, beta)
    assert "%own_hasNone" in q
    assert beta2["%own_hasNone"] == (O,)
    paps = [l.e for l in iter_lets(q["usePap"].body) if isinstance(l.e, PartApp)]
    assert paps == [PartApp("%own_hasNone", ())]
    assert full_pipeline(parse_program(PAP_HASNONE))["%own_hasNone"].borrows == (O,)


def test_no_paps_unchanged():
    p = insert_reset_reuse(corpus.load("hasNone"))
    beta = infer_borrow(p)
    q, beta2 = make_owned_wrappers(p, beta)
    assert q is p and beta2 is beta


def test_all_owned_target_unchanged():
    p = insert_reset_reuse(corpus.load("map"))
    beta = infer_borrow(p)
    q, _ = make_owned_wrappers(p, beta)
    # succ only stores its argument, so it is borrowed and gets a wrapper;
    # map is all-owned and is partially applied as is
    assert beta["succ"] == (B,) and "%own_succ" in q
    assert beta["map"] == (O, O) and "%own_map" not in q
    paps = {l.e for l in iter_lets(q["nested"].body) if isinstance(l.e, PartApp)}
    assert paps == {PartApp("%own_succ", ()), PartApp("map", ("f",))}


# -- properties ---------------------------------------------------------------


@given(st.integers(0, 100_000))
def test_inference_properties(seed):
    src = gen_program(GenConfig(seed=seed, max_fns=5, max_body_len=8))
    p = insert_reset_reuse(src)
    stats: dict = {}
    beta = infer_borrow(p, stats=stats)
    plain = infer_borrow(p, tail_calls=False)
    total = sum(f.arity for f in p.defs.values())
    # monotone: each productive round flips at least one entry
    assert stats["productive"] <= total
    # refinement only adds owned entries
    for c in p:
        assert all(a is O or b is B for a, b in zip(beta[c], plain[c]))
    # safety: a final collect round adds nothing
    for c, f in p.items():
        owned = collect_owned(f.body, beta)
        assert all(bi is O for y, bi in zip(f.params, beta[c]) if y in owned)
    # tail calls survive the whole pipeline
    assert check_tail_calls(src, full_pipeline(src)) == []


def test_tail_calls_survive_on_corpus():
    for name in corpus.names():
        p = corpus.load(name)
        assert check_tail_calls(p, full_pipeline(p)) == [], name


def test_without_refinement_tail_call_breaks():
    p = corpus.load("tailcall")
    q = compile_program(p, PipelineConfig(tail_calls=False)).program
    assert check_tail_calls(p, q) == [("f", "r2", "f"), ("main", "v", "f")]
