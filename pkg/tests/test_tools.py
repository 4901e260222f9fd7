import io
import subprocess
import sys

import pytest

from listings import MAP_LITERAL
from rcir import corpus
from rcir.check import check_wellformed
from rcir.cli import main
from rcir.difftest import Status, differential_check, dropping_pipeline, rc_sites, shrink_program, size
from rcir.gen import GenConfig, gen_program
from rcir.interp import eval_pure
from rcir.syntax import parse_program, print_program

# -- generator ------------------------------------------------------------------


def test_gen_config_validation():
    with pytest.raises(ValueError):
        GenConfig(max_fns=0)
    with pytest.raises(ValueError):
        GenConfig(max_body_len=0)
    with pytest.raises(ValueError):
        GenConfig(max_ctor_arity=0)


def test_gen_contract_tiny_budget():
    p = gen_program(GenConfig(seed=0, max_fns=1, max_body_len=1))
    assert check_wellformed(p) == []
    assert p["main"].arity == 0


def test_gen_is_deterministic():
    cfg = GenConfig(seed=42)
    assert print_program(gen_program(cfg)) == print_program(gen_program(cfg))


def test_gen_programs_are_distinct_and_terminate():
    texts = set()
    for seed in range(500):
        cfg = GenConfig(seed=seed)
        p = gen_program(cfg)
        assert check_wellformed(p) == []
        eval_pure(p, max_steps=cfg.max_steps)
        texts.add(print_program(p))
    assert len(texts) == 500


def test_gen_covers_language_features():
    text = "".join(print_program(gen_program(GenConfig(seed=s, max_fns=6, max_body_len=10))) for s in range(100))
    for kw in ("case", "proj", "call", "pap", "vapp", "ctor"):
        assert f" {kw} " in text or f"{kw} " in text, kw


# -- differential harness ---------------------------------------------------------


def test_map_driver_passes():
    v = differential_check(corpus.load("map"), entry="small")
    assert v.ok and v.status is Status.PASS
    assert v.stats.reuse_uniq == 3


def test_trivial_program_passes():
    v = differential_check(parse_program("def main () =\n  let a = ctor 1;\n  ret a\n"))
    assert v.ok and str(v) == "PASS"


def test_broken_pipeline_is_caught_and_shrunk():
    p = corpus.load("map")
    verdicts = [differential_check(p, dropping_pipeline(k), entry="small") for k in range(len(rc_sites(p)) + 6)]
    failures = [v for v in verdicts if not v.ok]
    assert failures
    kinds = {v.failure for v in failures}
    assert kinds & {"Leak", "RcUnderflow", "UseAfterFree"}
    for v in failures:
        assert v.minimized is not None
        assert size(v.minimized) <= size(p)
        assert check_wellformed(v.minimized) == []


def test_shrinking_reduces_generated_failure():
    for seed in range(40):
        p = gen_program(GenConfig(seed=seed, max_fns=5, max_body_len=10))
        v = differential_check(p, dropping_pipeline(0))
        if not v.ok and size(p) > 15:
            assert size(v.minimized) < size(p)
            again = differential_check(v.minimized, dropping_pipeline(0), shrink=False)
            assert again.failure == v.failure
            return
    pytest.fail("no failing generated program found")


def test_shrink_program_keeps_predicate():
    p = corpus.load("swap")
    small = shrink_program(p, lambda q: "swap" in q)
    assert "swap" in small and size(small) < size(p)


def test_oracle_failure_reported():
    bad = parse_program("def main () =\n  let a = ctor 1;\n  let b = proj 1 a;\n  ret b\n")
    v = differential_check(bad)
    assert v.status is Status.FAIL and v.failure == "oracle" and v.minimized is None


def test_compile_crash_reported():
    def crash(p):
        raise RuntimeError("boom")

    v = differential_check(parse_program("def main () =\n  let a = ctor 1;\n  ret a\n"), crash)
    assert v.failure == "compile" and "boom" in v.message


def test_corpus_all_pass():
    entries = {"map": ["main", "small", "shared", "nested"], "goForward": ["main", "once"]}
    for name in corpus.names():
        for entry in entries.get(name, ["main"]):
            assert differential_check(corpus.load(name), entry=entry).ok, (name, entry)


# -- CLI --------------------------------------------------------------------------


@pytest.fixture
def corpus_file(tmp_path):
    def write(name, text=None):
        path = tmp_path / f"{name}.ir"
        path.write_text(text if text is not None else corpus.source(name))
        return str(path)

    return write


def cli(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_cli_check(corpus_file, capsys):
    assert cli("check", corpus_file("map"))[0] == 0
    bad = corpus_file("bad", "def f (x) =\n  ret y\n")
    assert cli("check", bad)[0] == 2
    assert "scope" in capsys.readouterr().err


def test_cli_compile_and_beta(corpus_file):
    code, text = cli("compile", corpus_file("map"))
    assert code == 0 and "reset xs" in text
    code, beta = cli("compile", corpus_file("hasNone"), "--emit=beta")
    assert code == 0 and "hasNone: B\n" in beta
    code, text = cli("compile", corpus_file("swap"), "--passes=reuse")
    assert code == 0 and "reset" in text and "inc" not in text and "dec" not in text


def test_cli_compile_id_borrowed_and_owned(corpus_file):
    owned = corpus_file("own", "def id (x) =\n  ret x\n")
    borrowed = corpus_file("bor", "def id (@x) =\n  ret x\n")
    assert cli("compile", owned, "--passes=rc")[1] == "def id (x) =\n  ret x\n"
    assert cli("compile", borrowed, "--passes=rc")[1] == "def id (@x) =\n  inc x;\n  ret x\n"


def test_cli_run(corpus_file):
    path = corpus_file("map")
    code, text = cli("run", path, "--compile", "--entry", "small", "--stats")
    assert code == 0
    assert "reuse_uniq=3" in text and "reset_shared=0" in text and "final_live=0" in text
    code, oracle = cli("run", path, "--entry", "small", "--oracle")
    assert code == 0 and oracle.splitlines()[0] == text.splitlines()[0]
    trivial = corpus_file("t", "def main () =\n  let a = ctor 1;\n  ret a\n")
    code, text = cli("run", trivial, "--stats")
    assert code == 0 and "allocations=1" in text and "final_live=0" in text


def test_cli_run_shared_list(corpus_file):
    text = corpus.source("map") + (
        "\ndef s3 () =\n  let nil = ctor 1;\n  let a = ctor 1;\n  let l1 = ctor 2 a nil;\n"
        "  let l2 = ctor 2 a l1;\n  let l3 = ctor 2 a l2;\n  let f = pap succ;\n"
        "  let ys = call map f l3;\n  let n = call length l3;\n  let p = ctor 1 ys n;\n  ret p\n"
    )
    code, out = cli("run", corpus_file("m3", text), "--compile", "--entry", "s3", "--stats")
    assert code == 0
    assert "reuse_uniq=0" in out and "reuse_fresh=3" in out


def test_cli_runtime_error_exit_code(corpus_file, capsys):
    leak = corpus_file("leak", "def main () =\n  let a = ctor 1;\n  let b = ctor 1;\n  ret a\n")
    assert cli("run", leak)[0] == 3
    assert "Leak" in capsys.readouterr().err


def test_cli_usage_errors(corpus_file):
    assert cli("check", "/nonexistent/file.ir")[0] == 1
    assert cli("compile", corpus_file("map"), "--passes=rc,reuse")[0] == 1
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 1


def test_cli_analyze(corpus_file):
    code, text = cli("analyze", corpus_file("rbtree_chained"))
    assert code == 0
    assert "token check: 0 violation(s)" in text
    literal = corpus_file("lit", MAP_LITERAL)
    code, text = cli("analyze", literal)
    assert code == 2 and "leak of f" in text


def test_cli_fuzz():
    code, text = cli("fuzz", "--seeds", "20")
    assert code == 0 and "20 passed, 0 failed" in text


def test_cli_deterministic(corpus_file):
    path = corpus_file("goForward")
    for argv in (["compile", path], ["run", path, "--compile", "--stats"], ["analyze", path]):
        assert cli(*argv) == cli(*argv)


def test_module_entry_point(corpus_file):
    res = subprocess.run([sys.executable, "-m", "rcir", "compile", corpus_file("fst")], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("def fst")

