import importlib.util
import sys
from pathlib import Path

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    sys.modules[name] = mod  # dataclasses look the module up by name
    spec.loader.exec_module(mod)
    return mod


def test_allocation_report(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    assert load("allocation_report").main(["--csv", str(out)]) == 0
    text = capsys.readouterr().out
    assert "rbtree_chained" in text
    assert out.read_text().startswith("program,entry,passes")


def test_fuzz_campaign(capsys):
    assert load("fuzz_campaign").main(["--seeds", "10"]) == 0
    assert "total failures: 0" in capsys.readouterr().out


def test_mutation_study(capsys):
    assert load("mutation_study").main(["--generated", "5", "--quick"]) == 0
    out = capsys.readouterr().out
    assert "corpus:" in out and "missed=0" in out
