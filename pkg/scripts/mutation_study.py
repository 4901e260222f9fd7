"""How often is a single deleted inc/dec noticed?

For the corpus and for generated programs, deletes each inc/dec of the
compiled output in turn and records whether the static token check, the
interpreter, or neither notices.

    python scripts/mutation_study.py --generated 200
"""
from __future__ import annotations

import argparse
import random
import sys
from collections import Counter
from dataclasses import dataclass

from rcir import corpus
from rcir.analysis import verify_tokens
from rcir.difftest import delete_rc_instr, rc_sites
from rcir.gen import GenConfig, gen_program
from rcir.interp import InterpError, eval_pure, eval_rc
from rcir.pipeline import full_pipeline

ENTRIES = {"map": ("main", "small", "shared", "nested"), "goForward": ("main", "once")}
QUICK_ENTRIES = {"map": ("small",), "goForward": ("once",)}


@dataclass(frozen=True)
class StudyConfig:
    generated: int = 200
    seed0: int = 10_000
    quick: bool = False  # small corpus drivers, at most 10 mutants per program


def classify(mutant, expected: dict) -> str:
    static = bool(verify_tokens(mutant))
    dynamic = False
    for entry, want in expected.items():
        try:
            value, _ = eval_rc(mutant, entry, max_steps=5_000_000)
            dynamic |= value != want
        except InterpError:
            dynamic = True
    if static and dynamic:
        return "both"
    return "static only" if static else "dynamic only" if dynamic else "missed"


def study(programs, per_program: int | None = None) -> Counter:
    tally: Counter = Counter()
    rng = random.Random(0)
    for source, entries in programs:
        q = full_pipeline(source)
        expected = {e: eval_pure(source, e) for e in entries}
        sites = rc_sites(q)
        if per_program is not None and len(sites) > per_program:
            sites = rng.sample(sites, per_program)
        for site in sites:
            tally[classify(delete_rc_instr(q, site), expected)] += 1
    return tally


def report(label: str, tally: Counter) -> None:
    total = sum(tally.values())
    caught = total - tally["missed"]
    parts = ", ".join(f"{k}={tally[k]}" for k in ("both", "static only", "dynamic only", "missed"))
    print(f"{label}: {total} mutants, caught {caught} ({100 * caught / max(total, 1):.1f}%): {parts}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--generated", type=int, default=StudyConfig.generated)
    ap.add_argument("--quick", action="store_true", help="run only the small corpus drivers")
    args = ap.parse_args(argv)
    cfg = StudyConfig(generated=args.generated, quick=args.quick)
    entries = QUICK_ENTRIES if cfg.quick else ENTRIES
    cap = 10 if cfg.quick else None
    report("corpus", study(((corpus.load(n), entries.get(n, ("main",))) for n in corpus.names()), cap))
    gen = (gen_program(GenConfig(seed=s)) for s in range(cfg.seed0, cfg.seed0 + cfg.generated))
    report("generated", study((p, ("main",)) for p in gen))
    return 0


if __name__ == "__main__":
    sys.exit(main())
