"""Allocation and reuse counters for every corpus driver.

Runs each driver compiled with the full pipeline (and, for comparison,
without the reuse pass) and prints one row per run.

    python scripts/allocation_report.py [--csv out.csv]
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass

from rcir import corpus
from rcir.interp import eval_rc
from rcir.pipeline import PipelineConfig, compile_program

DRIVERS = {
    "map": ("small", "main", "shared", "nested"),
    "goForward": ("once", "main"),
    "rbtree_chained": ("main",),
    "rbtree_naive": ("main",),
    "swap": ("main",),
    "mkPairOf": ("main",),
}


@dataclass(frozen=True)
class ReportConfig:
    with_baseline: bool = True  # also run with the reuse pass switched off


@dataclass
class Row:
    program: str
    entry: str
    passes: str
    allocations: int
    reuse_uniq: int
    reuse_fresh: int
    reset_shared: int
    inc_ops: int
    dec_ops: int
    peak_live: int
    seconds: float


def measure(name: str, entry: str, config: PipelineConfig) -> Row:
    q = compile_program(corpus.load(name), config).program
    start = time.perf_counter()
    _, s = eval_rc(q, entry)
    return Row(name, entry, ",".join(config.passes), s.allocations, s.reuse_uniq, s.reuse_fresh,
               s.reset_shared, s.inc_ops, s.dec_ops, s.peak_live, round(time.perf_counter() - start, 4))


def run(cfg: ReportConfig) -> list[Row]:
    configs = [PipelineConfig()]
    if cfg.with_baseline:
        configs.append(PipelineConfig(("borrow", "rc")))
    return [measure(name, entry, c) for name, es in DRIVERS.items() for entry in es for c in configs]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--csv", help="also write the rows to this file")
    ap.add_argument("--no-baseline", action="store_true")
    args = ap.parse_args(argv)
    rows = run(ReportConfig(with_baseline=not args.no_baseline))
    fields = list(asdict(rows[0]))
    widths = {f: max(len(f), *(len(str(getattr(r, f))) for r in rows)) for f in fields}
    print("  ".join(f.ljust(widths[f]) for f in fields))
    for r in rows:
        print("  ".join(str(getattr(r, f)).ljust(widths[f]) for f in fields))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(asdict(r) for r in rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
