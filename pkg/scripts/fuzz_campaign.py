"""Differential-testing campaign over generated programs.

Generates programs for a range of seeds and generator sizes, checks each
against the reference evaluator, and prints a summary per size plus any
failing seed with its shrunk program.

    python scripts/fuzz_campaign.py --seeds 2000 --jobs 4
"""
from __future__ import annotations

import argparse
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from rcir.difftest import differential_check, size
from rcir.gen import GenConfig, gen_program
from rcir.syntax import print_program


@dataclass(frozen=True)
class CampaignConfig:
    seeds: int = 500
    seed0: int = 0
    sizes: tuple[tuple[int, int], ...] = ((4, 6), (6, 10), (8, 14))  # (max_fns, max_body_len)
    jobs: int = 1


def check_seed(job: tuple[int, int, int]) -> tuple[int, int, str, int, str | None]:
    seed, max_fns, body = job
    p = gen_program(GenConfig(seed=seed, max_fns=max_fns, max_body_len=body))
    v = differential_check(p)
    shrunk = print_program(v.minimized) if v.minimized is not None else None
    return seed, size(p), "PASS" if v.ok else f"{v.failure}: {v.message}", v.stats.allocations if v.stats else 0, shrunk


def run(cfg: CampaignConfig) -> int:
    failures = 0
    for max_fns, body in cfg.sizes:
        jobs = [(s, max_fns, body) for s in range(cfg.seed0, cfg.seed0 + cfg.seeds)]
        start = time.perf_counter()
        if cfg.jobs > 1:
            with ProcessPoolExecutor(cfg.jobs) as pool:
                results = list(pool.map(check_seed, jobs, chunksize=16))
        else:
            results = [check_seed(j) for j in jobs]
        elapsed = time.perf_counter() - start
        verdicts = Counter(r[2].split(":")[0] for r in results)
        sizes = [r[1] for r in results]
        print(f"max_fns={max_fns} max_body_len={body}: {len(results)} programs, "
              f"mean size {sum(sizes) / len(sizes):.1f} nodes, {elapsed:.1f}s, verdicts {dict(verdicts)}")
        for seed, _, verdict, _, shrunk in results:
            if verdict != "PASS":
                failures += 1
                print(f"  seed {seed}: {verdict}")
                if shrunk:
                    print("    " + shrunk.replace("\n", "\n    "))
    return failures


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=CampaignConfig.seeds)
    ap.add_argument("--seed0", type=int, default=CampaignConfig.seed0)
    ap.add_argument("--jobs", type=int, default=CampaignConfig.jobs)
    args = ap.parse_args(argv)
    failures = run(CampaignConfig(seeds=args.seeds, seed0=args.seed0, jobs=args.jobs))
    print(f"total failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
