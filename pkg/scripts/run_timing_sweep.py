#!/usr/bin/env python3
"""Time the design engines across problem sizes and print phase summaries.

Example:
    python scripts/run_timing_sweep.py --sizes 500:64,1000:64,1000:128 --k 20
"""

from __future__ import annotations

import argparse

import numpy as np

from pairdesign.bench import ENGINES, RunConfig, run_bench


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="500:32,1000:64", help="comma-separated n:d entries")
    parser.add_argument("--algorithms", default="ng,fg,sg,flp,slp")
    parser.add_argument("--k", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    tags = [t for t in args.algorithms.split(",") if t]
    for entry in args.sizes.split(","):
        n, d = (int(v) for v in entry.split(":"))
        config = RunConfig(n=n, d=d, k=args.k, seed=args.seed, repeats=args.repeats, workers=1)
        rep = run_bench(config, tags)
        print(f"n={n} d={d} k={args.k} ({args.repeats} repeats)")
        for tag in tags:
            rows = [r for r in rep.rows if r["algorithm"] == tag]
            total = np.mean([r["total_seconds"] for r in rows])
            pre = np.mean([r["preprocessing_seconds"] for r in rows])
            find = np.mean([np.mean(r["find_max_seconds"]) for r in rows])
            upd = np.mean([np.mean(r["update_seconds"]) for r in rows])
            line = (
                f"  {tag:>3}: total {total:8.4f}s  pre {pre:8.4f}s  "
                f"find-max {find * 1e3:8.3f}ms/iter  update {upd * 1e3:8.3f}ms/iter"
            )
            if "touch_counts" in rows[0]:
                line += f"  touches {int(np.mean([sum(r['touch_counts']) for r in rows]))}"
            print(line)


if __name__ == "__main__":
    main()
