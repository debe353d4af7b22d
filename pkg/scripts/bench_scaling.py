#!/usr/bin/env python3
"""Duplication-scaling experiment over the bundled fixture corpus.

Duplicates every inline test k times for k in {1, 10, 100, 1000}, runs the
full pipeline at each factor (one warm-up run plus three measured runs), and
prints total and per-test times. Expect per-test time to drop as k grows:
interpreter startup and extraction are paid once per file.

Usage:
    python3 scripts/bench_scaling.py [corpus_dir] [--ks 1,10,100,1000] [--jobs N]
"""

import argparse
import sys
from pathlib import Path

from itest.cli import bench_corpus, discover_files
from itest.runner import RunConfig

REPO_ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("corpus", nargs="?", default=str(REPO_ROOT / "fixtures"))
    parser.add_argument("--ks", default="1,10,100,1000")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--runs", type=int, default=3)
    args = parser.parse_args()

    files = discover_files([args.corpus])
    if not files:
        print(f"no .py files under {args.corpus}", file=sys.stderr)
        return 2
    ks = [int(part) for part in args.ks.split(",") if part.strip()]
    cfg = RunConfig(jobs=args.jobs, timeout_s=300.0)

    print(f"corpus: {args.corpus} ({len(files)} files), "
          f"{args.runs} measured runs per factor, jobs={args.jobs}")
    print(f"{'k':>6}  {'tests':>7}  {'total[s]':>9}  {'per-test[ms]':>12}")
    for k, count, total, per_test in bench_corpus(files, ks, args.runs, cfg):
        print(f"{k:>6}  {count:>7}  {total:>9.3f}  {per_test:>12.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
