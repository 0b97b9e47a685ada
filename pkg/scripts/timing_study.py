#!/usr/bin/env python3
"""Constant-cost adaptation study over a long task sequence.

Runs one experiment with many equal-sized incremental tasks, then fits a
line to the per-task training times and reports its slope with a t-test.
Because the update never revisits earlier data, per-task cost should not
trend upward as tasks accumulate.

Usage:
    python scripts/timing_study.py [--tasks 50] [--expansion 128] [--csv times.csv]
"""

import argparse
import csv
import sys

import numpy as np

from akws import (
    HarnessConfig,
    SynthSpec,
    build_tasks,
    gen_synth_split,
    run_experiment,
    split_tasks,
)
from akws.harness import time_trend


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tasks", type=int, default=50, help="incremental task count")
    parser.add_argument("--per-class", type=int, default=40, help="training rows per class")
    parser.add_argument("--expansion", type=int, default=128)
    parser.add_argument("--gamma", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--csv", default=None, help="optional per-task timing CSV")
    args = parser.parse_args(argv)

    n_classes = args.tasks + 2  # two-class base task, one new class per step
    spec = SynthSpec(
        n_classes=n_classes,
        samples_per_class=args.per_class,
        raw_dim=12,
        cluster_separation=4.0,
        noise_sigma=1.0,
        seed=args.seed,
    )
    train, test = gen_synth_split(spec, 5)
    split = split_tasks(range(n_classes), 2, args.tasks, 1, seed=args.seed)
    tasks = build_tasks(train, test, split)
    cfg = HarnessConfig(
        gamma=args.gamma,
        expansion_size=args.expansion,
        activation="relu",
        seed=args.seed,
        extractor_hidden=16,
        extractor_epochs=3,
        extractor_lr=0.05,
    )
    result = run_experiment(tasks, cfg)
    tt = np.array(result.metrics.tt_per_task)
    slope, t_stat, p = time_trend(tt)
    print(f"tasks={args.tasks} expansion={args.expansion} batch_rows={args.per_class}")
    print(f"mean task time: {tt.mean() * 1e3:.3f} ms   (min {tt.min() * 1e3:.3f}, max {tt.max() * 1e3:.3f})")
    print(f"trend: slope={slope * 1e6:+.3f} us/task   t={t_stat:+.2f}   p={p:.4f}")
    verdict = "no significant upward trend" if not (slope > 0 and p < 0.01) else "UPWARD TREND DETECTED"
    print(f"verdict: {verdict}")
    print(f"final ACC={result.metrics.acc:.4f} BWT={result.metrics.bwt:+.4f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["task_index", "seconds"])
            writer.writerows(enumerate(tt.tolist()))
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
