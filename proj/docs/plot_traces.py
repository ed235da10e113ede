#!/usr/bin/env python3
"""Plot state and population evolution from `mfbg run` / `mfbg diagnose` output.

Usage: plot_traces.py <trace_dir> [--arm ARM] [--out PREFIX]

Reads states.csv and population.csv from the given directory and writes
<prefix>_states.png / <prefix>_population.png. The state figure shows the
agent-mean state of the chosen arm plus a per-agent band; the population
figure shows the arm's play fraction over time with a moving average.
"""
import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_states(path, arm):
    by_slot = defaultdict(list)
    with open(path) as f:
        for row in csv.DictReader(f):
            if int(row["arm"]) != arm:
                continue
            by_slot[int(row["n"])].append(float(row["value"]))
    slots = sorted(by_slot)
    means = [sum(by_slot[n]) / len(by_slot[n]) for n in slots]
    lows = [min(by_slot[n]) for n in slots]
    highs = [max(by_slot[n]) for n in slots]
    return slots, means, lows, highs


def read_population(path, arm):
    slots, fractions = [], []
    with open(path) as f:
        for row in csv.DictReader(f):
            if int(row["arm"]) != arm:
                continue
            slots.append(int(row["n"]))
            fractions.append(float(row["fraction"]))
    return slots, fractions


def moving_average(values, window):
    out = []
    for i in range(len(values)):
        lo = max(0, i - window // 2)
        hi = min(len(values), i + window // 2 + 1)
        out.append(sum(values[lo:hi]) / (hi - lo))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("trace_dir")
    ap.add_argument("--arm", type=int, default=2, help="1-based arm id")
    ap.add_argument("--out", default="trace")
    ap.add_argument("--window", type=int, default=50)
    args = ap.parse_args()

    slots, means, lows, highs = read_states(f"{args.trace_dir}/states.csv", args.arm)
    plt.figure(figsize=(6, 3))
    plt.fill_between(slots, lows, highs, alpha=0.2, label="per-agent range")
    plt.plot(slots, means, label=f"mean state, arm {args.arm}")
    plt.xlabel("slot")
    plt.ylabel("state")
    plt.legend()
    plt.tight_layout()
    plt.savefig(f"{args.out}_states.png", dpi=150)

    slots, fractions = read_population(f"{args.trace_dir}/population.csv", args.arm)
    plt.figure(figsize=(6, 3))
    plt.plot(slots, fractions, alpha=0.3, label=f"fraction, arm {args.arm}")
    plt.plot(slots, moving_average(fractions, args.window),
             label=f"moving average ({args.window})")
    plt.xlabel("slot")
    plt.ylabel("fraction")
    plt.legend()
    plt.tight_layout()
    plt.savefig(f"{args.out}_population.png", dpi=150)
    print(f"wrote {args.out}_states.png and {args.out}_population.png")


if __name__ == "__main__":
    main()
