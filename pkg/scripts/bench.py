#!/usr/bin/env python3
"""Time construction on random twin-free TPGs of growing size.

Generation and parsing are excluded from the construction timing. Prints
one row per size plus the growth factor relative to the previous size.
"""
import argparse
import gc
import time

from leafroot.construct import optimal_leaf_root
from leafroot.gen import gen_random_tpg
from leafroot.graph import parse_graph, write_graph


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1e4,1e5,1e6")
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--branching", type=int, default=64)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--modes", default="odd,even,best")
    ap.add_argument("--parse", action="store_true", help="also time a text round trip through parse_graph")
    args = ap.parse_args()

    sizes = [int(float(s)) for s in args.sizes.split(",")]
    modes = args.modes.split(",")
    print(f"{'n':>9} {'m':>10} {'gen_s':>7} " + " ".join(f"{m + '_s':>8} {'x':>5}" for m in modes) + (" parse_s" if args.parse else ""))
    prev = {}
    for n in sizes:
        t = time.perf_counter()
        g = gen_random_tpg(n, seed=args.seed, branching=args.branching, depth=args.depth)
        gen_s = time.perf_counter() - t
        cells = []
        for mode in modes:
            gc.collect()
            t = time.perf_counter()
            optimal_leaf_root(g, mode)
            el = time.perf_counter() - t
            ratio = f"{el / prev[mode]:.1f}" if mode in prev else "-"
            prev[mode] = el
            cells.append(f"{el:8.3f} {ratio:>5}")
        line = f"{n:>9} {g.m:>10} {gen_s:7.2f} " + " ".join(cells)
        if args.parse:
            text = write_graph(g)
            t = time.perf_counter()
            parse_graph(text)
            line += f" {time.perf_counter() - t:7.2f}"
        print(line, flush=True)


if __name__ == "__main__":
    main()
